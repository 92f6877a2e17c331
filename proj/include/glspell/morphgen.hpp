#pragma once

// Inflection generator: expands resolved lexicon entries into stressed
// surface forms (stem + infix + suffix, stress from the rule tuple).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "glspell/greek_text.hpp"
#include "glspell/gwdl.hpp"

namespace glspell::morph {

class MorphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SurfaceForm {
  std::string display;
  Letters unstressed;
  std::optional<int> stress;
  std::size_t entry_id = 0;
  std::size_t form_index = 0;
  std::size_t suffix_index = 0;  // 0-based position in the suffix list

  bool operator==(const SurfaceForm&) const = default;
};

// Stress position for the 1-based suffix index; a tuple shorter than the
// suffix list repeats its last value.
int stress_for(std::span<const int> tuple, std::size_t suffix_index_1based);

// Final stress of a word with `syllables` nuclei given the rule position:
// clamped to the word, none for monosyllables, vowel-less words and rule
// position 0 (unstressed words such as "για").
std::optional<int> surface_stress(int rule_position, std::size_t syllables) noexcept;

std::vector<SurfaceForm> expand_form(LettersView stem, const gwdl::ResolvedForm& form,
                                     std::size_t entry_id = 0, std::size_t form_index = 0);

// All forms of one entry, deduplicated on display, in form then suffix order.
std::vector<SurfaceForm> expand_entry(const gwdl::ResolvedEntry& entry);

// Streams every entry's paradigm in entry order; returns the number of forms.
std::size_t expand_all(const gwdl::ResolvedRuleSet& rules,
                       const std::function<void(const SurfaceForm&)>& sink);

}  // namespace glspell::morph
