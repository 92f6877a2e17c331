#pragma once

// Spelling checker and correction engine: three-tier lookup (memory, user,
// main dictionary), stress-position repair, homophone/allophone substitution
// and single-error reversal with trigram pruning.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glspell/dictstore.hpp"
#include "glspell/greek_text.hpp"

namespace glspell::correct {

enum class ErrorClass { Stress, Orthographic, Deletion, Insertion, Substitution, Transposition };

// "stress", "orthographic", "deletion", "insertion", "substitution", "transposition".
std::string_view class_name(ErrorClass c) noexcept;
bool is_typographic(ErrorClass c) noexcept;
// 0 for stress, 1 for orthographic, 2 for the typographic classes.
int class_priority(ErrorClass c) noexcept;

enum class Source { Memory, User, Main };
std::string_view source_name(Source s) noexcept;

struct Suggestion {
  std::string display;
  ErrorClass error_class = ErrorClass::Stress;
  int rank = 0;

  bool operator==(const Suggestion&) const = default;
};

struct CheckResult {
  bool accepted = false;
  std::optional<Source> source;  // set when accepted
  // Letters are a main-dictionary word but the stress is wrong.
  bool stress_only = false;
  std::vector<std::string> expected_displays;
};

struct Candidate {
  std::string display;  // lowercase
  ErrorClass error_class = ErrorClass::Stress;

  bool operator==(const Candidate&) const = default;
};

struct ProbeStats {
  std::size_t probes = 0;  // dictionary lookups of candidate strings
  std::size_t pruned = 0;  // candidates rejected by the trigram filter
};

// A grapheme of the input and the spellings it may stand for (itself first).
struct Grapheme {
  Letters text;
  std::vector<Letters> alternatives;

  bool substitutable() const noexcept { return alternatives.size() > 1; }
};

// Longest-match segmentation over the homophone sets {ε, αι}, {ο, ω},
// {η, ι, υ, ει, οι} and the allophone pairs χθ/χτ, φθ/φτ, σθ/στ, αυ/αβ,
// ψ/πσ, ξ/κσ. The digraphs ου, ευ, υι are kept whole.
std::vector<Grapheme> segment_graphemes(LettersView letters);

struct CheckerOptions {
  std::size_t max_suggestions = 10;
  bool trigram_pruning = true;
};

class Checker {
 public:
  explicit Checker(std::shared_ptr<const dict::CompiledDictionary> main,
                   std::shared_ptr<dict::UserDictionary> user = nullptr, CheckerOptions options = {});

  // Throws GreekTextError when the token does not normalize.
  CheckResult check(std::string_view token) const;
  CheckResult check(const NormalizedWord& word) const;
  bool accepted(std::string_view token) const;

  // Ranked, deduplicated, capped and rendered in the token's case pattern.
  // Empty for accepted tokens.
  std::vector<Suggestion> suggest(std::string_view token) const;
  std::vector<Suggestion> suggest(const NormalizedWord& word) const;

  // Every accepted display (main and user dictionaries) spelled with `letters`.
  // Counts one probe.
  std::vector<std::string> lookup(LettersView letters, ProbeStats* stats = nullptr) const;

  // Displays accepted for these letters with a stress other than `stress`.
  std::vector<std::string> stress_candidates(const NormalizedWord& word) const;

  // Dictionary-guided homophone/allophone search; includes the identity.
  std::vector<std::string> orthographic_candidates(LettersView letters,
                                                   ProbeStats* stats = nullptr) const;

  // Reversal generators, each tagged with the error it undoes.
  std::vector<Candidate> reverse_deletion(LettersView letters, ProbeStats* stats = nullptr) const;
  std::vector<Candidate> reverse_insertion(LettersView letters, ProbeStats* stats = nullptr) const;
  std::vector<Candidate> reverse_substitution(LettersView letters, ProbeStats* stats = nullptr) const;
  std::vector<Candidate> reverse_transposition(LettersView letters,
                                               ProbeStats* stats = nullptr) const;
  std::vector<Candidate> reversal_candidates(LettersView letters, ProbeStats* stats = nullptr) const;

  const CheckerOptions& options() const noexcept { return options_; }
  void set_options(const CheckerOptions& options) { options_ = options; }
  const dict::CompiledDictionary& main() const noexcept { return *main_; }
  const std::shared_ptr<dict::UserDictionary>& user() const noexcept { return user_; }

 private:
  dict::TrigramTable trigrams() const;
  void probe(const Letters& candidate, ErrorClass tag, ProbeStats* stats,
             std::vector<Candidate>& out) const;

  std::shared_ptr<const dict::CompiledDictionary> main_;
  std::shared_ptr<dict::UserDictionary> user_;
  CheckerOptions options_;
};

// Renders a lowercase display in the case pattern of `pattern` (initial
// capital or all capitals).
std::string match_case(std::string_view display, const NormalizedWord& pattern);

}  // namespace glspell::correct
