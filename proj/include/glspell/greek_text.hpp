#pragma once

// Monotonic Modern Greek alphabet model: normalization of Unicode tokens to
// base letters plus a stress index, syllabification, and stress placement.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace glspell {

// Lowercase base letters α..ω; final sigma is stored as σ.
using Letters = std::u32string;
using LettersView = std::u32string_view;

class GreekTextError : public std::runtime_error {
 public:
  enum class Kind { NonGreekToken, NoVowel, PositionOutOfRange };

  GreekTextError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline constexpr int kAlphabetSize = 24;

// The 24 base letters in alphabetical order.
LettersView alphabet() noexcept;

// Index of a base letter in alphabet(), or -1.
int letter_code(char32_t letter) noexcept;
char32_t letter_from_code(int code);

bool is_vowel(char32_t letter) noexcept;

// Vowel pairs that form a single nucleus: αι ει οι ου υι αυ ευ.
bool is_digraph(char32_t first, char32_t second) noexcept;

// Any code point that belongs to a Greek word run (base, accented, archaic or
// polytonic letters). Used by the tokenizer; normalize() is stricter.
bool is_greek_letter(char32_t cp) noexcept;
bool is_combining_mark(char32_t cp) noexcept;
bool is_apostrophe(char32_t cp) noexcept;

struct NormalizedWord {
  Letters letters;
  // Syllable index counted from the word end (1 = final), if marked.
  std::optional<int> stress;
  // Per-letter uppercase flags from the input.
  std::vector<bool> upper;
  // Per-letter flags: a vowel pair ending here must not bind into a digraph
  // (set by a diaeresis, or by a tonos on the pair's first vowel).
  std::vector<bool> breaks;

  bool operator==(const NormalizedWord&) const = default;
};

struct Nucleus {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  bool operator==(const Nucleus&) const = default;
};

struct Syllabification {
  std::vector<Nucleus> nuclei;  // word start to word end

  std::size_t count() const noexcept { return nuclei.size(); }
  // Index of the letter that carries the tonos for the given position.
  std::size_t stressable_letter(int position_from_end) const;
};

NormalizedWord normalize(std::string_view text);

Syllabification syllabify(LettersView letters, const std::vector<bool>& breaks = {});

// Number of nuclei; 0 when the sequence has no vowel.
std::size_t syllable_count(LettersView letters) noexcept;

std::string apply_stress(LettersView letters, int position);

Letters strip_stress(const NormalizedWord& word);

// NFC display form including case and the stress mark.
std::string render(const NormalizedWord& word);

// Lowercase NFC rendering of unstressed letters (ς at word end).
std::string render_letters(LettersView letters);

// Lowercases and strips nothing: every code point must be an unaccented Greek
// letter. Returns std::nullopt otherwise.
std::optional<Letters> plain_letters(std::u32string_view text);

bool is_all_upper(const NormalizedWord& word) noexcept;

}  // namespace glspell
