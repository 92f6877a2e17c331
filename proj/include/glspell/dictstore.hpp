#pragma once

// Compiled dictionary: a path-compressed trie over unstressed stems, a symbol
// table of shared infixes/inflections/stress tuples, per-stem word records,
// a trigram table and the memory-resident frequent-word set. The on-disk
// ".gwd" layout is documented in docs/gwd-format.md.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "glspell/greek_text.hpp"
#include "glspell/gwdl.hpp"

namespace glspell::dict {

class DictError : public std::runtime_error {
 public:
  enum class Kind { BadMagic, UnsupportedVersion, ChecksumMismatch, Truncated, Corrupt, Io, Limit };

  DictError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kDefaultMemorySize = 800;
inline constexpr std::uint32_t kNone = 0xFFFFFFFFu;

struct FormTriple {
  std::uint32_t infix = kNone;
  std::uint32_t inflection = 0;
  std::uint32_t stress = 0;

  bool operator==(const FormTriple&) const = default;
};

struct SymbolTable {
  std::vector<Letters> infixes;
  std::vector<std::vector<Letters>> inflections;
  std::vector<std::vector<int>> stress_tuples;
  std::vector<FormTriple> forms;

  std::uint32_t intern_infix(const Letters& infix);
  std::uint32_t intern_inflection(const std::vector<Letters>& suffixes);
  std::uint32_t intern_stress(const std::vector<int>& tuple);
  std::uint32_t intern_form(const FormTriple& form);
  std::uint32_t intern(const gwdl::ResolvedForm& form);

  bool operator==(const SymbolTable&) const = default;
};

enum RecordFlags : std::uint8_t { kNonInflected = 1 };

struct WordRecord {
  Letters stem;
  std::vector<std::uint8_t> syllable_breaks;
  std::uint8_t flags = 0;
  std::vector<std::uint32_t> form_ids;
};

class TrigramTable {
 public:
  static constexpr int kBegin = kAlphabetSize;
  static constexpr int kEnd = kAlphabetSize + 1;
  static constexpr int kSymbols = kAlphabetSize + 2;
  static constexpr std::size_t kCells = kSymbols * kSymbols * kSymbols;
  static constexpr std::size_t kBytes = (kCells + 7) / 8;

  // Adds every trigram of "^word$".
  void add_word(LettersView letters);
  bool contains(int a, int b, int c) const noexcept;
  // Accepts letters plus '^' (begin) and '$' (end) sentinels, e.g. U"^πρ".
  bool contains(std::u32string_view gram) const;
  // True if every trigram of "^word$" whose window overlaps letter positions
  // [begin, end) is present.
  bool window_ok(LettersView letters, std::size_t begin, std::size_t end) const noexcept;
  std::size_t size() const noexcept;
  void merge(const TrigramTable& other) noexcept;

  std::array<std::uint8_t, kBytes>& bits() noexcept { return bits_; }
  const std::array<std::uint8_t, kBytes>& bits() const noexcept { return bits_; }

 private:
  std::array<std::uint8_t, kBytes> bits_{};
};

struct LookupStats {
  std::size_t node_visits = 0;
  std::size_t record_fetches = 0;
};

struct StemMatch {
  std::uint32_t record_offset = 0;
  std::size_t prefix_length = 0;

  bool operator==(const StemMatch&) const = default;
};

enum class Match { Exact, StressOnly, None };

struct MatchOutcome {
  Match kind = Match::None;
  // Stress positions the dictionary allows for these letters.
  std::vector<std::optional<int>> expected;
  // Displays of those positions (filled for StressOnly).
  std::vector<std::string> expected_displays;
};

enum class LoadPolicy { Eager, Mapped };

struct SectionInfo {
  std::string tag;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
};

struct FrequencyItem {
  std::uint64_t count = 0;
  std::string form;
};

// Parses "count TAB form" lines. Throws DictError(Corrupt) on malformed lines.
std::vector<FrequencyItem> parse_frequency(std::string_view text);

class Storage;

class CompiledDictionary {
 public:
  static std::shared_ptr<const CompiledDictionary> from_bytes(std::vector<std::uint8_t> bytes);
  static std::shared_ptr<const CompiledDictionary> open(const std::string& path,
                                                        LoadPolicy policy = LoadPolicy::Eager);

  ~CompiledDictionary();
  CompiledDictionary(const CompiledDictionary&) = delete;
  CompiledDictionary& operator=(const CompiledDictionary&) = delete;

  std::span<const std::uint8_t> bytes() const noexcept;
  std::vector<std::uint8_t> serialize() const;

  std::vector<StemMatch> stem_candidates(LettersView letters, LookupStats* stats = nullptr) const;
  WordRecord fetch_record(std::uint32_t offset, LookupStats* stats = nullptr) const;

  // Distinct stress positions of every stored form spelled with `letters`
  // (none sorts first). Empty when the letters are not a dictionary word.
  std::vector<std::optional<int>> expected_stresses(LettersView letters,
                                                    LookupStats* stats = nullptr) const;
  MatchOutcome accepts(const NormalizedWord& word, LookupStats* stats = nullptr) const;
  // True if some stored word (stem + infix + suffix) starts with `prefix`.
  bool prefix_viable(LettersView prefix, LookupStats* stats = nullptr) const;

  bool memory_contains(LettersView letters, std::optional<int> stress) const;
  std::size_t memory_size() const noexcept { return memory_.size(); }
  const std::vector<std::pair<Letters, std::optional<int>>>& memory_words() const noexcept {
    return memory_order_;
  }

  const SymbolTable& symbols() const noexcept { return symbols_; }
  const TrigramTable& trigrams() const noexcept { return trigrams_; }

  std::uint32_t record_count() const noexcept { return record_count_; }
  std::uint32_t entry_count() const noexcept { return entry_count_; }
  std::uint64_t surface_form_count() const noexcept { return surface_form_count_; }
  std::uint32_t trie_node_count() const noexcept { return node_count_; }
  const std::vector<SectionInfo>& sections() const noexcept { return sections_; }

  // No node other than the root has a single child without being terminal.
  bool trie_fully_compressed() const;
  // Every stored stem (trie keys), in key order.
  std::vector<Letters> stems() const;

 private:
  CompiledDictionary() = default;
  void load(std::shared_ptr<Storage> storage);

  struct Node {
    std::uint32_t label_offset;
    std::uint16_t label_length;
    std::uint8_t child_count;
    std::uint8_t flags;
    std::uint32_t first_child;
    std::uint32_t record;
  };
  Node node(std::uint32_t index) const noexcept;

  std::shared_ptr<Storage> storage_;
  std::vector<SectionInfo> sections_;
  SymbolTable symbols_;
  TrigramTable trigrams_;
  std::unordered_set<std::u32string> memory_;
  std::vector<std::pair<Letters, std::optional<int>>> memory_order_;

  std::span<const std::uint8_t> trie_nodes_;
  std::span<const std::uint8_t> trie_labels_;
  std::span<const std::uint8_t> records_;
  std::uint32_t node_count_ = 0;
  std::uint32_t record_count_ = 0;
  std::uint32_t entry_count_ = 0;
  std::uint64_t surface_form_count_ = 0;
};

// Compiles resolved entries (and an optional frequency list) into the binary
// dictionary image. Deterministic: identical inputs give identical bytes.
std::vector<std::uint8_t> build_image(const gwdl::ResolvedRuleSet& rules,
                                      const std::vector<FrequencyItem>& frequency = {},
                                      std::size_t memory_size = kDefaultMemorySize);

std::shared_ptr<const CompiledDictionary> build(const gwdl::ResolvedRuleSet& rules,
                                                const std::vector<FrequencyItem>& frequency = {},
                                                std::size_t memory_size = kDefaultMemorySize);

// Words added by the user. Reads may run concurrently; mutations take an
// exclusive lock.
class UserDictionary {
 public:
  // Returns true if the word was not present. Throws GreekTextError.
  bool add(std::string_view word);
  bool contains(const NormalizedWord& word) const;
  bool contains(std::string_view word) const;
  std::vector<std::optional<int>> stresses(LettersView letters) const;
  // Stored lowercase displays for these letters, sorted.
  std::vector<std::string> displays(LettersView letters) const;
  // True if some stored word starts with `prefix`.
  bool has_prefix(LettersView prefix) const;
  std::size_t size() const;
  TrigramTable trigrams() const;

  // One NFC word per line, sorted, trailing newline.
  std::string to_text() const;
  void from_text(std::string_view text);
  void save(const std::string& path) const;
  void load(const std::string& path);

 private:
  using Key = std::pair<Letters, std::optional<int>>;

  bool add_locked(const NormalizedWord& word);

  mutable std::shared_mutex mutex_;
  std::map<Letters, std::vector<std::optional<int>>, std::less<>> by_letters_;
  std::map<Key, std::string> displays_;
  TrigramTable trigrams_;
};

}  // namespace glspell::dict
