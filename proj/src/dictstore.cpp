#include "glspell/dictstore.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <deque>
#include <fstream>
#include <sstream>

#include "bytes.hpp"
#include "glspell/morphgen.hpp"
#include "glspell/utf8.hpp"

namespace glspell::dict {

using detail::ByteReader;
using detail::ByteWriter;

namespace {

constexpr std::uint8_t kMagic[4] = {'G', 'W', 'D', '1'};
constexpr std::size_t kHeaderSize = 8;
constexpr std::size_t kDirEntrySize = 20;
constexpr std::size_t kNodeSize = 16;
constexpr std::uint8_t kTerminal = 1;
constexpr const char* kTags[] = {"SYMS", "TRIE", "RECS", "TRIG", "FREQ"};

std::uint32_t tag_value(const char* tag) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(tag[0])) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(tag[1])) << 8) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(tag[2])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(tag[3])) << 24);
}

std::uint32_t checksum(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t n = std::min<std::size_t>(bytes.size() - pos, 1u << 30);
    crc = crc32(crc, bytes.data() + pos, static_cast<uInt>(n));
    pos += n;
  }
  return static_cast<std::uint32_t>(crc);
}

std::uint8_t code_of(char32_t letter) {
  const int c = letter_code(letter);
  if (c < 0) throw DictError(DictError::Kind::Corrupt, "letter outside the Greek alphabet");
  return static_cast<std::uint8_t>(c);
}

void write_letters(ByteWriter& w, LettersView letters) {
  if (letters.size() > 255) throw DictError(DictError::Kind::Limit, "letter sequence longer than 255");
  w.u8(static_cast<std::uint8_t>(letters.size()));
  for (char32_t c : letters) w.u8(code_of(c));
}

Letters read_letters(ByteReader& r) {
  const std::uint8_t n = r.u8();
  Letters out;
  out.reserve(n);
  for (std::uint8_t code : r.raw(n)) {
    if (code >= kAlphabetSize) throw DictError(DictError::Kind::Corrupt, "bad letter code");
    out.push_back(letter_from_code(code));
  }
  return out;
}

std::u32string memory_key(LettersView letters, std::optional<int> stress) {
  std::u32string key(letters);
  key.push_back(static_cast<char32_t>(stress.value_or(0)));
  return key;
}

}  // namespace

// ---------------------------------------------------------------------------
// Storage

class Storage {
 public:
  virtual ~Storage() = default;
  virtual std::span<const std::uint8_t> data() const noexcept = 0;
};

namespace {

class VectorStorage final : public Storage {
 public:
  explicit VectorStorage(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}
  std::span<const std::uint8_t> data() const noexcept override { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class MappedStorage final : public Storage {
 public:
  explicit MappedStorage(const std::string& path) {
    const int fd = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd < 0) throw DictError(DictError::Kind::Io, "cannot open " + path);
    struct stat st {};
    if (::fstat(fd, &st) != 0) {
      ::close(fd);
      throw DictError(DictError::Kind::Io, "cannot stat " + path);
    }
    size_ = static_cast<std::size_t>(st.st_size);
    if (size_ == 0) {
      ::close(fd);
      throw DictError(DictError::Kind::Truncated, "empty dictionary file " + path);
    }
    void* p = ::mmap(nullptr, size_, PROT_READ, MAP_PRIVATE, fd, 0);
    ::close(fd);
    if (p == MAP_FAILED) throw DictError(DictError::Kind::Io, "cannot map " + path);
    addr_ = static_cast<const std::uint8_t*>(p);
  }
  ~MappedStorage() override { ::munmap(const_cast<std::uint8_t*>(addr_), size_); }
  MappedStorage(const MappedStorage&) = delete;
  MappedStorage& operator=(const MappedStorage&) = delete;

  std::span<const std::uint8_t> data() const noexcept override { return {addr_, size_}; }

 private:
  const std::uint8_t* addr_ = nullptr;
  std::size_t size_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// Symbol table

std::uint32_t SymbolTable::intern_infix(const Letters& infix) {
  if (infix.empty()) return kNone;
  const auto it = std::find(infixes.begin(), infixes.end(), infix);
  if (it != infixes.end()) return static_cast<std::uint32_t>(it - infixes.begin());
  infixes.push_back(infix);
  return static_cast<std::uint32_t>(infixes.size() - 1);
}

std::uint32_t SymbolTable::intern_inflection(const std::vector<Letters>& suffixes) {
  const auto it = std::find(inflections.begin(), inflections.end(), suffixes);
  if (it != inflections.end()) return static_cast<std::uint32_t>(it - inflections.begin());
  inflections.push_back(suffixes);
  return static_cast<std::uint32_t>(inflections.size() - 1);
}

std::uint32_t SymbolTable::intern_stress(const std::vector<int>& tuple) {
  const auto it = std::find(stress_tuples.begin(), stress_tuples.end(), tuple);
  if (it != stress_tuples.end()) return static_cast<std::uint32_t>(it - stress_tuples.begin());
  stress_tuples.push_back(tuple);
  return static_cast<std::uint32_t>(stress_tuples.size() - 1);
}

std::uint32_t SymbolTable::intern_form(const FormTriple& form) {
  const auto it = std::find(forms.begin(), forms.end(), form);
  if (it != forms.end()) return static_cast<std::uint32_t>(it - forms.begin());
  forms.push_back(form);
  return static_cast<std::uint32_t>(forms.size() - 1);
}

std::uint32_t SymbolTable::intern(const gwdl::ResolvedForm& form) {
  return intern_form({intern_infix(form.infix), intern_inflection(form.suffixes),
                      intern_stress(form.stress)});
}

// ---------------------------------------------------------------------------
// Trigrams

namespace {

int symbol_of(char32_t c) {
  if (c == U'^') return TrigramTable::kBegin;
  if (c == U'$') return TrigramTable::kEnd;
  return letter_code(c == U'ς' ? U'σ' : c);
}

std::size_t cell(int a, int b, int c) {
  return (static_cast<std::size_t>(a) * TrigramTable::kSymbols + static_cast<std::size_t>(b)) *
             TrigramTable::kSymbols +
         static_cast<std::size_t>(c);
}

// Symbol at padded position p of "^letters$".
int padded(LettersView letters, std::size_t p) {
  if (p == 0) return TrigramTable::kBegin;
  if (p == letters.size() + 1) return TrigramTable::kEnd;
  return letter_code(letters[p - 1]);
}

}  // namespace

void TrigramTable::add_word(LettersView letters) {
  const std::size_t n = letters.size() + 2;
  for (std::size_t p = 0; p + 2 < n; ++p) {
    const int a = padded(letters, p), b = padded(letters, p + 1), c = padded(letters, p + 2);
    if (a < 0 || b < 0 || c < 0) continue;
    const std::size_t i = cell(a, b, c);
    bits_[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
}

bool TrigramTable::contains(int a, int b, int c) const noexcept {
  if (a < 0 || b < 0 || c < 0 || a >= kSymbols || b >= kSymbols || c >= kSymbols) return false;
  const std::size_t i = cell(a, b, c);
  return (bits_[i / 8] >> (i % 8)) & 1u;
}

bool TrigramTable::contains(std::u32string_view gram) const {
  if (gram.size() != 3) return false;
  return contains(symbol_of(gram[0]), symbol_of(gram[1]), symbol_of(gram[2]));
}

bool TrigramTable::window_ok(LettersView letters, std::size_t begin, std::size_t end) const noexcept {
  // Letter i sits at padded position i + 1; a trigram starting at padded
  // position p covers p..p+2.
  const std::size_t n = letters.size() + 2;
  const std::size_t lo_pad = begin + 1;
  const std::size_t hi_pad = end + 1;  // exclusive
  const std::size_t first = lo_pad >= 2 ? lo_pad - 2 : 0;
  for (std::size_t p = first; p + 2 < n && p < hi_pad; ++p) {
    if (!contains(padded(letters, p), padded(letters, p + 1), padded(letters, p + 2))) return false;
  }
  return true;
}

std::size_t TrigramTable::size() const noexcept {
  std::size_t count = 0;
  for (std::uint8_t b : bits_) count += static_cast<std::size_t>(__builtin_popcount(b));
  return count;
}

void TrigramTable::merge(const TrigramTable& other) noexcept {
  for (std::size_t i = 0; i < kBytes; ++i) bits_[i] |= other.bits_[i];
}

// ---------------------------------------------------------------------------
// Frequency list

std::vector<FrequencyItem> parse_frequency(std::string_view text) {
  std::vector<FrequencyItem> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    const std::size_t tab = line.find('\t');
    const auto bad = [&] {
      return DictError(DictError::Kind::Corrupt,
                       "frequency list line " + std::to_string(line_no) + ": expected count<TAB>form");
    };
    if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size()) throw bad();
    FrequencyItem item;
    for (char c : line.substr(0, tab)) {
      if (c < '0' || c > '9') throw bad();
      item.count = item.count * 10 + static_cast<std::uint64_t>(c - '0');
    }
    item.form = std::string(line.substr(tab + 1));
    out.push_back(std::move(item));
    if (nl == text.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loading

CompiledDictionary::~CompiledDictionary() = default;

std::shared_ptr<const CompiledDictionary> CompiledDictionary::from_bytes(
    std::vector<std::uint8_t> bytes) {
  std::shared_ptr<CompiledDictionary> dict(new CompiledDictionary());
  dict->load(std::make_shared<VectorStorage>(std::move(bytes)));
  return dict;
}

std::shared_ptr<const CompiledDictionary> CompiledDictionary::open(const std::string& path,
                                                                   LoadPolicy policy) {
  std::shared_ptr<CompiledDictionary> dict(new CompiledDictionary());
  if (policy == LoadPolicy::Mapped) {
    dict->load(std::make_shared<MappedStorage>(path));
    return dict;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DictError(DictError::Kind::Io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  dict->load(std::make_shared<VectorStorage>(std::move(bytes)));
  return dict;
}

std::span<const std::uint8_t> CompiledDictionary::bytes() const noexcept { return storage_->data(); }

std::vector<std::uint8_t> CompiledDictionary::serialize() const {
  const auto b = bytes();
  return {b.begin(), b.end()};
}

void CompiledDictionary::load(std::shared_ptr<Storage> storage) {
  storage_ = std::move(storage);
  const auto data = storage_->data();
  if (data.size() < kHeaderSize) throw DictError(DictError::Kind::Truncated, "dictionary header truncated");
  if (std::memcmp(data.data(), kMagic, 4) != 0) {
    throw DictError(DictError::Kind::BadMagic, "not a compiled dictionary (bad magic)");
  }
  ByteReader header(data, 4);
  const std::uint16_t version = header.u16();
  if (version != kFormatVersion) {
    throw DictError(DictError::Kind::UnsupportedVersion,
                    "unsupported dictionary format version " + std::to_string(version));
  }
  const std::uint16_t section_count = header.u16();
  if (data.size() < kHeaderSize + section_count * kDirEntrySize + 4) {
    throw DictError(DictError::Kind::Truncated, "dictionary directory truncated");
  }
  const std::size_t payload = data.size() - 4;
  if (checksum(data.first(payload)) != detail::load_u32(data.data() + payload)) {
    throw DictError(DictError::Kind::ChecksumMismatch, "dictionary checksum mismatch");
  }

  std::map<std::uint32_t, std::span<const std::uint8_t>> by_tag;
  for (std::uint16_t i = 0; i < section_count; ++i) {
    const std::uint32_t tag = header.u32();
    const std::uint64_t offset = header.u64();
    const std::uint64_t length = header.u64();
    if (offset > payload || length > payload - offset) {
      throw DictError(DictError::Kind::Truncated, "dictionary section out of bounds");
    }
    by_tag[tag] = data.subspan(offset, length);
    std::string name(4, ' ');
    for (int k = 0; k < 4; ++k) name[k] = static_cast<char>((tag >> (8 * k)) & 0xFF);
    sections_.push_back({name, offset, length});
  }
  const auto section = [&](const char* tag) {
    const auto it = by_tag.find(tag_value(tag));
    if (it == by_tag.end()) {
      throw DictError(DictError::Kind::Corrupt, std::string("missing section ") + tag);
    }
    return it->second;
  };

  {
    ByteReader r(section("SYMS"));
    for (std::uint32_t n = r.u32(); n > 0; --n) symbols_.infixes.push_back(read_letters(r));
    for (std::uint32_t n = r.u32(); n > 0; --n) {
      std::vector<Letters> suffixes(r.u16());
      for (auto& s : suffixes) s = read_letters(r);
      symbols_.inflections.push_back(std::move(suffixes));
    }
    for (std::uint32_t n = r.u32(); n > 0; --n) {
      std::vector<int> tuple(r.u8());
      for (int& p : tuple) p = r.u8();
      symbols_.stress_tuples.push_back(std::move(tuple));
    }
    for (std::uint32_t n = r.u32(); n > 0; --n) {
      FormTriple f;
      f.infix = r.u32();
      f.inflection = r.u32();
      f.stress = r.u32();
      if ((f.infix != kNone && f.infix >= symbols_.infixes.size()) ||
          f.inflection >= symbols_.inflections.size() || f.stress >= symbols_.stress_tuples.size() ||
          symbols_.stress_tuples[f.stress].empty()) {
        throw DictError(DictError::Kind::Corrupt, "symbol table form out of range");
      }
      symbols_.forms.push_back(f);
    }
  }
  {
    const auto trie = section("TRIE");
    ByteReader r(trie);
    node_count_ = r.u32();
    const std::uint32_t label_bytes = r.u32();
    trie_nodes_ = r.raw(static_cast<std::size_t>(node_count_) * kNodeSize);
    trie_labels_ = r.raw(label_bytes);
    if (node_count_ == 0) throw DictError(DictError::Kind::Corrupt, "trie has no root");
    for (std::uint32_t i = 0; i < node_count_; ++i) {
      const Node n = node(i);
      if (std::size_t(n.label_offset) + n.label_length > trie_labels_.size() ||
          (n.child_count > 0 && std::size_t(n.first_child) + n.child_count > node_count_)) {
        throw DictError(DictError::Kind::Corrupt, "trie node out of range");
      }
    }
    for (std::uint8_t code : trie_labels_) {
      if (code >= kAlphabetSize) throw DictError(DictError::Kind::Corrupt, "bad trie label");
    }
  }
  {
    const auto recs = section("RECS");
    ByteReader r(recs);
    record_count_ = r.u32();
    entry_count_ = r.u32();
    surface_form_count_ = r.u64();
    records_ = recs.subspan(r.pos());
  }
  {
    ByteReader r(section("TRIG"));
    if (r.u16() != TrigramTable::kSymbols) throw DictError(DictError::Kind::Corrupt, "trigram alphabet");
    r.u16();
    const auto bits = r.raw(TrigramTable::kBytes);
    std::copy(bits.begin(), bits.end(), trigrams_.bits().begin());
  }
  {
    ByteReader r(section("FREQ"));
    for (std::uint32_t n = r.u32(); n > 0; --n) {
      Letters letters = read_letters(r);
      const std::uint8_t s = r.u8();
      std::optional<int> stress = s == 0 ? std::nullopt : std::optional<int>(s);
      memory_.insert(memory_key(letters, stress));
      memory_order_.emplace_back(std::move(letters), stress);
    }
  }
}

CompiledDictionary::Node CompiledDictionary::node(std::uint32_t index) const noexcept {
  const std::uint8_t* p = trie_nodes_.data() + static_cast<std::size_t>(index) * kNodeSize;
  return Node{detail::load_u32(p), detail::load_u16(p + 4), p[6], p[7], detail::load_u32(p + 8),
              detail::load_u32(p + 12)};
}

// ---------------------------------------------------------------------------
// Lookup

std::vector<StemMatch> CompiledDictionary::stem_candidates(LettersView letters,
                                                           LookupStats* stats) const {
  std::vector<StemMatch> out;
  std::uint32_t current = 0;
  Node n = node(0);
  if (stats) ++stats->node_visits;
  if (n.flags & kTerminal) out.push_back({n.record, 0});
  std::size_t pos = 0;
  while (pos < letters.size() && n.child_count > 0) {
    const int code = letter_code(letters[pos]);
    if (code < 0) break;
    std::optional<Node> next;
    std::uint32_t next_index = 0;
    for (std::uint32_t c = 0; c < n.child_count; ++c) {
      const Node child = node(n.first_child + c);
      const std::uint8_t first = trie_labels_[child.label_offset];
      if (first == code) {
        next = child;
        next_index = n.first_child + c;
        break;
      }
      if (first > code) break;
    }
    if (!next) break;
    if (next->label_length > letters.size() - pos) break;
    bool same = true;
    for (std::uint16_t k = 1; k < next->label_length; ++k) {
      if (trie_labels_[next->label_offset + k] != letter_code(letters[pos + k])) {
        same = false;
        break;
      }
    }
    if (!same) break;
    current = next_index;
    n = *next;
    if (stats) ++stats->node_visits;
    pos += n.label_length;
    if (n.flags & kTerminal) out.push_back({n.record, pos});
  }
  (void)current;
  return out;
}

WordRecord CompiledDictionary::fetch_record(std::uint32_t offset, LookupStats* stats) const {
  if (stats) ++stats->record_fetches;
  ByteReader r(records_, offset);
  WordRecord rec;
  rec.stem = read_letters(r);
  const std::uint8_t breaks = r.u8();
  for (std::uint8_t b : r.raw(breaks)) rec.syllable_breaks.push_back(b);
  rec.flags = r.u8();
  const std::uint16_t forms = r.u16();
  rec.form_ids.reserve(forms);
  for (std::uint16_t i = 0; i < forms; ++i) {
    const std::uint32_t id = r.u32();
    if (id >= symbols_.forms.size()) throw DictError(DictError::Kind::Corrupt, "form id out of range");
    rec.form_ids.push_back(id);
  }
  return rec;
}

std::vector<std::optional<int>> CompiledDictionary::expected_stresses(LettersView letters,
                                                                      LookupStats* stats) const {
  std::vector<std::optional<int>> out;
  const auto matches = stem_candidates(letters, stats);
  if (matches.empty()) return out;
  const std::size_t syllables = syllable_count(letters);
  for (const StemMatch& m : matches) {
    const WordRecord rec = fetch_record(m.record_offset, stats);
    const LettersView residual = letters.substr(m.prefix_length);
    for (std::uint32_t id : rec.form_ids) {
      const FormTriple& f = symbols_.forms[id];
      const LettersView infix =
          f.infix == kNone ? LettersView{} : LettersView{symbols_.infixes[f.infix]};
      if (residual.substr(0, infix.size()) != infix) continue;
      const LettersView rest = residual.substr(infix.size());
      const auto& suffixes = symbols_.inflections[f.inflection];
      for (std::size_t j = 0; j < suffixes.size(); ++j) {
        if (suffixes[j] != rest) continue;
        const auto stress =
            morph::surface_stress(morph::stress_for(symbols_.stress_tuples[f.stress], j + 1), syllables);
        if (std::find(out.begin(), out.end(), stress) == out.end()) out.push_back(stress);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

MatchOutcome CompiledDictionary::accepts(const NormalizedWord& word, LookupStats* stats) const {
  MatchOutcome out;
  out.expected = expected_stresses(word.letters, stats);
  if (out.expected.empty()) return out;
  if (std::find(out.expected.begin(), out.expected.end(), word.stress) != out.expected.end()) {
    out.kind = Match::Exact;
    return out;
  }
  out.kind = Match::StressOnly;
  for (const auto& s : out.expected) {
    out.expected_displays.push_back(s ? apply_stress(word.letters, *s) : render_letters(word.letters));
  }
  return out;
}

bool CompiledDictionary::prefix_viable(LettersView prefix, LookupStats* stats) const {
  const auto ending_fits = [&](const Node& n, std::size_t pos) {
    const LettersView residual = prefix.substr(pos);
    const WordRecord rec = fetch_record(n.record, stats);
    for (std::uint32_t id : rec.form_ids) {
      const FormTriple& f = symbols_.forms[id];
      const LettersView infix =
          f.infix == kNone ? LettersView{} : LettersView{symbols_.infixes[f.infix]};
      if (infix.size() >= residual.size()) {
        if (infix.substr(0, residual.size()) == residual) return true;
        continue;
      }
      if (residual.substr(0, infix.size()) != infix) continue;
      const LettersView rest = residual.substr(infix.size());
      for (const Letters& suffix : symbols_.inflections[f.inflection]) {
        if (LettersView(suffix).substr(0, rest.size()) == rest) return true;
      }
    }
    return false;
  };

  Node n = node(0);
  if (stats) ++stats->node_visits;
  if (n.child_count == 0 && !(n.flags & kTerminal)) return false;
  std::size_t pos = 0;
  if ((n.flags & kTerminal) && ending_fits(n, pos)) return true;
  for (;;) {
    if (pos == prefix.size()) return true;
    const int code = letter_code(prefix[pos]);
    if (code < 0) return false;
    std::optional<Node> next;
    for (std::uint32_t c = 0; c < n.child_count; ++c) {
      const Node child = node(n.first_child + c);
      const std::uint8_t first = trie_labels_[child.label_offset];
      if (first == code) {
        next = child;
        break;
      }
      if (first > code) break;
    }
    if (!next) return false;
    if (stats) ++stats->node_visits;
    std::size_t k = 1;
    while (k < next->label_length && pos + k < prefix.size() &&
           trie_labels_[next->label_offset + k] == letter_code(prefix[pos + k])) {
      ++k;
    }
    if (k < next->label_length) return pos + k == prefix.size();
    pos += k;
    n = *next;
    if ((n.flags & kTerminal) && ending_fits(n, pos)) return true;
  }
}

bool CompiledDictionary::memory_contains(LettersView letters, std::optional<int> stress) const {
  return memory_.contains(memory_key(letters, stress));
}

bool CompiledDictionary::trie_fully_compressed() const {
  for (std::uint32_t i = 1; i < node_count_; ++i) {
    const Node n = node(i);
    if (n.child_count == 1 && !(n.flags & kTerminal)) return false;
  }
  return true;
}

std::vector<Letters> CompiledDictionary::stems() const {
  std::vector<Letters> out;
  std::vector<std::pair<std::uint32_t, Letters>> stack{{0, Letters{}}};
  while (!stack.empty()) {
    auto [index, prefix] = std::move(stack.back());
    stack.pop_back();
    const Node n = node(index);
    for (std::uint16_t k = 0; k < n.label_length; ++k) {
      prefix.push_back(letter_from_code(trie_labels_[n.label_offset + k]));
    }
    if (n.flags & kTerminal) out.push_back(prefix);
    for (std::uint32_t c = n.child_count; c > 0; --c) stack.emplace_back(n.first_child + c - 1, prefix);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Building

namespace {

struct RecordDraft {
  std::vector<std::size_t> breaks;
  bool any_inflected = false;
  std::vector<std::uint32_t> form_ids;
};

struct DraftNode {
  Letters label;
  std::map<char32_t, std::unique_ptr<DraftNode>> children;
  std::uint32_t record = kNone;
};

void insert(DraftNode& root, LettersView key, std::uint32_t record) {
  DraftNode* node = &root;
  std::size_t i = 0;
  for (;;) {
    if (i == key.size()) {
      node->record = record;
      return;
    }
    auto it = node->children.find(key[i]);
    if (it == node->children.end()) {
      auto leaf = std::make_unique<DraftNode>();
      leaf->label = Letters(key.substr(i));
      leaf->record = record;
      node->children.emplace(key[i], std::move(leaf));
      return;
    }
    DraftNode* child = it->second.get();
    std::size_t common = 0;
    while (common < child->label.size() && i + common < key.size() &&
           child->label[common] == key[i + common]) {
      ++common;
    }
    if (common < child->label.size()) {
      auto mid = std::make_unique<DraftNode>();
      mid->label = child->label.substr(0, common);
      std::unique_ptr<DraftNode> old = std::move(it->second);
      old->label.erase(0, common);
      const char32_t first = old->label.front();
      mid->children.emplace(first, std::move(old));
      it->second = std::move(mid);
      child = it->second.get();
    }
    node = child;
    i += common;
  }
}

struct Image {
  const SymbolTable* symbols;
  std::vector<std::uint8_t> trie;
  std::vector<std::uint8_t> records;
  const TrigramTable* trigrams;
  std::vector<std::pair<Letters, std::optional<int>>> memory;
};

std::vector<std::uint8_t> encode_trie(const DraftNode& root, std::uint32_t& node_count) {
  std::vector<const DraftNode*> order{&root};
  std::vector<std::uint32_t> first_child(1, 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    first_child[k] = static_cast<std::uint32_t>(order.size());
    for (const auto& [c, child] : order[k]->children) {
      order.push_back(child.get());
      first_child.push_back(0);
    }
  }
  ByteWriter labels;
  ByteWriter nodes;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const DraftNode& n = *order[k];
    if (n.label.size() > 0xFFFF) throw DictError(DictError::Kind::Limit, "trie label too long");
    nodes.u32(static_cast<std::uint32_t>(labels.size()));
    nodes.u16(static_cast<std::uint16_t>(n.label.size()));
    nodes.u8(static_cast<std::uint8_t>(n.children.size()));
    nodes.u8(n.record != kNone ? kTerminal : 0);
    nodes.u32(n.children.empty() ? 0 : first_child[k]);
    nodes.u32(n.record);
    for (char32_t c : n.label) labels.u8(code_of(c));
  }
  node_count = static_cast<std::uint32_t>(order.size());
  ByteWriter out;
  out.u32(node_count);
  out.u32(static_cast<std::uint32_t>(labels.size()));
  out.raw(nodes.buffer());
  out.raw(labels.buffer());
  return std::move(out.buffer());
}

std::vector<std::uint8_t> assemble(const SymbolTable& symbols, std::span<const std::uint8_t> trie,
                                   std::span<const std::uint8_t> records, const TrigramTable& trigrams,
                                   const std::vector<std::pair<Letters, std::optional<int>>>& memory) {
  ByteWriter syms;
  syms.u32(static_cast<std::uint32_t>(symbols.infixes.size()));
  for (const auto& s : symbols.infixes) write_letters(syms, s);
  syms.u32(static_cast<std::uint32_t>(symbols.inflections.size()));
  for (const auto& list : symbols.inflections) {
    if (list.size() > 0xFFFF) throw DictError(DictError::Kind::Limit, "too many suffixes");
    syms.u16(static_cast<std::uint16_t>(list.size()));
    for (const auto& s : list) write_letters(syms, s);
  }
  syms.u32(static_cast<std::uint32_t>(symbols.stress_tuples.size()));
  for (const auto& tuple : symbols.stress_tuples) {
    if (tuple.size() > 255) throw DictError(DictError::Kind::Limit, "stress tuple too long");
    syms.u8(static_cast<std::uint8_t>(tuple.size()));
    for (int p : tuple) {
      if (p < 0 || p > 255) throw DictError(DictError::Kind::Limit, "stress position out of range");
      syms.u8(static_cast<std::uint8_t>(p));
    }
  }
  syms.u32(static_cast<std::uint32_t>(symbols.forms.size()));
  for (const auto& f : symbols.forms) {
    syms.u32(f.infix);
    syms.u32(f.inflection);
    syms.u32(f.stress);
  }

  ByteWriter trig;
  trig.u16(TrigramTable::kSymbols);
  trig.u16(0);
  trig.raw(trigrams.bits());

  ByteWriter freq;
  freq.u32(static_cast<std::uint32_t>(memory.size()));
  for (const auto& [letters, stress] : memory) {
    write_letters(freq, letters);
    freq.u8(static_cast<std::uint8_t>(stress.value_or(0)));
  }

  const std::span<const std::uint8_t> bodies[] = {syms.buffer(), trie, records, trig.buffer(),
                                                  freq.buffer()};
  constexpr std::size_t kSections = std::size(kTags);
  ByteWriter out;
  out.raw(kMagic);
  out.u16(kFormatVersion);
  out.u16(static_cast<std::uint16_t>(kSections));
  const std::size_t dir = out.size();
  for (std::size_t i = 0; i < kSections; ++i) {
    out.u32(tag_value(kTags[i]));
    out.u64(0);
    out.u64(0);
  }
  for (std::size_t i = 0; i < kSections; ++i) {
    out.align(4);
    out.patch_u64(dir + i * kDirEntrySize + 4, out.size());
    out.patch_u64(dir + i * kDirEntrySize + 12, bodies[i].size());
    out.raw(bodies[i]);
  }
  out.align(4);
  out.u32(checksum(out.buffer()));
  return std::move(out.buffer());
}

}  // namespace

std::vector<std::uint8_t> build_image(const gwdl::ResolvedRuleSet& rules,
                                      const std::vector<FrequencyItem>& frequency,
                                      std::size_t memory_size) {
  SymbolTable symbols;
  std::map<Letters, RecordDraft> drafts;
  for (const auto& entry : rules.entries) {
    auto [it, fresh] = drafts.try_emplace(entry.stem);
    RecordDraft& draft = it->second;
    if (fresh) draft.breaks = entry.syllable_breaks;
    draft.any_inflected = draft.any_inflected || entry.inflected;
    for (const auto& form : entry.forms) {
      const std::uint32_t id = symbols.intern(form);
      if (std::find(draft.form_ids.begin(), draft.form_ids.end(), id) == draft.form_ids.end()) {
        draft.form_ids.push_back(id);
      }
    }
  }

  TrigramTable trigrams;
  const std::uint64_t form_count =
      morph::expand_all(rules, [&](const morph::SurfaceForm& sf) { trigrams.add_word(sf.unstressed); });

  ByteWriter records;
  records.u32(static_cast<std::uint32_t>(drafts.size()));
  records.u32(static_cast<std::uint32_t>(rules.entries.size()));
  records.u64(form_count);
  const std::size_t records_base = records.size();
  DraftNode root;
  for (const auto& [stem, draft] : drafts) {
    const auto offset = static_cast<std::uint32_t>(records.size() - records_base);
    write_letters(records, stem);
    if (draft.breaks.size() > 255) throw DictError(DictError::Kind::Limit, "too many hyphens");
    records.u8(static_cast<std::uint8_t>(draft.breaks.size()));
    for (std::size_t b : draft.breaks) records.u8(static_cast<std::uint8_t>(b));
    records.u8(draft.any_inflected ? 0 : kNonInflected);
    if (draft.form_ids.size() > 0xFFFF) throw DictError(DictError::Kind::Limit, "too many forms");
    records.u16(static_cast<std::uint16_t>(draft.form_ids.size()));
    for (std::uint32_t id : draft.form_ids) records.u32(id);
    insert(root, stem, offset);
  }
  std::uint32_t node_count = 0;
  const auto trie = encode_trie(root, node_count);

  std::vector<std::pair<Letters, std::optional<int>>> memory;
  auto image = assemble(symbols, trie, records.buffer(), trigrams, memory);
  if (frequency.empty() || memory_size == 0) return image;

  // Memory-resident words must be accepted by the main dictionary.
  const auto main = CompiledDictionary::from_bytes(image);
  std::vector<const FrequencyItem*> ranked;
  for (const auto& item : frequency) ranked.push_back(&item);
  std::sort(ranked.begin(), ranked.end(), [](const FrequencyItem* a, const FrequencyItem* b) {
    if (a->count != b->count) return a->count > b->count;
    return a->form < b->form;
  });
  std::unordered_set<std::u32string> taken;
  for (const FrequencyItem* item : ranked) {
    if (memory.size() >= memory_size) break;
    NormalizedWord word;
    try {
      word = normalize(item->form);
    } catch (const GreekTextError&) {
      continue;
    }
    if (main->accepts(word).kind != Match::Exact) continue;
    if (!taken.insert(memory_key(word.letters, word.stress)).second) continue;
    memory.emplace_back(word.letters, word.stress);
  }
  return assemble(symbols, trie, records.buffer(), trigrams, memory);
}

std::shared_ptr<const CompiledDictionary> build(const gwdl::ResolvedRuleSet& rules,
                                                const std::vector<FrequencyItem>& frequency,
                                                std::size_t memory_size) {
  return CompiledDictionary::from_bytes(build_image(rules, frequency, memory_size));
}

}  // namespace glspell::dict
