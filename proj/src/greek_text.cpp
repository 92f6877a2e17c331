#include "glspell/greek_text.hpp"

#include <algorithm>
#include <array>

#include "glspell/utf8.hpp"

namespace glspell {

namespace {

constexpr char32_t kAlphabet[] = U"αβγδεζηθικλμνξοπρστυφχψω";
constexpr char32_t kFinalSigma = U'ς';
constexpr char32_t kSigma = U'σ';
constexpr char32_t kCombiningAcute = 0x0301;
constexpr char32_t kCombiningAcuteTone = 0x0341;
constexpr char32_t kCombiningDiaeresis = 0x0308;
constexpr char32_t kCombiningDialytikaTonos = 0x0344;

struct Glyph {
  char32_t cp;
  char32_t base;
  bool upper;
  bool tonos;
  bool diaeresis;
};

// Precomposed monotonic glyphs first; compose() returns the first match.
constexpr Glyph kGlyphs[] = {
    {0x03AC, U'α', false, true, false}, {0x03AD, U'ε', false, true, false},
    {0x03AE, U'η', false, true, false}, {0x03AF, U'ι', false, true, false},
    {0x03CC, U'ο', false, true, false}, {0x03CD, U'υ', false, true, false},
    {0x03CE, U'ω', false, true, false}, {0x0386, U'α', true, true, false},
    {0x0388, U'ε', true, true, false},  {0x0389, U'η', true, true, false},
    {0x038A, U'ι', true, true, false},  {0x038C, U'ο', true, true, false},
    {0x038E, U'υ', true, true, false},  {0x038F, U'ω', true, true, false},
    {0x03CA, U'ι', false, false, true}, {0x03CB, U'υ', false, false, true},
    {0x03AA, U'ι', true, false, true},  {0x03AB, U'υ', true, false, true},
    {0x0390, U'ι', false, true, true},  {0x03B0, U'υ', false, true, true},
    // Oxia forms canonically equivalent to the tonos forms above.
    {0x1F71, U'α', false, true, false}, {0x1F73, U'ε', false, true, false},
    {0x1F75, U'η', false, true, false}, {0x1F77, U'ι', false, true, false},
    {0x1F79, U'ο', false, true, false}, {0x1F7B, U'υ', false, true, false},
    {0x1F7D, U'ω', false, true, false}, {0x1FBB, U'α', true, true, false},
    {0x1FC9, U'ε', true, true, false},  {0x1FCB, U'η', true, true, false},
    {0x1FDB, U'ι', true, true, false},  {0x1FF9, U'ο', true, true, false},
    {0x1FEB, U'υ', true, true, false},  {0x1FFB, U'ω', true, true, false},
    {0x1FD3, U'ι', false, true, true},  {0x1FE3, U'υ', false, true, true},
};

std::optional<Glyph> decompose(char32_t cp) {
  if (cp >= 0x03B1 && cp <= 0x03C9) {
    return Glyph{cp, cp == kFinalSigma ? kSigma : cp, false, false, false};
  }
  if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) {
    return Glyph{cp, static_cast<char32_t>(cp + 0x20), true, false, false};
  }
  for (const Glyph& g : kGlyphs) {
    if (g.cp == cp) return g;
  }
  return std::nullopt;
}

void compose(std::string& out, char32_t base, bool upper, bool tonos, bool diaeresis,
             bool word_final) {
  if (!tonos && !diaeresis) {
    char32_t cp = base;
    if (upper) {
      cp = base - 0x20;
    } else if (base == kSigma && word_final) {
      cp = kFinalSigma;
    }
    utf8::append(out, cp);
    return;
  }
  for (const Glyph& g : kGlyphs) {
    if (g.base == base && g.upper == upper && g.tonos == tonos && g.diaeresis == diaeresis) {
      utf8::append(out, g.cp);
      return;
    }
  }
  // Uppercase iota/upsilon with both marks has no precomposed form.
  compose(out, base, upper, false, diaeresis, word_final);
  if (tonos) utf8::append(out, kCombiningAcute);
}

std::string render_impl(LettersView letters, std::optional<std::size_t> stressed,
                        const std::vector<bool>& upper, const std::vector<bool>& breaks) {
  std::string out;
  out.reserve(letters.size() * 2);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const bool up = i < upper.size() && upper[i];
    const bool tonos = stressed && *stressed == i;
    const bool diaeresis = i > 0 && i < breaks.size() && breaks[i] &&
                           is_digraph(letters[i - 1], letters[i]) &&
                           !(stressed && *stressed == i - 1);
    compose(out, letters[i], up, tonos, diaeresis, i + 1 == letters.size());
  }
  return out;
}

}  // namespace

LettersView alphabet() noexcept { return LettersView(kAlphabet, kAlphabetSize); }

int letter_code(char32_t letter) noexcept {
  for (int i = 0; i < kAlphabetSize; ++i) {
    if (kAlphabet[i] == letter) return i;
  }
  return -1;
}

char32_t letter_from_code(int code) {
  if (code < 0 || code >= kAlphabetSize) throw std::out_of_range("letter code out of range");
  return kAlphabet[code];
}

bool is_vowel(char32_t letter) noexcept {
  switch (letter) {
    case U'α':
    case U'ε':
    case U'η':
    case U'ι':
    case U'ο':
    case U'υ':
    case U'ω':
      return true;
    default:
      return false;
  }
}

bool is_digraph(char32_t first, char32_t second) noexcept {
  if (second == U'ι') return first == U'α' || first == U'ε' || first == U'ο' || first == U'υ';
  if (second == U'υ') return first == U'ο' || first == U'α' || first == U'ε';
  return false;
}

bool is_greek_letter(char32_t cp) noexcept {
  if (cp >= 0x0370 && cp <= 0x03FF) {
    switch (cp) {
      case 0x0374:
      case 0x0375:
      case 0x0378:
      case 0x0379:
      case 0x037A:
      case 0x037E:
      case 0x0380:
      case 0x0381:
      case 0x0382:
      case 0x0383:
      case 0x0384:
      case 0x0385:
      case 0x0387:
      case 0x038B:
      case 0x038D:
      case 0x03A2:
        return false;
      default:
        return true;
    }
  }
  if (cp >= 0x1F00 && cp <= 0x1FFC) {
    if (cp == 0x1FBD || (cp >= 0x1FBF && cp <= 0x1FC1) || (cp >= 0x1FCD && cp <= 0x1FCF) ||
        (cp >= 0x1FDD && cp <= 0x1FDF) || (cp >= 0x1FED && cp <= 0x1FEF)) {
      return false;
    }
    return true;
  }
  return false;
}

bool is_combining_mark(char32_t cp) noexcept { return cp >= 0x0300 && cp <= 0x036F; }

bool is_apostrophe(char32_t cp) noexcept {
  return cp == U'\'' || cp == 0x2019 || cp == 0x02BC;
}

std::size_t Syllabification::stressable_letter(int position_from_end) const {
  if (position_from_end < 1 || static_cast<std::size_t>(position_from_end) > nuclei.size()) {
    throw GreekTextError(GreekTextError::Kind::PositionOutOfRange,
                         "stress position " + std::to_string(position_from_end) +
                             " outside 1.." + std::to_string(nuclei.size()));
  }
  return nuclei[nuclei.size() - static_cast<std::size_t>(position_from_end)].end - 1;
}

Syllabification syllabify(LettersView letters, const std::vector<bool>& breaks) {
  Syllabification result;
  std::size_t i = 0;
  while (i < letters.size()) {
    if (!is_vowel(letters[i])) {
      ++i;
      continue;
    }
    const bool binds = i + 1 < letters.size() && is_digraph(letters[i], letters[i + 1]) &&
                       !(i + 1 < breaks.size() && breaks[i + 1]);
    const std::size_t len = binds ? 2 : 1;
    result.nuclei.push_back({i, i + len});
    i += len;
  }
  if (result.nuclei.empty()) {
    throw GreekTextError(GreekTextError::Kind::NoVowel,
                         "no vowel in \"" + render_letters(letters) + "\"");
  }
  return result;
}

std::size_t syllable_count(LettersView letters) noexcept {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < letters.size()) {
    if (!is_vowel(letters[i])) {
      ++i;
    } else {
      ++count;
      i += (i + 1 < letters.size() && is_digraph(letters[i], letters[i + 1])) ? 2 : 1;
    }
  }
  return count;
}

NormalizedWord normalize(std::string_view text) {
  const auto fail = [&](const std::string& why) {
    return GreekTextError(GreekTextError::Kind::NonGreekToken,
                          "not a Greek word: \"" + std::string(text) + "\" (" + why + ")");
  };
  if (!utf8::valid(text)) throw fail("invalid UTF-8");

  NormalizedWord word;
  std::vector<bool> tonos;
  std::vector<bool> diaeresis;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::next(text, pos);
    if (is_apostrophe(cp)) continue;
    if (cp == kCombiningAcute || cp == kCombiningAcuteTone || cp == kCombiningDiaeresis ||
        cp == kCombiningDialytikaTonos) {
      if (word.letters.empty() || !is_vowel(word.letters.back())) {
        throw fail("diacritic without a vowel");
      }
      if (cp != kCombiningDiaeresis) tonos.back() = true;
      if (cp == kCombiningDiaeresis || cp == kCombiningDialytikaTonos) diaeresis.back() = true;
      continue;
    }
    const auto glyph = decompose(cp);
    if (!glyph) throw fail("unsupported character");
    word.letters.push_back(glyph->base);
    word.upper.push_back(glyph->upper);
    tonos.push_back(glyph->tonos);
    diaeresis.push_back(glyph->diaeresis);
  }
  if (word.letters.empty()) throw fail("empty");

  const std::size_t n = word.letters.size();
  word.breaks.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (diaeresis[i]) word.breaks[i] = true;
    if (tonos[i] && i + 1 < n && is_digraph(word.letters[i], word.letters[i + 1])) {
      word.breaks[i + 1] = true;
    }
  }

  // A second tonos (enclitic emphasis) does not move the lexical stress.
  const auto first_tonos = std::find(tonos.begin(), tonos.end(), true);
  if (first_tonos != tonos.end()) {
    const auto index = static_cast<std::size_t>(first_tonos - tonos.begin());
    const Syllabification syl = syllabify(word.letters, word.breaks);
    for (std::size_t k = 0; k < syl.nuclei.size(); ++k) {
      if (index >= syl.nuclei[k].begin && index < syl.nuclei[k].end) {
        if (syl.count() > 1) word.stress = static_cast<int>(syl.count() - k);
        break;
      }
    }
  }
  return word;
}

std::string apply_stress(LettersView letters, int position) {
  const Syllabification syl = syllabify(letters);
  const std::size_t index = syl.stressable_letter(position);
  return render_impl(letters, index, {}, {});
}

Letters strip_stress(const NormalizedWord& word) { return word.letters; }

std::string render(const NormalizedWord& word) {
  std::optional<std::size_t> stressed;
  if (word.stress) {
    stressed = syllabify(word.letters, word.breaks).stressable_letter(*word.stress);
  }
  return render_impl(word.letters, stressed, word.upper, word.breaks);
}

std::string render_letters(LettersView letters) {
  return render_impl(letters, std::nullopt, {}, {});
}

std::optional<Letters> plain_letters(std::u32string_view text) {
  Letters out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp >= 0x03B1 && cp <= 0x03C9) {
      out.push_back(cp == kFinalSigma ? kSigma : cp);
    } else {
      return std::nullopt;
    }
  }
  return out;
}

bool is_all_upper(const NormalizedWord& word) noexcept {
  return !word.upper.empty() &&
         std::all_of(word.upper.begin(), word.upper.end(), [](bool b) { return b; });
}

}  // namespace glspell
