#include "glspell/gwdl.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "glspell/utf8.hpp"

namespace glspell::gwdl {

std::string Diagnostic::format() const {
  std::ostringstream out;
  out << file << ':' << pos.line << ':' << pos.col << ": "
      << (severity == Severity::Error ? "error" : "warning") << ": " << message;
  return out.str();
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) noexcept {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

enum class Tok {
  StressName,
  InflectionName,
  FormName,
  Greek,
  Number,
  Equals,
  LParen,
  RParen,
  Comma,
  LBracket,
  RBracket,
  Bar,
  Dot,
  End,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::StressName: return "stress rule name";
    case Tok::InflectionName: return "inflection rule name";
    case Tok::FormName: return "form rule name";
    case Tok::Greek: return "Greek letters";
    case Tok::Number: return "number";
    case Tok::Equals: return "'='";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Bar: return "'|'";
    case Tok::Dot: return "'.'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::u32string text;  // names and numbers in ASCII, Greek runs as-is
  SourcePos pos;
};

class Lexer {
 public:
  Lexer(std::u32string_view src, std::string file, std::vector<Diagnostic>& diags)
      : src_(src), file_(std::move(file)), diags_(diags) {}

  std::optional<std::string> version;

  std::vector<Token> run() {
    std::vector<Token> out;
    bool at_line_start = true;
    bool seen_content = false;
    while (i_ < src_.size()) {
      const char32_t c = src_[i_];
      if (c == U'\n') {
        advance();
        at_line_start = true;
        continue;
      }
      if (c == U' ' || c == U'\t' || c == U'\r' || c == 0xFEFF) {
        advance();
        continue;
      }
      if (at_line_start && c == U';') {
        skip_line();
        continue;
      }
      if (at_line_start && c == U'%' && !seen_content) {
        read_version();
        continue;
      }
      at_line_start = false;
      seen_content = true;
      const SourcePos pos = pos_;
      switch (c) {
        case U'=': advance(); out.push_back({Tok::Equals, {}, pos}); continue;
        case U'(': advance(); out.push_back({Tok::LParen, {}, pos}); continue;
        case U')': advance(); out.push_back({Tok::RParen, {}, pos}); continue;
        case U',': advance(); out.push_back({Tok::Comma, {}, pos}); continue;
        case U'[': advance(); out.push_back({Tok::LBracket, {}, pos}); continue;
        case U']': advance(); out.push_back({Tok::RBracket, {}, pos}); continue;
        case U'|': advance(); out.push_back({Tok::Bar, {}, pos}); continue;
        case U'.': advance(); out.push_back({Tok::Dot, {}, pos}); continue;
        case U'!': read_name(Tok::StressName, out); continue;
        case U'#': read_name(Tok::InflectionName, out); continue;
        case U'$': read_name(Tok::FormName, out); continue;
        default: break;
      }
      if (c >= U'0' && c <= U'9') {
        std::u32string digits;
        while (i_ < src_.size() && src_[i_] >= U'0' && src_[i_] <= U'9') {
          digits.push_back(src_[i_]);
          advance();
        }
        out.push_back({Tok::Number, digits, pos});
        continue;
      }
      if (is_greek_letter(c) || c == U'-') {
        std::u32string run;
        while (i_ < src_.size() &&
               (is_greek_letter(src_[i_]) || is_combining_mark(src_[i_]) || src_[i_] == U'-')) {
          run.push_back(src_[i_]);
          advance();
        }
        out.push_back({Tok::Greek, run, pos});
        continue;
      }
      std::string shown;
      utf8::append(shown, c);
      error(pos, "unexpected character '" + shown + "'");
      advance();
    }
    out.push_back({Tok::End, {}, pos_});
    return out;
  }

 private:
  void advance() {
    if (src_[i_] == U'\n') {
      ++pos_.line;
      pos_.col = 1;
    } else {
      ++pos_.col;
    }
    ++i_;
  }

  void skip_line() {
    while (i_ < src_.size() && src_[i_] != U'\n') advance();
  }

  void read_version() {
    advance();  // '%'
    std::u32string rest;
    while (i_ < src_.size() && src_[i_] != U'\n') {
      rest.push_back(src_[i_]);
      advance();
    }
    std::string text = utf8::encode(rest);
    const auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    trim(text);
    if (text.rfind("VERSION", 0) == 0) {
      text = text.substr(7);
      trim(text);
    }
    version = text;
  }

  void read_name(Tok kind, std::vector<Token>& out) {
    const SourcePos pos = pos_;
    advance();
    while (i_ < src_.size() && (src_[i_] == U' ' || src_[i_] == U'\t')) advance();
    std::u32string name;
    while (i_ < src_.size()) {
      const char32_t c = src_[i_];
      const bool ascii_word = (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') ||
                              (c >= U'0' && c <= U'9') || c == U'_';
      if (!ascii_word) break;
      name.push_back(c);
      advance();
    }
    if (name.empty()) {
      error(pos, "rule name expected after sigil");
      return;
    }
    out.push_back({kind, name, pos});
  }

  void error(SourcePos pos, std::string message) {
    diags_.push_back({file_, pos, Severity::Error, std::move(message)});
  }

  std::u32string_view src_;
  std::string file_;
  std::vector<Diagnostic>& diags_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

struct SyntaxError {};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file, std::vector<Diagnostic>& diags)
      : toks_(std::move(tokens)), file_(std::move(file)), diags_(diags) {}

  void run(LexiconFile& out) {
    while (peek().kind != Tok::End) {
      try {
        statement(out);
      } catch (const SyntaxError&) {
        recover();
      }
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(k_ + ahead, toks_.size() - 1)];
  }

  const Token& take() {
    const Token& t = toks_[k_];
    if (t.kind != Tok::End) ++k_;
    return t;
  }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    take();
    return true;
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) fail({kind});
    return take();
  }

  [[noreturn]] void fail(std::initializer_list<Tok> expected) {
    std::string msg = "expected ";
    std::size_t n = 0;
    for (Tok t : expected) {
      if (n++) msg += n == expected.size() ? " or " : ", ";
      msg += describe(t);
    }
    msg += ", found ";
    msg += describe(peek().kind);
    error(peek().pos, msg);
    throw SyntaxError{};
  }

  void error(SourcePos pos, std::string message) {
    diags_.push_back({file_, pos, Severity::Error, std::move(message)});
  }

  void recover() {
    while (peek().kind != Tok::End && peek().kind != Tok::Dot) take();
    accept(Tok::Dot);
  }

  static std::string ascii(const std::u32string& s) {
    return std::string(s.begin(), s.end());
  }

  // Unhyphenated lowercase letters (SUFFIX / INFIX).
  Letters plain(const Token& t, const char* what) {
    if (t.text.find(U'-') != std::u32string::npos) {
      error(t.pos, std::string("hyphen not allowed in ") + what);
      throw SyntaxError{};
    }
    auto letters = plain_letters(t.text);
    if (!letters) {
      error(t.pos, std::string(what) + " must be lowercase Greek letters without stress marks");
      throw SyntaxError{};
    }
    return *letters;
  }

  void stem(const Token& t, LexiconEntry& entry) {
    const std::u32string& s = t.text;
    if (s.front() == U'-' || s.back() == U'-' || s.find(U"--") != std::u32string::npos) {
      error(t.pos, "malformed syllable hyphenation in stem");
      throw SyntaxError{};
    }
    std::u32string bare;
    for (char32_t c : s) {
      if (c == U'-') {
        entry.syllable_breaks.push_back(bare.size());
      } else {
        bare.push_back(c);
      }
    }
    auto letters = plain_letters(bare);
    if (!letters) {
      error(t.pos, "stem must be lowercase Greek letters without stress marks");
      throw SyntaxError{};
    }
    entry.stem = *letters;
  }

  std::vector<int> stress_tuple() {
    expect(Tok::LParen);
    std::vector<int> positions;
    for (;;) {
      const Token& n = expect(Tok::Number);
      if (n.text.size() > 6) {
        error(n.pos, "number too large");
        throw SyntaxError{};
      }
      positions.push_back(std::stoi(ascii(n.text)));
      if (accept(Tok::RParen)) break;
      if (!accept(Tok::Comma)) fail({Tok::Comma, Tok::RParen});
    }
    return positions;
  }

  // Suffix alternatives up to (not including) `close`.
  std::vector<Letters> suffix_list(Tok close) {
    std::vector<Letters> suffixes;
    for (;;) {
      if (peek().kind == Tok::Greek) {
        suffixes.push_back(plain(take(), "suffix"));
      } else if (peek().kind == Tok::Bar || peek().kind == close) {
        suffixes.emplace_back();
      } else {
        fail({Tok::Greek, Tok::Bar, close});
      }
      if (peek().kind == close) break;
      expect(Tok::Bar);
    }
    return suffixes;
  }

  std::vector<Letters> bracketed_inflection() {
    expect(Tok::LBracket);
    auto suffixes = suffix_list(Tok::RBracket);
    expect(Tok::RBracket);
    return suffixes;
  }

  StressSource stress_source() {
    StressSource s;
    s.pos = peek().pos;
    if (peek().kind == Tok::StressName) {
      s.ref = ascii(take().text);
    } else if (peek().kind == Tok::LParen) {
      s.positions = stress_tuple();
    } else {
      fail({Tok::StressName, Tok::LParen});
    }
    return s;
  }

  FormItem form_item() {
    if (peek().kind == Tok::FormName) {
      const Token& t = take();
      return FormRef{ascii(t.text), t.pos};
    }
    Form form;
    form.pos = peek().pos;
    if (peek().kind == Tok::Greek) form.infix = plain(take(), "infix");
    form.inflection.pos = peek().pos;
    if (peek().kind == Tok::InflectionName) {
      form.inflection.ref = ascii(take().text);
    } else if (peek().kind == Tok::LBracket) {
      form.inflection.suffixes = bracketed_inflection();
    } else if (form.infix) {
      fail({Tok::InflectionName, Tok::LBracket});
    } else {
      fail({Tok::FormName, Tok::Greek, Tok::InflectionName, Tok::LBracket});
    }
    form.stress = stress_source();
    return form;
  }

  std::vector<FormItem> form_items(Tok close) {
    std::vector<FormItem> items;
    items.push_back(form_item());
    while (peek().kind != close) {
      expect(Tok::Bar);
      items.push_back(form_item());
    }
    return items;
  }

  template <typename Rule>
  bool unique(const std::vector<Rule>& rules, const std::string& name, const char* sigil,
              SourcePos pos) {
    for (const Rule& r : rules) {
      if (r.name == name) {
        error(pos, std::string("duplicate definition of ") + sigil + name);
        return false;
      }
    }
    return true;
  }

  void statement(LexiconFile& out) {
    const Token& head = peek();
    switch (head.kind) {
      case Tok::StressName: {
        const Token t = take();
        expect(Tok::Equals);
        StressRule rule{ascii(t.text), stress_tuple(), t.pos, file_};
        expect(Tok::Dot);
        if (unique(out.stress_rules, rule.name, "!", t.pos)) out.stress_rules.push_back(rule);
        return;
      }
      case Tok::InflectionName: {
        const Token t = take();
        expect(Tok::Equals);
        InflectionRule rule{ascii(t.text), {}, t.pos, file_};
        if (peek().kind == Tok::LBracket) {
          rule.suffixes = bracketed_inflection();
        } else {
          rule.suffixes = suffix_list(Tok::Dot);
        }
        expect(Tok::Dot);
        if (unique(out.inflection_rules, rule.name, "#", t.pos)) {
          out.inflection_rules.push_back(rule);
        }
        return;
      }
      case Tok::FormName: {
        const Token t = take();
        expect(Tok::Equals);
        FormRule rule{ascii(t.text), form_items(Tok::Dot), t.pos, file_};
        expect(Tok::Dot);
        if (unique(out.form_rules, rule.name, "$", t.pos)) out.form_rules.push_back(rule);
        return;
      }
      case Tok::Greek:
      case Tok::LBracket: {
        LexiconEntry entry;
        entry.file = file_;
        entry.pos = head.pos;
        if (head.kind == Tok::Greek) stem(take(), entry);
        if (accept(Tok::LBracket)) {
          entry.forms = form_items(Tok::RBracket);
          expect(Tok::RBracket);
        } else if (head.kind == Tok::Greek &&
                   (peek().kind == Tok::LParen || peek().kind == Tok::StressName)) {
          entry.stress_only = stress_source();
        } else {
          fail({Tok::LBracket, Tok::LParen, Tok::StressName});
        }
        expect(Tok::Dot);
        out.words.push_back(std::move(entry));
        return;
      }
      default:
        fail({Tok::StressName, Tok::InflectionName, Tok::FormName, Tok::Greek, Tok::LBracket});
    }
  }

  std::vector<Token> toks_;
  std::size_t k_ = 0;
  std::string file_;
  std::vector<Diagnostic>& diags_;
};

std::string stem_text(const LexiconEntry& e) {
  const std::u32string shown = utf8::decode(render_letters(e.stem));
  std::u32string out;
  std::size_t b = 0;
  for (std::size_t i = 0; i < shown.size(); ++i) {
    while (b < e.syllable_breaks.size() && e.syllable_breaks[b] == i) {
      out.push_back(U'-');
      ++b;
    }
    out.push_back(shown[i]);
  }
  return utf8::encode(out);
}

std::string tuple_text(const std::vector<int>& positions) {
  std::string out = "(";
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(positions[i]);
  }
  return out + ")";
}

std::string suffixes_text(const std::vector<Letters>& suffixes) {
  std::string out = "[";
  for (std::size_t i = 0; i < suffixes.size(); ++i) {
    if (i) out += "|";
    out += render_letters(suffixes[i]);
  }
  return out + "]";
}

std::string item_text(const FormItem& item) {
  if (const auto* ref = std::get_if<FormRef>(&item)) return "$" + ref->name;
  const Form& f = std::get<Form>(item);
  std::string out;
  if (f.infix) out += render_letters(*f.infix) + " ";
  out += f.inflection.ref ? "#" + *f.inflection.ref : suffixes_text(f.inflection.suffixes);
  out += " ";
  out += f.stress.ref ? "!" + *f.stress.ref : tuple_text(f.stress.positions);
  return out;
}

std::string items_text(const std::vector<FormItem>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += " | ";
    out += item_text(items[i]);
  }
  return out;
}

}  // namespace

ParseResult parse(std::string_view source, const std::string& filename) {
  ParseResult result;
  result.source_name = filename;
  if (!utf8::valid(source)) {
    result.diagnostics.push_back({filename, {}, Severity::Error, "file is not valid UTF-8"});
  }
  const std::u32string text = utf8::decode(source);
  Lexer lexer(text, filename, result.diagnostics);
  auto tokens = lexer.run();
  result.file.version = lexer.version;
  Parser parser(std::move(tokens), filename, result.diagnostics);
  parser.run(result.file);
  return result;
}

ParseResult merge(std::vector<ParseResult> parts) {
  ParseResult out;
  std::set<std::string> stress, infl, form;
  for (auto& part : parts) {
    if (!out.file.version) out.file.version = part.file.version;
    for (auto& d : part.diagnostics) out.diagnostics.push_back(std::move(d));
    const auto take = [&](auto& dst, auto& src, std::set<std::string>& seen, const char* sigil) {
      for (auto& rule : src) {
        if (!seen.insert(rule.name).second) {
          out.diagnostics.push_back({part.source_name, rule.pos, Severity::Error,
                                     std::string("duplicate definition of ") + sigil + rule.name});
        } else {
          dst.push_back(std::move(rule));
        }
      }
    };
    take(out.file.stress_rules, part.file.stress_rules, stress, "!");
    take(out.file.inflection_rules, part.file.inflection_rules, infl, "#");
    take(out.file.form_rules, part.file.form_rules, form, "$");
    for (auto& w : part.file.words) out.file.words.push_back(std::move(w));
  }
  return out;
}

ParseResult parse_files(const std::vector<std::string>& paths, bool* io_failed) {
  std::vector<ParseResult> parts;
  if (io_failed) *io_failed = false;
  for (const std::string& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      ParseResult failed;
      failed.source_name = path;
      failed.diagnostics.push_back({path, {}, Severity::Error, "I/O: cannot read file"});
      parts.push_back(std::move(failed));
      if (io_failed) *io_failed = true;
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    parts.push_back(parse(buf.str(), path));
  }
  return merge(std::move(parts));
}

std::string print(const LexiconFile& file) {
  std::string out;
  if (file.version) out += "% VERSION " + *file.version + "\n";
  for (const auto& r : file.stress_rules) out += "!" + r.name + " = " + tuple_text(r.positions) + ".\n";
  for (const auto& r : file.inflection_rules) {
    out += "#" + r.name + " = " + suffixes_text(r.suffixes) + ".\n";
  }
  for (const auto& r : file.form_rules) out += "$" + r.name + " = " + items_text(r.alternatives) + ".\n";
  for (const auto& w : file.words) {
    out += stem_text(w);
    if (w.stress_only) {
      out += w.stress_only->ref ? "!" + *w.stress_only->ref : tuple_text(w.stress_only->positions);
    } else {
      out += "[" + items_text(w.forms) + "]";
    }
    out += ".\n";
  }
  return out;
}

ResolvedRuleSet resolve(const LexiconFile& file) {
  ResolvedRuleSet out;
  std::map<std::string, const StressRule*> stress;
  std::map<std::string, const InflectionRule*> inflections;
  std::map<std::string, const FormRule*> forms;
  for (const auto& r : file.stress_rules) stress.emplace(r.name, &r);
  for (const auto& r : file.inflection_rules) inflections.emplace(r.name, &r);
  for (const auto& r : file.form_rules) forms.emplace(r.name, &r);

  std::string current_file;
  bool ok = true;
  const auto unresolved = [&](const std::string& what, SourcePos pos) {
    out.diagnostics.push_back({current_file, pos, Severity::Error, "unresolved reference " + what});
    ok = false;
  };

  const auto stress_of = [&](const StressSource& s) -> std::vector<int> {
    if (!s.ref) return s.positions;
    const auto it = stress.find(*s.ref);
    if (it == stress.end()) {
      unresolved("!" + *s.ref, s.pos);
      return {};
    }
    return it->second->positions;
  };

  std::map<std::string, std::vector<ResolvedForm>> memo;
  std::set<std::string> reported_cycles;
  std::function<void(const FormItem&, std::vector<std::string>&, std::vector<ResolvedForm>&)>
      expand_item = [&](const FormItem& item, std::vector<std::string>& stack,
                        std::vector<ResolvedForm>& sink) {
        if (const auto* ref = std::get_if<FormRef>(&item)) {
          if (auto m = memo.find(ref->name); m != memo.end()) {
            sink.insert(sink.end(), m->second.begin(), m->second.end());
            return;
          }
          const auto it = forms.find(ref->name);
          if (it == forms.end()) {
            unresolved("$" + ref->name, ref->pos);
            return;
          }
          if (std::find(stack.begin(), stack.end(), ref->name) != stack.end()) {
            std::string chain;
            for (const auto& s : stack) chain += "$" + s + " -> ";
            chain += "$" + ref->name;
            if (reported_cycles.insert(ref->name).second) {
              out.diagnostics.push_back(
                  {current_file, ref->pos, Severity::Error, "cycle detected: " + chain});
            }
            ok = false;
            return;
          }
          stack.push_back(ref->name);
          const bool was_ok = ok;
          ok = true;
          std::vector<ResolvedForm> local;
          for (const auto& alt : it->second->alternatives) expand_item(alt, stack, local);
          stack.pop_back();
          if (ok) memo.emplace(ref->name, local);
          ok = ok && was_ok;
          sink.insert(sink.end(), local.begin(), local.end());
          return;
        }
        const Form& f = std::get<Form>(item);
        ResolvedForm rf;
        rf.infix = f.infix.value_or(Letters{});
        if (f.inflection.ref) {
          const auto it = inflections.find(*f.inflection.ref);
          if (it == inflections.end()) {
            unresolved("#" + *f.inflection.ref, f.inflection.pos);
          } else {
            rf.suffixes = it->second->suffixes;
          }
        } else {
          rf.suffixes = f.inflection.suffixes;
        }
        rf.stress = stress_of(f.stress);
        sink.push_back(std::move(rf));
      };

  const auto note = [](auto& pool, const auto& value) {
    if (std::find(pool.begin(), pool.end(), value) == pool.end()) pool.push_back(value);
  };

  for (std::size_t i = 0; i < file.words.size(); ++i) {
    const LexiconEntry& w = file.words[i];
    current_file = w.file;
    ok = true;
    ResolvedEntry entry;
    entry.id = i;
    entry.stem = w.stem;
    entry.syllable_breaks = w.syllable_breaks;
    entry.file = w.file;
    entry.pos = w.pos;
    entry.inflected = w.inflected();
    if (w.stress_only) {
      entry.forms.push_back({Letters{}, {Letters{}}, stress_of(*w.stress_only)});
    } else {
      std::vector<std::string> stack;
      for (const auto& item : w.forms) expand_item(item, stack, entry.forms);
    }
    if (!ok) continue;
    for (const auto& f : entry.forms) {
      if (!f.infix.empty()) note(out.infixes, f.infix);
      if (entry.inflected) note(out.inflections, f.suffixes);
      note(out.stress_tuples, f.stress);
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

}  // namespace glspell::gwdl
