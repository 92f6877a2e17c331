#pragma once

// Greek Word Description Language: AST, parser, reference resolver and
// validator. Grammar (whitespace insignificant, ';' starts a comment line):
//
//   lexicon_file   ::= ['%' VERSION NUMBER] { definition } { word }
//   definition     ::= stress_def | inflection_def | form_def
//   stress_def     ::= STRESSV '=' stress '.'
//   stress         ::= '(' NUMBER { ',' NUMBER } ')'
//   inflection_def ::= INFLECTIONV '=' inflection '.'
//   inflection     ::= '[' SUFFIX { '|' SUFFIX } [ '|' ] ']'
//   form_def       ::= FORMV '=' form { '|' form } '.'
//   form           ::= [INFIX] (INFLECTIONV | inflection) (STRESSV | stress)
//   word           ::= [STEM] '[' form { '|' form } ']' '.' | STEM (stress | STRESSV) '.'
//
// An inflection definition may also be written without brackets
// ("#OUSOSa = ος|ου|ο."), and a FORMV may appear wherever a form is allowed.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "glspell/greek_text.hpp"

namespace glspell::gwdl {

struct SourcePos {
  std::size_t line = 1;
  std::size_t col = 1;
};

enum class Severity { Warning, Error };

struct Diagnostic {
  std::string file;
  SourcePos pos;
  Severity severity = Severity::Error;
  std::string message;

  // "file:line:col: severity: message"
  std::string format() const;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics) noexcept;

// Rule references. Names are ASCII without the sigil.
struct StressSource {
  std::optional<std::string> ref;
  std::vector<int> positions;  // inline tuple when ref is empty
  SourcePos pos;

  bool operator==(const StressSource& o) const {
    return ref == o.ref && positions == o.positions;
  }
};

struct InflectionSource {
  std::optional<std::string> ref;
  std::vector<Letters> suffixes;  // inline list when ref is empty
  SourcePos pos;

  bool operator==(const InflectionSource& o) const {
    return ref == o.ref && suffixes == o.suffixes;
  }
};

struct Form {
  std::optional<Letters> infix;
  InflectionSource inflection;
  StressSource stress;
  SourcePos pos;

  bool operator==(const Form& o) const {
    return infix == o.infix && inflection == o.inflection && stress == o.stress;
  }
};

struct FormRef {
  std::string name;
  SourcePos pos;

  bool operator==(const FormRef& o) const { return name == o.name; }
};

using FormItem = std::variant<FormRef, Form>;

struct StressRule {
  std::string name;
  std::vector<int> positions;
  SourcePos pos;
  std::string file;

  bool operator==(const StressRule& o) const {
    return name == o.name && positions == o.positions;
  }
};

struct InflectionRule {
  std::string name;
  std::vector<Letters> suffixes;
  SourcePos pos;
  std::string file;

  bool operator==(const InflectionRule& o) const {
    return name == o.name && suffixes == o.suffixes;
  }
};

struct FormRule {
  std::string name;
  std::vector<FormItem> alternatives;
  SourcePos pos;
  std::string file;

  bool operator==(const FormRule& o) const {
    return name == o.name && alternatives == o.alternatives;
  }
};

struct LexiconEntry {
  Letters stem;                       // hyphens removed
  std::vector<std::size_t> syllable_breaks;  // letter offsets where hyphens stood
  std::vector<FormItem> forms;        // inflected entry
  std::optional<StressSource> stress_only;  // non-inflected entry
  std::string file;
  SourcePos pos;

  bool inflected() const noexcept { return !stress_only.has_value(); }

  bool operator==(const LexiconEntry& o) const {
    return stem == o.stem && syllable_breaks == o.syllable_breaks && forms == o.forms &&
           stress_only == o.stress_only;
  }
};

struct LexiconFile {
  std::optional<std::string> version;
  std::vector<StressRule> stress_rules;
  std::vector<InflectionRule> inflection_rules;
  std::vector<FormRule> form_rules;
  std::vector<LexiconEntry> words;

  bool operator==(const LexiconFile& o) const {
    return version == o.version && stress_rules == o.stress_rules &&
           inflection_rules == o.inflection_rules && form_rules == o.form_rules &&
           words == o.words;
  }
};

struct ParseResult {
  std::string source_name;
  LexiconFile file;
  std::vector<Diagnostic> diagnostics;
};

ParseResult parse(std::string_view source, const std::string& filename = "<input>");

// Concatenates parsed files; a later definition with an existing name is an
// error and is dropped.
ParseResult merge(std::vector<ParseResult> parts);

// Reads and parses each path in order, then merges. Unreadable files are
// reported as diagnostics with an "I/O" message.
ParseResult parse_files(const std::vector<std::string>& paths, bool* io_failed = nullptr);

// Canonical pretty printer; parse(print(f)) == f for every valid file.
std::string print(const LexiconFile& file);

struct ResolvedForm {
  Letters infix;
  std::vector<Letters> suffixes;
  std::vector<int> stress;

  bool operator==(const ResolvedForm&) const = default;
};

struct ResolvedEntry {
  std::size_t id = 0;  // position in the concatenated word list
  Letters stem;
  std::vector<std::size_t> syllable_breaks;
  std::vector<ResolvedForm> forms;
  bool inflected = true;
  std::string file;
  SourcePos pos;
};

struct ResolvedRuleSet {
  std::vector<ResolvedEntry> entries;
  // Distinct non-empty infixes, suffix lists and stress tuples actually used
  // by entries, in first-use order.
  std::vector<Letters> infixes;
  std::vector<std::vector<Letters>> inflections;
  std::vector<std::vector<int>> stress_tuples;
  std::vector<Diagnostic> diagnostics;
};

ResolvedRuleSet resolve(const LexiconFile& file);

// Parse/resolve diagnostics plus semantic checks (stress range, tuple length,
// stem hyphenation, clamped stress, empty words).
std::vector<Diagnostic> validate(const LexiconFile& file,
                                 const std::vector<Diagnostic>& parse_diagnostics = {});

}  // namespace glspell::gwdl
