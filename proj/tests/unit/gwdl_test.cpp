#include <algorithm>
#include <random>

#include "doctest.h"
#include "glspell/gwdl.hpp"
#include "lexicon.hpp"

using namespace glspell;
using namespace glspell::gwdl;

namespace {

bool any_message(const std::vector<Diagnostic>& diagnostics, const std::string& needle) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [&](const Diagnostic& d) { return d.message.find(needle) != std::string::npos; });
}

const char* kBaseRules =
    "!a14 = (3, 2, 3, 3, 2).\n"
    "#OUSOSb = ος|ου|ο|οι|ων|ους.\n"
    "$OUSOS7 = #OUSOSb !a14.\n"
    "προ-ο-δ[$OUSOS7].\n";

// Random derivations of the grammar, built as text.
struct Generator {
  std::mt19937 rng;
  explicit Generator(unsigned seed) : rng(seed) {}

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  std::string syllable() {
    static const std::vector<std::string> onsets = {"", "κ", "π", "τ", "μ", "ν", "λ", "σ", "γρ", "πρ"};
    static const std::vector<std::string> nuclei = {"α", "ε", "ο", "ι", "ου", "αι", "ω", "η"};
    return onsets[pick(onsets.size())] + nuclei[pick(nuclei.size())];
  }

  std::string suffix() {
    static const std::vector<std::string> s = {"ος", "ου", "ο", "οι", "ων", "ους", "α", "ες", "ε", "η", "ης"};
    return s[pick(s.size())];
  }

  std::string tuple(std::size_t n) {
    std::string out = "(";
    for (std::size_t i = 0; i < n; ++i) out += (i ? ", " : "") + std::to_string(1 + pick(3));
    return out + ")";
  }

  std::string suffixes(std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += (i ? "|" : "") + suffix();
    return out;
  }

  std::string source() {
    std::string out = pick(2) ? "% VERSION 1\n; generated\n" : "";
    const std::size_t stress_rules = 1 + pick(3), inflection_rules = 1 + pick(3), form_rules = 1 + pick(3);
    for (std::size_t i = 0; i < stress_rules; ++i) out += "!s" + std::to_string(i) + " = " + tuple(1 + pick(4)) + ".\n";
    for (std::size_t i = 0; i < inflection_rules; ++i) {
      const std::string list = suffixes(1 + pick(5));
      out += "#I" + std::to_string(i) + " = " + (pick(2) ? "[" + list + "]" : list) + ".\n";
    }
    const auto form = [&]() {
      std::string f = pick(3) == 0 ? "ουσ " : "";
      f += pick(3) == 0 ? "[" + suffixes(1 + pick(3)) + "]" : "#I" + std::to_string(pick(inflection_rules));
      f += " ";
      f += pick(3) == 0 ? tuple(1 + pick(3)) : "!s" + std::to_string(pick(stress_rules));
      return f;
    };
    for (std::size_t i = 0; i < form_rules; ++i) out += "$F" + std::to_string(i) + " = " + form() + ".\n";
    const std::size_t words = 1 + pick(6);
    for (std::size_t i = 0; i < words; ++i) {
      std::string stem = syllable();
      const std::size_t extra = pick(3);
      for (std::size_t k = 0; k < extra; ++k) stem += "-" + syllable();
      stem += "κ";
      if (pick(4) == 0) {
        out += stem + (pick(2) ? "!s0" : "(2)") + ".\n";
        continue;
      }
      out += stem + "[";
      const std::size_t alternatives = 1 + pick(2);
      for (std::size_t k = 0; k < alternatives; ++k) {
        out += (k ? "|" : "") + (pick(2) ? "$F" + std::to_string(pick(form_rules)) : form());
      }
      out += "].\n";
    }
    return out;
  }
};

}  // namespace

TEST_CASE("parse stress rule") {
  const auto r = parse("!a2=(2).");
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.file.stress_rules.size() == 1);
  CHECK(r.file.stress_rules[0].name == "a2");
  CHECK(r.file.stress_rules[0].positions == std::vector<int>{2});
}

TEST_CASE("parse inflection rule keeps suffix order") {
  const auto r = parse("#OUSOSb = ος|ου|ο|οι|ων|ους.");
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.file.inflection_rules.size() == 1);
  CHECK(r.file.inflection_rules[0].name == "OUSOSb");
  CHECK(r.file.inflection_rules[0].suffixes ==
        std::vector<Letters>{U"οσ", U"ου", U"ο", U"οι", U"ων", U"ουσ"});
}

TEST_CASE("parse form rule with infix") {
  const auto r = parse("$PAEF1= ους #PAE !b1.");
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.file.form_rules.size() == 1);
  const auto& rule = r.file.form_rules[0];
  CHECK(rule.name == "PAEF1");
  REQUIRE(rule.alternatives.size() == 1);
  const auto& form = std::get<Form>(rule.alternatives[0]);
  CHECK(form.infix == Letters(U"ουσ"));
  CHECK(form.inflection.ref == "PAE");
  CHECK(form.stress.ref == "b1");
}

TEST_CASE("parse entries, comments, version and empty suffix") {
  const auto r = parse(
      "% VERSION 2\n"
      "; a comment line\n"
      "#Z = α|.\n"
      "κα-που!a2.\n"
      "ε-δω(1).\n"
      "α-γα-π [$ENEAO| $PAEF1].\n");
  REQUIRE(r.diagnostics.empty());
  CHECK(r.file.version == "2");
  CHECK(r.file.inflection_rules[0].suffixes == std::vector<Letters>{U"α", U""});
  REQUIRE(r.file.words.size() == 3);
  CHECK(r.file.words[0].stem == U"καπου");
  CHECK(r.file.words[0].syllable_breaks == std::vector<std::size_t>{2});
  CHECK(r.file.words[0].stress_only->ref == "a2");
  CHECK(r.file.words[1].stress_only->positions == std::vector<int>{1});
  CHECK(r.file.words[2].forms.size() == 2);
}

TEST_CASE("parse reports syntax errors with positions") {
  const auto r = parse("!a = (2.\n#B = α.\n", "x.gwdl");
  REQUIRE_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics[0].file == "x.gwdl");
  CHECK(r.diagnostics[0].pos.line == 1);
  CHECK(r.diagnostics[0].format().rfind("x.gwdl:1:", 0) == 0);
}

TEST_CASE("resolve binds the base noun entry") {
  const auto rules = testing::resolve_text(kBaseRules);
  CHECK(rules.diagnostics.empty());
  REQUIRE(rules.entries.size() == 1);
  const auto& entry = rules.entries[0];
  CHECK(entry.stem == U"προοδ");
  REQUIRE(entry.forms.size() == 1);
  CHECK(entry.forms[0].suffixes.size() == 6);
  CHECK(entry.forms[0].stress == std::vector<int>{3, 2, 3, 3, 2});
  CHECK(entry.forms[0].infix.empty());
}

TEST_CASE("resolve reports unresolved references") {
  const auto rules = testing::resolve_text("κα-λ[$X].\n");
  REQUIRE(rules.diagnostics.size() == 1);
  CHECK(rules.diagnostics[0].message.find("unresolved reference") != std::string::npos);
  CHECK(rules.diagnostics[0].message.find("$X") != std::string::npos);
}

TEST_CASE("rule inventory of the two base entries") {
  const auto rules = testing::load_rules(testing::base_sources());
  CHECK(rules.entries.size() == 2);
  CHECK(rules.infixes == std::vector<Letters>{U"ουσ"});
  // #OUSOSb, #ENEAO and #PAE.
  CHECK(rules.inflections.size() == 3);
}

TEST_CASE("seed inventory stays far below the entry count") {
  const auto rules = testing::load_rules(testing::seed_sources());
  CHECK(rules.diagnostics.empty());
  CHECK(rules.entries.size() >= 200);
  CHECK(rules.inflections.size() * 10 < rules.entries.size());
  CHECK(rules.stress_tuples.size() * 10 < rules.entries.size());
}

TEST_CASE("merge rejects duplicate definitions") {
  std::vector<ParseResult> parts;
  parts.push_back(parse("!a = (1).\n", "one.gwdl"));
  parts.push_back(parse("!a = (2).\n", "two.gwdl"));
  const auto merged = merge(std::move(parts));
  REQUIRE(merged.file.stress_rules.size() == 1);
  CHECK(merged.file.stress_rules[0].positions == std::vector<int>{1});
  REQUIRE(merged.diagnostics.size() == 1);
  CHECK(merged.diagnostics[0].file == "two.gwdl");
  CHECK(merged.diagnostics[0].message.find("duplicate definition of !a") != std::string::npos);
}

TEST_CASE("parse_files reports unreadable files") {
  bool io_failed = false;
  const auto r = parse_files({"/nonexistent/lexicon.gwdl"}, &io_failed);
  CHECK(io_failed);
  CHECK(has_errors(r.diagnostics));
}

TEST_CASE("validate") {
  SUBCASE("stress position out of range") {
    const auto r = parse("!bad=(4).");
    CHECK(any_message(validate(r.file, r.diagnostics), "stress position out of range"));
  }
  SUBCASE("base example is clean") {
    const auto r = parse_files(testing::base_sources());
    CHECK(validate(r.file, r.diagnostics).empty());
  }
  SUBCASE("seed lexicon is clean") {
    const auto r = parse_files(testing::seed_sources());
    CHECK(validate(r.file, r.diagnostics).empty());
  }
  SUBCASE("tuple longer than the inflection") {
    const auto r = parse(
        "!t = (1,2,1,2,1,2,1).\n#S = ος|ου|ο|οι|ων|ους.\n$F = #S !t.\nκα-λ[$F].\n");
    CHECK(any_message(validate(r.file, r.diagnostics), "stress tuple has 7 positions"));
  }
  SUBCASE("hyphenation disagreeing with syllabification") {
    const auto r = parse("κα-λακ-ι(1).\nκαλα-κι(1).\n");
    const auto diagnostics = validate(r.file, r.diagnostics);
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].severity == Severity::Warning);
    CHECK(diagnostics[0].pos.line == 2);
    CHECK(any_message(diagnostics, "hyphenation disagrees"));
  }
  SUBCASE("unresolved reference is an error") {
    const auto r = parse("κα-λ[$X].\n");
    CHECK(any_message(validate(r.file, r.diagnostics), "unresolved reference"));
  }
}

TEST_CASE("print/parse fixpoint on the lexicon files") {
  for (const auto& path : testing::seed_sources()) {
    const auto first = parse_files({path});
    const std::string printed = print(first.file);
    const auto second = parse(printed);
    CHECK(second.diagnostics.empty());
    CHECK(second.file == first.file);
    CHECK(print(second.file) == printed);
  }
}

TEST_CASE("random derivations parse, print and reparse") {
  Generator gen(11);
  for (int i = 0; i < 300; ++i) {
    const std::string source = gen.source();
    const auto r = parse(source);
    REQUIRE_MESSAGE(r.diagnostics.empty(), source);
    CHECK(testing::resolve_text(source).diagnostics.empty());
    const auto again = parse(print(r.file));
    CHECK(again.diagnostics.empty());
    CHECK(again.file == r.file);
  }
}

TEST_CASE("single-token mutations produce diagnostics") {
  Generator gen(23);
  std::mt19937 rng(3);
  const std::vector<std::pair<std::string, std::string>> swaps = {
      {".", ""}, {"=", "+"}, {"(", ""}, {")", ""}, {"[", ""}, {"]", ""}, {"|", "&"}, {"!", "@"}, {"$", "%"}};
  int mutated = 0;
  for (int i = 0; i < 300; ++i) {
    std::string source = gen.source();
    const auto& [from, to] = swaps[static_cast<std::size_t>(i) % swaps.size()];
    std::vector<std::size_t> hits;
    for (std::size_t p = source.find(from); p != std::string::npos; p = source.find(from, p + 1)) {
      if ((from == "$" || from == "!") && (p == 0 || source[p - 1] == '\n')) continue;
      hits.push_back(p);
    }
    if (hits.empty()) continue;
    const std::size_t at = hits[std::uniform_int_distribution<std::size_t>(0, hits.size() - 1)(rng)];
    source.replace(at, from.size(), to);
    const auto r = parse(source);
    CHECK_MESSAGE(!validate(r.file, r.diagnostics).empty(), source);
    ++mutated;
  }
  CHECK(mutated > 200);
}
