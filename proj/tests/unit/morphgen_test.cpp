#include <set>

#include "doctest.h"
#include "glspell/morphgen.hpp"
#include "lexicon.hpp"

using namespace glspell;

namespace {

std::set<std::string> displays(const std::vector<morph::SurfaceForm>& forms) {
  std::set<std::string> out;
  for (const auto& f : forms) out.insert(f.display);
  return out;
}

const std::set<std::string> kNoun{"πρόοδος", "προόδου", "πρόοδο", "πρόοδοι", "προόδων", "προόδους"};
const std::set<std::string> kPast{"αγαπούσα",   "αγαπούσες",  "αγαπούσε",  "αγαπούσαμε",
                                  "αγαπούσατε", "αγαπούσαν", "αγαπούσανε"};

}  // namespace

TEST_CASE("stress_for repeats the last tuple value") {
  const std::vector<int> a14{3, 2, 3, 3, 2};
  CHECK(morph::stress_for(a14, 1) == 3);
  CHECK(morph::stress_for(a14, 2) == 2);
  CHECK(morph::stress_for(a14, 5) == 2);
  CHECK(morph::stress_for(a14, 6) == 2);
  CHECK(morph::stress_for(std::vector<int>{1}, 5) == 1);
}

TEST_CASE("surface_stress clamps and drops") {
  CHECK(morph::surface_stress(3, 4) == 3);
  CHECK(morph::surface_stress(3, 2) == 2);
  CHECK_FALSE(morph::surface_stress(2, 1).has_value());
  CHECK_FALSE(morph::surface_stress(0, 3).has_value());
}

TEST_CASE("expand_form on the πρόοδος and αγαπούσα forms") {
  const gwdl::ResolvedForm noun{U"", {U"οσ", U"ου", U"ο", U"οι", U"ων", U"ουσ"}, {3, 2, 3, 3, 2}};
  CHECK(displays(morph::expand_form(U"προοδ", noun)) == kNoun);

  const gwdl::ResolvedForm past{U"ουσ", {U"α", U"εσ", U"ε", U"αν", U"αμε", U"ατε", U"ανε"}, {2, 2, 2, 2, 3}};
  const auto forms = morph::expand_form(U"αγαπ", past);
  CHECK(displays(forms) == kPast);
  for (const auto& f : forms) CHECK(f.unstressed == U"αγαπουσ" + past.suffixes[f.suffix_index]);

  const gwdl::ResolvedForm bare{U"", {U""}, {1}};
  const auto edo = morph::expand_form(U"εδω", bare);
  REQUIRE(edo.size() == 1);
  CHECK(edo[0].display == "εδώ");
}

TEST_CASE("expand_entry on the base entries") {
  const auto rules = testing::load_rules(testing::base_sources());
  const auto noun = morph::expand_entry(rules.entries[0]);
  CHECK(noun.size() == 6);
  CHECK(displays(noun) == kNoun);

  const auto verb = morph::expand_entry(rules.entries[1]);
  const auto verb_displays = displays(verb);
  CHECK(verb_displays.size() == verb.size());
  for (const auto& past : kPast) CHECK(verb_displays.count(past) == 1);
  for (const char* present : {"αγαπώ", "αγαπάς", "αγαπά", "αγαπούν", "αγαπάν", "αγαπάμε", "αγαπούμε",
                              "αγαπάτε", "αγαπάνε", "αγαπούνε"}) {
    CHECK(verb_displays.count(present) == 1);
  }
  CHECK(verb.size() == 17);

  const auto kapou = morph::expand_entry(testing::resolve_text("!a2=(2).\nκα-που!a2.\n").entries.at(0));
  REQUIRE(kapou.size() == 1);
  CHECK(kapou[0].display == "κάπου");
}

TEST_CASE("expand_all counts and ids") {
  const auto rules = testing::load_rules(testing::base_sources());
  std::size_t suffix_total = 0;
  for (const auto& e : rules.entries)
    for (const auto& f : e.forms) suffix_total += f.suffixes.size();
  CHECK(suffix_total == 6 + 10 + 7);
  CHECK(morph::expand_all(rules, [](const morph::SurfaceForm&) {}) == suffix_total);

  CHECK(morph::expand_all(gwdl::ResolvedRuleSet{}, [](const morph::SurfaceForm&) { FAIL("no forms expected"); }) == 0);

  const auto twice = testing::resolve_text("!a=(2).\n#S=ος|ου.\n$F=#S !a.\nλο-γ[$F].\nλο-γ[$F].\n");
  std::vector<std::size_t> ids;
  morph::expand_all(twice, [&](const morph::SurfaceForm& f) { ids.push_back(f.entry_id); });
  CHECK(ids == std::vector<std::size_t>{0, 0, 1, 1});
}

TEST_CASE("seed forms satisfy the concatenation and stress invariants") {
  const auto rules = testing::load_rules(testing::seed_sources());
  const auto forms = testing::all_forms(rules);
  for (const auto& f : forms) {
    const auto& entry = rules.entries[f.entry_id];
    const auto& form = entry.forms[f.form_index];
    const Letters suffix = form.suffixes.empty() ? Letters() : form.suffixes[f.suffix_index];
    CHECK(f.unstressed == entry.stem + form.infix + suffix);
    if (f.stress) {
      CHECK(*f.stress >= 1);
      CHECK(*f.stress <= 3);
      CHECK(static_cast<std::size_t>(*f.stress) <= syllable_count(f.unstressed));
    }
    const auto n = normalize(f.display);
    CHECK(n.letters == f.unstressed);
    CHECK(n.stress == f.stress);
    CHECK(render(n) == f.display);
  }
  CHECK(forms == testing::all_forms(testing::load_rules(testing::seed_sources())));
}

TEST_CASE("hyphenated seed stems agree with syllabification") {
  const auto rules = testing::load_rules(testing::seed_sources());
  for (const auto& e : rules.entries) {
    if (e.syllable_breaks.empty()) continue;
    const auto nuclei = syllabify(e.stem).nuclei;
    std::vector<std::size_t> bounds{0};
    bounds.insert(bounds.end(), e.syllable_breaks.begin(), e.syllable_breaks.end());
    bounds.push_back(e.stem.size());
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
      std::size_t inside = 0;
      for (const auto& n : nuclei) inside += n.begin >= bounds[s] && n.end <= bounds[s + 1];
      CHECK_MESSAGE(inside <= 1, render_letters(e.stem));
    }
  }
}
