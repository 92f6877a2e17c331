#include <algorithm>
#include <set>

#include "doctest.h"
#include "glspell/correct.hpp"
#include "lexicon.hpp"

using namespace glspell;
using namespace glspell::correct;

namespace {

const gwdl::ResolvedRuleSet& seed_rules() {
  static const auto rules = testing::load_rules(testing::seed_sources());
  return rules;
}

const std::vector<morph::SurfaceForm>& seed_forms() {
  static const auto forms = testing::all_forms(seed_rules());
  return forms;
}

std::shared_ptr<const dict::CompiledDictionary> seed_dictionary() {
  static const auto d = dict::build(seed_rules());
  return d;
}

std::vector<std::string> displays(const std::vector<Suggestion>& s) {
  std::vector<std::string> out;
  for (const auto& x : s) out.push_back(x.display);
  return out;
}

std::set<std::string> displays(const std::vector<Candidate>& c) {
  std::set<std::string> out;
  for (const auto& x : c) out.insert(x.display);
  return out;
}

std::vector<std::string> texts(const std::vector<Grapheme>& g) {
  std::vector<std::string> out;
  for (const auto& x : g) out.push_back(render_letters(x.text));
  return out;
}

std::set<Letters> alternatives_of(LettersView unit) {
  const auto g = segment_graphemes(unit);
  REQUIRE(g.size() == 1);
  return {g[0].alternatives.begin(), g[0].alternatives.end()};
}

}  // namespace

TEST_CASE("check verdicts") {
  const Checker checker(seed_dictionary());
  const auto ok = checker.check("πρόοδος");
  CHECK(ok.accepted);
  CHECK(ok.source == Source::Main);

  const auto stress = checker.check("κέφαλι");
  CHECK_FALSE(stress.accepted);
  CHECK(stress.stress_only);
  CHECK(stress.expected_displays == std::vector<std::string>{"κεφάλι"});

  CHECK_FALSE(checker.check("ζζζ").accepted);
  CHECK(checker.suggest("ζζζ").empty());
  CHECK_THROWS_AS(checker.check("abc"), GreekTextError);
  CHECK_FALSE(checker.accepted("abc"));
}

TEST_CASE("capitals") {
  const Checker checker(seed_dictionary());
  CHECK(checker.accepted("ΠΡΟΟΔΟΣ"));
  CHECK(checker.accepted("Πρόοδος"));
  CHECK(checker.accepted("ΠΡΌΟΔΟΣ"));
  CHECK_FALSE(checker.accepted("ΠΡΟΌΔΟΣ"));
  CHECK_FALSE(checker.accepted("Προοδος"));
  CHECK(displays(checker.suggest("Κέφαλι")).front() == "Κεφάλι");
  CHECK(displays(checker.suggest("ΚΈΦΑΛΙ")).front() == "ΚΕΦΆΛΙ");
  CHECK(match_case("κεφάλι", normalize("Κέφαλι")) == "Κεφάλι");
  CHECK(match_case("κεφάλι", normalize("κέφαλι")) == "κεφάλι");
}

TEST_CASE("confusion sets") {
  const std::set<Letters> i_sound{U"η", U"ι", U"υ", U"ει", U"οι"};
  for (const Letters& unit : i_sound) CHECK(alternatives_of(unit) == i_sound);
  CHECK(alternatives_of(U"ε") == std::set<Letters>{U"ε", U"αι"});
  CHECK(alternatives_of(U"αι") == std::set<Letters>{U"ε", U"αι"});
  CHECK(alternatives_of(U"ο") == std::set<Letters>{U"ο", U"ω"});
  CHECK(alternatives_of(U"χθ") == std::set<Letters>{U"χθ", U"χτ"});
  CHECK(alternatives_of(U"φτ") == std::set<Letters>{U"φθ", U"φτ"});
  CHECK(alternatives_of(U"σθ") == std::set<Letters>{U"σθ", U"στ"});
  CHECK(alternatives_of(U"αβ") == std::set<Letters>{U"αυ", U"αβ"});
  CHECK(alternatives_of(U"πσ") == std::set<Letters>{U"ψ", U"πσ"});
  CHECK(alternatives_of(U"ξ") == std::set<Letters>{U"ξ", U"κσ"});
  CHECK(alternatives_of(U"ου") == std::set<Letters>{U"ου"});
  CHECK(alternatives_of(U"κ") == std::set<Letters>{U"κ"});
}

TEST_CASE("grapheme segmentation is longest match") {
  CHECK(texts(segment_graphemes(U"προοδου")) == std::vector<std::string>{"π", "ρ", "ο", "ο", "δ", "ου"});
  CHECK(texts(segment_graphemes(U"παιδια")) == std::vector<std::string>{"π", "αι", "δ", "ι", "α"});
  CHECK(texts(segment_graphemes(U"χθεσ")) == std::vector<std::string>{"χθ", "ε", "ς"});
  CHECK(texts(segment_graphemes(U"ευκολοι")) == std::vector<std::string>{"ευ", "κ", "ο", "λ", "οι"});
}

TEST_CASE("orthographic candidates") {
  const Checker checker(seed_dictionary());
  CHECK(checker.orthographic_candidates(U"προωδου") == std::vector<std::string>{"προόδου"});
  CHECK(checker.orthographic_candidates(U"προοδοσ") == std::vector<std::string>{"πρόοδος"});
  CHECK(checker.orthographic_candidates(U"αγαπφ").empty());
  CHECK(checker.orthographic_candidates(U"χτεσ") == std::vector<std::string>{"χθες"});
  CHECK(displays(checker.suggest("προώδου")).front() == "προόδου");
  CHECK(checker.suggest("προώδου").front().error_class == ErrorClass::Orthographic);
}

TEST_CASE("reversal examples") {
  const Checker checker(seed_dictionary());
  const auto deletion = checker.reverse_deletion(normalize("πρόγαμμα").letters);
  CHECK(displays(deletion).count("πρόγραμμα") == 1);
  for (const auto& c : deletion) CHECK(c.error_class == ErrorClass::Deletion);

  const auto transposed = checker.reverse_transposition(normalize("πρόργαμμα").letters);
  CHECK(displays(transposed).count("πρόγραμμα") == 1);
  for (const auto& c : transposed) CHECK(c.error_class == ErrorClass::Transposition);

  const auto inserted = checker.reverse_insertion(normalize("πρόγραμμαα").letters);
  CHECK(displays(inserted).count("πρόγραμμα") == 1);
  for (const auto& c : inserted) CHECK(c.error_class == ErrorClass::Insertion);

  const auto substituted = checker.reverse_substitution(normalize("πρόγρεμμα").letters);
  CHECK(displays(substituted).count("πρόγραμμα") == 1);
}

TEST_CASE("insertion probes and pruning") {
  CheckerOptions off;
  off.trigram_pruning = false;
  const Checker unpruned(seed_dictionary(), nullptr, off);
  const Checker pruned(seed_dictionary());
  const Letters word = normalize("πρόγαμμα").letters;
  ProbeStats a, b;
  const auto ra = unpruned.reverse_deletion(word, &a);
  const auto rb = pruned.reverse_deletion(word, &b);
  CHECK(a.probes == 24 * 9);
  CHECK(a.pruned == 0);
  CHECK(b.probes < a.probes);
  CHECK(b.probes + b.pruned == a.probes);
  CHECK(displays(ra) == displays(rb));

  ProbeStats c, d;
  CHECK(displays(unpruned.reverse_substitution(word, &c)) == displays(pruned.reverse_substitution(word, &d)));
  CHECK(c.probes == 23 * word.size());
  CHECK(d.probes < c.probes);
}

TEST_CASE("transposition skips identical neighbours") {
  const Checker checker(seed_dictionary());
  ProbeStats stats;
  checker.reverse_transposition(U"αμμα", &stats);
  CHECK(stats.probes == 2);
}

TEST_CASE("suggestion ranking") {
  const Checker checker(seed_dictionary());
  CHECK(checker.suggest("πρόοδος").empty());

  const auto kefali = checker.suggest("κέφαλι");
  REQUIRE_FALSE(kefali.empty());
  CHECK(kefali[0].display == "κεφάλι");
  CHECK(kefali[0].error_class == ErrorClass::Stress);

  for (const char* word : {"κέφαλι", "πρόγαμμα", "πρόγραμμαα", "προώδου", "χτες", "καλι", "λογο", "μερα"}) {
    const auto s = checker.suggest(word);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i].rank == static_cast<int>(i + 1));
      CHECK(checker.accepted(s[i].display));
      if (i > 0) {
        CHECK(class_priority(s[i - 1].error_class) <= class_priority(s[i].error_class));
        if (class_priority(s[i - 1].error_class) == class_priority(s[i].error_class)) CHECK(s[i - 1].display < s[i].display);
      }
    }
    std::set<std::string> unique;
    for (const auto& x : s) unique.insert(x.display);
    CHECK(unique.size() == s.size());
    CHECK(s.size() <= 10);
  }

  const auto plain = checker.suggest("πρόγραμμαα");
  REQUIRE(plain.size() >= 2);
  CHECK(plain[0].display == "προγράμματα");
  CHECK(plain[1].display == "πρόγραμμα");

  const auto with_memory = std::make_shared<correct::Checker>(
      dict::build(seed_rules(), {{10, "πρόγραμμα"}}, 10));
  const auto ranked = with_memory->suggest("πρόγραμμαα");
  CHECK(ranked[0].display == "πρόγραμμα");

  CheckerOptions one;
  one.max_suggestions = 1;
  CHECK(Checker(seed_dictionary(), nullptr, one).suggest("πρόγραμμαα").size() == 1);
}

TEST_CASE("lookup order memory, user, main") {
  const auto user = std::make_shared<dict::UserDictionary>();
  const auto main = dict::build(seed_rules(), {{3, "πρόοδος"}}, 10);
  const Checker checker(main, user);
  CHECK(checker.check("πρόοδος").source == Source::Memory);
  CHECK(checker.check("προόδου").source == Source::Main);
  CHECK_FALSE(checker.accepted("Ιντραλέξ"));
  user->add("Ιντραλέξ");
  CHECK(checker.check("Ιντραλέξ").source == Source::User);
  CHECK(checker.check("ΙΝΤΡΑΛΕΞ").accepted);
  CHECK(displays(checker.suggest("ιντράλεξ")).front() == "ιντραλέξ");
  CHECK(displays(checker.suggest("ιντραλέ")).front() == "ιντραλέξ");
}

TEST_CASE("stress repair over the seed lexicon") {
  const Checker checker(seed_dictionary());
  for (const auto& f : seed_forms()) {
    const std::size_t syllables = syllable_count(f.unstressed);
    if (syllables < 2) continue;
    for (std::size_t p = 1; p <= syllables; ++p) {
      if (f.stress && static_cast<std::size_t>(*f.stress) == p) continue;
      const std::string wrong = apply_stress(f.unstressed, static_cast<int>(p));
      const auto s = checker.stress_candidates(normalize(wrong));
      CHECK_MESSAGE(std::find(s.begin(), s.end(), f.display) != s.end(), wrong);
    }
  }
}

std::set<std::string> brute_force_orthographic(const Checker& checker, LettersView letters) {
  const auto graphemes = segment_graphemes(letters);
  std::set<std::string> out;
  std::vector<std::size_t> choice(graphemes.size(), 0);
  for (;;) {
    Letters candidate;
    for (std::size_t i = 0; i < graphemes.size(); ++i) candidate += graphemes[i].alternatives[choice[i]];
    for (const auto& d : checker.lookup(candidate)) out.insert(d);
    std::size_t i = 0;
    for (; i < graphemes.size(); ++i) {
      if (++choice[i] < graphemes[i].alternatives.size()) break;
      choice[i] = 0;
    }
    if (i == graphemes.size()) return out;
  }
}

TEST_CASE("orthographic search equals enumerate-and-filter") {
  const auto user = std::make_shared<dict::UserDictionary>();
  user->add("φτηνοί");
  const Checker checker(seed_dictionary(), user);
  std::set<Letters> words{U"φθηνοι", U"ευκολη", U"πσαρι"};
  for (const auto& f : seed_forms()) words.insert(f.unstressed);
  for (const auto& w : words) {
    const auto g = segment_graphemes(w);
    if (std::count_if(g.begin(), g.end(), [](const Grapheme& x) { return x.substitutable(); }) > 6) continue;
    const auto guided = checker.orthographic_candidates(w);
    CHECK_MESSAGE(std::set<std::string>(guided.begin(), guided.end()) == brute_force_orthographic(checker, w),
                  render_letters(w));
  }
}

TEST_CASE("reversal completeness over the seed lexicon") {
  const Checker checker(seed_dictionary());
  const LettersView alpha = alphabet();
  std::size_t cases = 0;
  std::set<std::pair<Letters, std::string>> seen;
  const auto expect = [&](const Letters& corrupted, const morph::SurfaceForm& f,
                          std::vector<Candidate> (Checker::*generator)(LettersView, ProbeStats*) const) {
    if (corrupted.empty() || !checker.lookup(corrupted).empty()) return;
    if (!seen.insert({corrupted, f.display}).second) return;
    ++cases;
    const auto got = displays((checker.*generator)(corrupted, nullptr));
    const std::string label = render_letters(corrupted) + " -> " + f.display;
    CHECK_MESSAGE(got.count(f.display) == 1, label);
  };
  for (const auto& f : seed_forms()) {
    const Letters& w = f.unstressed;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Letters deleted = w;
      deleted.erase(i, 1);
      expect(deleted, f, &Checker::reverse_deletion);
      for (char32_t c : alpha) {
        Letters inserted = w;
        inserted.insert(inserted.begin() + static_cast<std::ptrdiff_t>(i), c);
        expect(inserted, f, &Checker::reverse_insertion);
        if (c != w[i]) {
          Letters substituted = w;
          substituted[i] = c;
          expect(substituted, f, &Checker::reverse_substitution);
        }
      }
      if (i + 1 < w.size() && w[i] != w[i + 1]) {
        Letters swapped = w;
        std::swap(swapped[i], swapped[i + 1]);
        expect(swapped, f, &Checker::reverse_transposition);
      }
    }
    for (char32_t c : alpha) expect(w + c, f, &Checker::reverse_insertion);
  }
  CHECK(cases > 100000);
}
