#include "glspell/correct.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace glspell::correct {

std::string_view class_name(ErrorClass c) noexcept {
  switch (c) {
    case ErrorClass::Stress: return "stress";
    case ErrorClass::Orthographic: return "orthographic";
    case ErrorClass::Deletion: return "deletion";
    case ErrorClass::Insertion: return "insertion";
    case ErrorClass::Substitution: return "substitution";
    case ErrorClass::Transposition: return "transposition";
  }
  return "unknown";
}

bool is_typographic(ErrorClass c) noexcept {
  return c != ErrorClass::Stress && c != ErrorClass::Orthographic;
}

int class_priority(ErrorClass c) noexcept {
  if (c == ErrorClass::Stress) return 0;
  if (c == ErrorClass::Orthographic) return 1;
  return 2;
}

std::string_view source_name(Source s) noexcept {
  switch (s) {
    case Source::Memory: return "memory";
    case Source::User: return "user";
    case Source::Main: return "main";
  }
  return "unknown";
}

namespace {

struct ConfusionSet {
  std::vector<Letters> members;
};

const std::vector<ConfusionSet>& confusion_sets() {
  static const std::vector<ConfusionSet> sets = {
      {{U"ε", U"αι"}},
      {{U"ο", U"ω"}},
      {{U"η", U"ι", U"υ", U"ει", U"οι"}},
      {{U"χθ", U"χτ"}},
      {{U"φθ", U"φτ"}},
      {{U"σθ", U"στ"}},
      {{U"αυ", U"αβ"}},
      {{U"ψ", U"πσ"}},
      {{U"ξ", U"κσ"}},
  };
  return sets;
}

// Two-letter units recognized before single letters.
const std::map<Letters, std::vector<Letters>>& grapheme_table() {
  static const std::map<Letters, std::vector<Letters>> table = [] {
    std::map<Letters, std::vector<Letters>> t;
    for (const auto& set : confusion_sets()) {
      for (const auto& member : set.members) {
        std::vector<Letters> alts{member};
        for (const auto& other : set.members) {
          if (other != member) alts.push_back(other);
        }
        t[member] = std::move(alts);
      }
    }
    for (const Letters& whole : {Letters(U"ου"), Letters(U"ευ"), Letters(U"υι")}) t[whole] = {whole};
    return t;
  }();
  return table;
}

void dedup_candidates(std::vector<Candidate>& out) {
  std::unordered_set<std::string> seen;
  std::vector<Candidate> kept;
  for (auto& c : out) {
    if (seen.insert(c.display).second) kept.push_back(std::move(c));
  }
  out = std::move(kept);
}

}  // namespace

std::vector<Grapheme> segment_graphemes(LettersView letters) {
  const auto& table = grapheme_table();
  std::vector<Grapheme> out;
  std::size_t i = 0;
  while (i < letters.size()) {
    if (i + 1 < letters.size()) {
      const auto it = table.find(Letters(letters.substr(i, 2)));
      if (it != table.end()) {
        out.push_back({it->first, it->second});
        i += 2;
        continue;
      }
    }
    const Letters one(letters.substr(i, 1));
    const auto it = table.find(one);
    out.push_back({one, it != table.end() ? it->second : std::vector<Letters>{one}});
    ++i;
  }
  return out;
}

std::string match_case(std::string_view display, const NormalizedWord& pattern) {
  NormalizedWord word = normalize(display);
  if (pattern.upper.empty() || !pattern.upper[0]) return render(word);
  if (is_all_upper(pattern) && pattern.letters.size() > 1) {
    std::fill(word.upper.begin(), word.upper.end(), true);
  } else if (!word.upper.empty()) {
    word.upper[0] = true;
  }
  return render(word);
}

Checker::Checker(std::shared_ptr<const dict::CompiledDictionary> main,
                 std::shared_ptr<dict::UserDictionary> user, CheckerOptions options)
    : main_(std::move(main)), user_(std::move(user)), options_(options) {}

namespace {

// Capitals conventionally drop the tonos, so an all-caps word without one
// matches any stress.
bool stress_wildcard(const NormalizedWord& word) {
  return is_all_upper(word) && !word.stress && syllable_count(word.letters) > 1;
}

}  // namespace

CheckResult Checker::check(const NormalizedWord& word) const {
  CheckResult result;
  const bool wildcard = stress_wildcard(word);
  if (!wildcard && main_->memory_contains(word.letters, word.stress)) {
    result.accepted = true;
    result.source = Source::Memory;
    return result;
  }
  if (user_ && (wildcard ? !user_->stresses(word.letters).empty() : user_->contains(word))) {
    result.accepted = true;
    result.source = Source::User;
    return result;
  }
  const dict::MatchOutcome outcome = main_->accepts(word);
  if (outcome.kind == dict::Match::Exact || (wildcard && !outcome.expected.empty())) {
    result.accepted = true;
    result.source = Source::Main;
    return result;
  }
  if (outcome.kind == dict::Match::StressOnly) {
    result.stress_only = true;
    result.expected_displays = outcome.expected_displays;
  }
  return result;
}

CheckResult Checker::check(std::string_view token) const { return check(normalize(token)); }

bool Checker::accepted(std::string_view token) const {
  try {
    return check(token).accepted;
  } catch (const GreekTextError&) {
    return false;
  }
}

std::vector<std::string> Checker::lookup(LettersView letters, ProbeStats* stats) const {
  if (stats) ++stats->probes;
  std::vector<std::string> out;
  for (const auto& stress : main_->expected_stresses(letters)) {
    out.push_back(stress ? apply_stress(letters, *stress) : render_letters(letters));
  }
  if (user_) {
    for (auto& d : user_->displays(letters)) out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> Checker::stress_candidates(const NormalizedWord& word) const {
  std::vector<std::string> out;
  for (auto& d : lookup(word.letters)) {
    if (normalize(d).stress != word.stress) out.push_back(std::move(d));
  }
  return out;
}

std::vector<std::string> Checker::orthographic_candidates(LettersView letters,
                                                          ProbeStats* stats) const {
  const std::vector<Grapheme> graphemes = segment_graphemes(letters);
  std::vector<std::string> out;
  Letters prefix;
  const auto viable = [&](LettersView p) {
    return main_->prefix_viable(p) || (user_ && user_->has_prefix(p));
  };
  const auto descend = [&](const auto& self, std::size_t i) -> void {
    if (i == graphemes.size()) {
      for (auto& d : lookup(prefix, stats)) out.push_back(std::move(d));
      return;
    }
    for (const Letters& alt : graphemes[i].alternatives) {
      const std::size_t mark = prefix.size();
      prefix += alt;
      if (viable(prefix)) self(self, i + 1);
      prefix.resize(mark);
    }
  };
  descend(descend, 0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

dict::TrigramTable Checker::trigrams() const {
  dict::TrigramTable table = main_->trigrams();
  if (user_) table.merge(user_->trigrams());
  return table;
}

void Checker::probe(const Letters& candidate, ErrorClass tag, ProbeStats* stats,
                    std::vector<Candidate>& out) const {
  for (auto& d : lookup(candidate, stats)) out.push_back({std::move(d), tag});
}

std::vector<Candidate> Checker::reverse_deletion(LettersView letters, ProbeStats* stats) const {
  std::vector<Candidate> out;
  const dict::TrigramTable table = options_.trigram_pruning ? trigrams() : dict::TrigramTable{};
  const LettersView alpha = alphabet();
  for (std::size_t pos = 0; pos <= letters.size(); ++pos) {
    for (char32_t c : alpha) {
      Letters candidate(letters);
      candidate.insert(candidate.begin() + static_cast<std::ptrdiff_t>(pos), c);
      if (options_.trigram_pruning && !table.window_ok(candidate, pos, pos + 1)) {
        if (stats) ++stats->pruned;
        continue;
      }
      probe(candidate, ErrorClass::Deletion, stats, out);
    }
  }
  dedup_candidates(out);
  return out;
}

std::vector<Candidate> Checker::reverse_insertion(LettersView letters, ProbeStats* stats) const {
  std::vector<Candidate> out;
  for (std::size_t pos = 0; pos < letters.size(); ++pos) {
    Letters candidate(letters);
    candidate.erase(pos, 1);
    if (candidate.empty()) continue;
    probe(candidate, ErrorClass::Insertion, stats, out);
  }
  dedup_candidates(out);
  return out;
}

std::vector<Candidate> Checker::reverse_substitution(LettersView letters, ProbeStats* stats) const {
  std::vector<Candidate> out;
  const dict::TrigramTable table = options_.trigram_pruning ? trigrams() : dict::TrigramTable{};
  for (std::size_t pos = 0; pos < letters.size(); ++pos) {
    for (char32_t c : alphabet()) {
      if (c == letters[pos]) continue;
      Letters candidate(letters);
      candidate[pos] = c;
      if (options_.trigram_pruning && !table.window_ok(candidate, pos, pos + 1)) {
        if (stats) ++stats->pruned;
        continue;
      }
      probe(candidate, ErrorClass::Substitution, stats, out);
    }
  }
  dedup_candidates(out);
  return out;
}

std::vector<Candidate> Checker::reverse_transposition(LettersView letters,
                                                      ProbeStats* stats) const {
  std::vector<Candidate> out;
  for (std::size_t pos = 0; pos + 1 < letters.size(); ++pos) {
    if (letters[pos] == letters[pos + 1]) continue;
    Letters candidate(letters);
    std::swap(candidate[pos], candidate[pos + 1]);
    probe(candidate, ErrorClass::Transposition, stats, out);
  }
  dedup_candidates(out);
  return out;
}

std::vector<Candidate> Checker::reversal_candidates(LettersView letters, ProbeStats* stats) const {
  std::vector<Candidate> out;
  using Generator = std::vector<Candidate> (Checker::*)(LettersView, ProbeStats*) const;
  for (Generator gen : {&Checker::reverse_deletion, &Checker::reverse_insertion,
                        &Checker::reverse_substitution, &Checker::reverse_transposition}) {
    auto part = (this->*gen)(letters, stats);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  dedup_candidates(out);
  return out;
}

std::vector<Suggestion> Checker::suggest(const NormalizedWord& word) const {
  if (check(word).accepted) return {};

  std::vector<Candidate> pool;
  for (auto& d : stress_candidates(word)) pool.push_back({std::move(d), ErrorClass::Stress});
  for (auto& d : orthographic_candidates(word.letters)) {
    pool.push_back({std::move(d), ErrorClass::Orthographic});
  }
  for (auto& c : reversal_candidates(word.letters)) pool.push_back(std::move(c));
  dedup_candidates(pool);

  struct Ranked {
    Candidate candidate;
    bool frequent;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(pool.size());
  for (auto& c : pool) {
    const NormalizedWord n = normalize(c.display);
    ranked.push_back({std::move(c), main_->memory_contains(n.letters, n.stress)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    const int pa = class_priority(a.candidate.error_class);
    const int pb = class_priority(b.candidate.error_class);
    if (pa != pb) return pa < pb;
    if (a.frequent != b.frequent) return a.frequent;
    return a.candidate.display < b.candidate.display;
  });
  if (ranked.size() > options_.max_suggestions) ranked.resize(options_.max_suggestions);

  std::vector<Suggestion> out;
  out.reserve(ranked.size());
  for (auto& r : ranked) {
    out.push_back({match_case(r.candidate.display, word), r.candidate.error_class,
                   static_cast<int>(out.size() + 1)});
  }
  return out;
}

std::vector<Suggestion> Checker::suggest(std::string_view token) const {
  return suggest(normalize(token));
}

}  // namespace glspell::correct
