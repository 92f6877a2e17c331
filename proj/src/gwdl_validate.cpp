#include <map>
#include <set>

#include "glspell/gwdl.hpp"
#include "glspell/morphgen.hpp"

namespace glspell::gwdl {

namespace {

class Validator {
 public:
  Validator(const LexiconFile& file, std::vector<Diagnostic>& out) : file_(file), out_(out) {
    for (const auto& r : file.stress_rules) stress_[r.name] = &r;
    for (const auto& r : file.inflection_rules) inflections_[r.name] = &r;
  }

  void run() {
    for (const auto& r : file_.stress_rules) check_positions(r.positions, r.file, r.pos);
    for (const auto& r : file_.form_rules) {
      for (const auto& alt : r.alternatives) check_item(alt, r.file);
    }
    for (const auto& w : file_.words) {
      if (w.stress_only) {
        if (!w.stress_only->ref) check_positions(w.stress_only->positions, w.file, w.stress_only->pos);
      } else {
        for (const auto& item : w.forms) check_item(item, w.file);
      }
      check_hyphenation(w);
    }
  }

 private:
  void report(const std::string& file, SourcePos pos, Severity sev, std::string message) {
    out_.push_back({file, pos, sev, std::move(message)});
  }

  void check_positions(const std::vector<int>& positions, const std::string& file, SourcePos pos) {
    for (int p : positions) {
      if (p < 0 || p > 3) {
        report(file, pos, Severity::Error,
               "stress position out of range: " + std::to_string(p) + " (allowed 0..3)");
        return;
      }
    }
  }

  void check_item(const FormItem& item, const std::string& file) {
    const auto* form = std::get_if<Form>(&item);
    if (!form) return;
    if (!form->stress.ref) check_positions(form->stress.positions, file, form->stress.pos);

    std::optional<std::size_t> tuple_len;
    if (form->stress.ref) {
      if (auto it = stress_.find(*form->stress.ref); it != stress_.end()) {
        tuple_len = it->second->positions.size();
      }
    } else {
      tuple_len = form->stress.positions.size();
    }
    std::optional<std::size_t> suffix_count;
    if (form->inflection.ref) {
      if (auto it = inflections_.find(*form->inflection.ref); it != inflections_.end()) {
        suffix_count = it->second->suffixes.size();
      }
    } else {
      suffix_count = form->inflection.suffixes.size();
    }
    if (tuple_len && suffix_count && *tuple_len > *suffix_count) {
      report(file, form->pos, Severity::Error,
             "stress tuple has " + std::to_string(*tuple_len) + " positions but the inflection has " +
                 std::to_string(*suffix_count) + " suffixes");
    }
  }

  void check_hyphenation(const LexiconEntry& w) {
    if (w.syllable_breaks.empty()) return;
    const auto nuclei = w.stem.empty() || syllable_count(w.stem) == 0
                            ? std::vector<Nucleus>{}
                            : syllabify(w.stem).nuclei;
    std::vector<std::size_t> bounds{0};
    bounds.insert(bounds.end(), w.syllable_breaks.begin(), w.syllable_breaks.end());
    bounds.push_back(w.stem.size());
    for (const auto& n : nuclei) {
      for (std::size_t b : w.syllable_breaks) {
        if (b > n.begin && b < n.end) {
          report(w.file, w.pos, Severity::Warning,
                 "hyphen splits a vowel digraph in stem \"" + render_letters(w.stem) + "\"");
          return;
        }
      }
    }
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
      std::size_t count = 0;
      for (const auto& n : nuclei) {
        if (n.begin >= bounds[s] && n.end <= bounds[s + 1]) ++count;
      }
      if (count > 1) {
        report(w.file, w.pos, Severity::Warning,
               "stem hyphenation disagrees with syllabification of \"" + render_letters(w.stem) +
                   "\"");
        return;
      }
    }
  }

  const LexiconFile& file_;
  std::vector<Diagnostic>& out_;
  std::map<std::string, const StressRule*> stress_;
  std::map<std::string, const InflectionRule*> inflections_;
};

void check_expansion(const ResolvedRuleSet& rules, std::vector<Diagnostic>& out) {
  for (const auto& entry : rules.entries) {
    for (std::size_t f = 0; f < entry.forms.size(); ++f) {
      const ResolvedForm& form = entry.forms[f];
      if (form.stress.empty()) continue;
      for (std::size_t i = 0; i < form.suffixes.size(); ++i) {
        Letters word = entry.stem + form.infix + form.suffixes[i];
        if (word.empty()) {
          out.push_back({entry.file, entry.pos, Severity::Error,
                         "empty word: stem, infix and suffix are all empty"});
          continue;
        }
        const std::size_t syllables = syllable_count(word);
        const int p = morph::stress_for(form.stress, i + 1);
        if (syllables == 0) {
          out.push_back({entry.file, entry.pos, Severity::Warning,
                         "form \"" + render_letters(word) + "\" has no vowel"});
        } else if (static_cast<std::size_t>(p) > syllables) {
          out.push_back({entry.file, entry.pos, Severity::Warning,
                         "stress position " + std::to_string(p) + " clamped to " +
                             std::to_string(syllables) + " in \"" + render_letters(word) + "\""});
        }
      }
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate(const LexiconFile& file,
                                 const std::vector<Diagnostic>& parse_diagnostics) {
  std::vector<Diagnostic> out = parse_diagnostics;
  const ResolvedRuleSet rules = resolve(file);
  out.insert(out.end(), rules.diagnostics.begin(), rules.diagnostics.end());
  Validator(file, out).run();
  check_expansion(rules, out);
  return out;
}

}  // namespace glspell::gwdl
