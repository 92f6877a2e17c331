#include "glspell/morphgen.hpp"

#include <algorithm>
#include <unordered_set>

namespace glspell::morph {

int stress_for(std::span<const int> tuple, std::size_t suffix_index_1based) {
  if (tuple.empty()) throw MorphError("empty stress tuple");
  if (suffix_index_1based == 0) throw MorphError("suffix index is 1-based");
  const std::size_t i = std::min(suffix_index_1based, tuple.size());
  return tuple[i - 1];
}

std::optional<int> surface_stress(int rule_position, std::size_t syllables) noexcept {
  if (syllables <= 1 || rule_position <= 0) return std::nullopt;
  const int clamped = std::min<int>(rule_position, static_cast<int>(syllables));
  return std::max(clamped, 1);
}

std::vector<SurfaceForm> expand_form(LettersView stem, const gwdl::ResolvedForm& form,
                                     std::size_t entry_id, std::size_t form_index) {
  std::vector<SurfaceForm> out;
  out.reserve(form.suffixes.size());
  for (std::size_t i = 0; i < form.suffixes.size(); ++i) {
    SurfaceForm sf;
    sf.unstressed.reserve(stem.size() + form.infix.size() + form.suffixes[i].size());
    sf.unstressed.append(stem).append(form.infix).append(form.suffixes[i]);
    if (sf.unstressed.empty()) throw MorphError("empty word: stem, infix and suffix are all empty");
    sf.stress = surface_stress(stress_for(form.stress, i + 1), syllable_count(sf.unstressed));
    sf.display = sf.stress ? apply_stress(sf.unstressed, *sf.stress) : render_letters(sf.unstressed);
    sf.entry_id = entry_id;
    sf.form_index = form_index;
    sf.suffix_index = i;
    out.push_back(std::move(sf));
  }
  return out;
}

std::vector<SurfaceForm> expand_entry(const gwdl::ResolvedEntry& entry) {
  std::vector<SurfaceForm> out;
  std::unordered_set<std::string> seen;
  for (std::size_t f = 0; f < entry.forms.size(); ++f) {
    for (auto& sf : expand_form(entry.stem, entry.forms[f], entry.id, f)) {
      if (seen.insert(sf.display).second) out.push_back(std::move(sf));
    }
  }
  return out;
}

std::size_t expand_all(const gwdl::ResolvedRuleSet& rules,
                       const std::function<void(const SurfaceForm&)>& sink) {
  std::size_t total = 0;
  for (const auto& entry : rules.entries) {
    for (const auto& sf : expand_entry(entry)) {
      sink(sf);
      ++total;
    }
  }
  return total;
}

}  // namespace glspell::morph
