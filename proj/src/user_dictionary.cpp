#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include "glspell/dictstore.hpp"

namespace glspell::dict {

bool UserDictionary::add_locked(const NormalizedWord& word) {
  NormalizedWord lower = word;
  std::fill(lower.upper.begin(), lower.upper.end(), false);
  const Key key{word.letters, word.stress};
  if (!displays_.emplace(key, render(lower)).second) return false;
  by_letters_[word.letters].push_back(word.stress);
  trigrams_.add_word(word.letters);
  return true;
}

bool UserDictionary::add(std::string_view word) {
  const NormalizedWord normalized = normalize(word);
  std::unique_lock lock(mutex_);
  return add_locked(normalized);
}

bool UserDictionary::contains(const NormalizedWord& word) const {
  std::shared_lock lock(mutex_);
  return displays_.contains(Key{word.letters, word.stress});
}

bool UserDictionary::contains(std::string_view word) const {
  try {
    return contains(normalize(word));
  } catch (const GreekTextError&) {
    return false;
  }
}

std::vector<std::optional<int>> UserDictionary::stresses(LettersView letters) const {
  std::shared_lock lock(mutex_);
  const auto it = by_letters_.find(letters);
  if (it == by_letters_.end()) return {};
  auto out = it->second;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> UserDictionary::displays(LettersView letters) const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  const auto it = by_letters_.find(letters);
  if (it == by_letters_.end()) return out;
  for (const auto& stress : it->second) out.push_back(displays_.at(Key{it->first, stress}));
  std::sort(out.begin(), out.end());
  return out;
}

bool UserDictionary::has_prefix(LettersView prefix) const {
  std::shared_lock lock(mutex_);
  const auto it = by_letters_.lower_bound(prefix);
  return it != by_letters_.end() && LettersView(it->first).substr(0, prefix.size()) == prefix;
}

std::size_t UserDictionary::size() const {
  std::shared_lock lock(mutex_);
  return displays_.size();
}

TrigramTable UserDictionary::trigrams() const {
  std::shared_lock lock(mutex_);
  return trigrams_;
}

std::string UserDictionary::to_text() const {
  std::vector<std::string> lines;
  {
    std::shared_lock lock(mutex_);
    lines.reserve(displays_.size());
    for (const auto& [key, display] : displays_) lines.push_back(display);
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& line : lines) out.append(line).push_back('\n');
  return out;
}

void UserDictionary::from_text(std::string_view text) {
  std::vector<NormalizedWord> words;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    words.push_back(normalize(line));
  }
  std::unique_lock lock(mutex_);
  for (const auto& w : words) add_locked(w);
}

void UserDictionary::save(const std::string& path) const {
  const std::string text = to_text();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DictError(DictError::Kind::Io, "cannot write " + tmp);
    out << text;
    if (!out.flush()) throw DictError(DictError::Kind::Io, "cannot write " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw DictError(DictError::Kind::Io, "cannot replace " + path);
  }
}

void UserDictionary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DictError(DictError::Kind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  from_text(ss.str());
}

}  // namespace glspell::dict
