#include "glspell/session.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>

#include <json.hpp>

#include "glspell/utf8.hpp"

namespace glspell::session {

using correct::Checker;
using Kind = SessionError::Kind;

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t begin = pos;
    std::size_t probe = pos;
    const char32_t first = utf8::next(text, probe);
    const bool greek = is_greek_letter(first);
    pos = probe;
    while (pos < text.size()) {
      probe = pos;
      const char32_t cp = utf8::next(text, probe);
      const bool continues = greek ? (is_greek_letter(cp) || is_combining_mark(cp)) : !is_greek_letter(cp);
      if (!continues) break;
      pos = probe;
    }
    out.push_back({std::string(text.substr(begin, pos - begin)), begin, pos,
                   greek ? TokenKind::GreekWord : TokenKind::Other});
  }
  return out;
}

namespace {

std::vector<std::size_t> line_starts_of(std::string_view text) {
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') starts.push_back(i + 1);
  }
  return starts;
}

void locate(std::string_view text, const std::vector<std::size_t>& starts, Flag& flag) {
  const auto it = std::upper_bound(starts.begin(), starts.end(), flag.begin);
  const std::size_t line_index = static_cast<std::size_t>(it - starts.begin()) - 1;
  flag.line = line_index + 1;
  const std::string_view prefix = text.substr(starts[line_index], flag.begin - starts[line_index]);
  flag.column = utf8::decode(prefix).size() + 1;
}

std::optional<Flag> flag_for(const Checker& checker, const std::string& word) {
  NormalizedWord normalized;
  try {
    normalized = normalize(word);
  } catch (const GreekTextError&) {
    return std::nullopt;
  }
  if (checker.check(normalized).accepted) return std::nullopt;
  Flag flag;
  flag.word = word;
  flag.suggestions = checker.suggest(normalized);
  return flag;
}

}  // namespace

std::vector<Flag> check_document(const Checker& checker, std::string_view text) {
  const auto starts = line_starts_of(text);
  std::vector<Flag> out;
  for (const Token& token : tokenize(text)) {
    if (token.kind != TokenKind::GreekWord) continue;
    if (auto flag = flag_for(checker, token.text)) {
      flag->begin = token.begin;
      flag->end = token.end;
      locate(text, starts, *flag);
      out.push_back(std::move(*flag));
    }
  }
  return out;
}

std::string_view action_name(ActionKind kind) noexcept {
  switch (kind) {
    case ActionKind::Skip: return "skip";
    case ActionKind::Edit: return "edit";
    case ActionKind::Store: return "store";
    case ActionKind::Correct: return "correct";
    case ActionKind::Exit: return "exit";
  }
  return "unknown";
}

ActionKind parse_action(std::string_view name) {
  for (ActionKind k : {ActionKind::Skip, ActionKind::Edit, ActionKind::Store, ActionKind::Correct,
                       ActionKind::Exit}) {
    if (action_name(k) == name) return k;
  }
  throw SessionError(Kind::BadAction, "unknown action '" + std::string(name) + "'");
}

std::string_view status_name(Status s) noexcept {
  switch (s) {
    case Status::Active: return "active";
    case Status::Exited: return "exited";
    case Status::Completed: return "completed";
  }
  return "unknown";
}

CorrectionSession::CorrectionSession(std::string id, std::string text,
                                     std::shared_ptr<const Checker> checker)
    : id_(std::move(id)),
      text_(std::move(text)),
      checker_(std::move(checker)),
      tokens_(tokenize(text_)),
      line_starts_(line_starts_of(text_)) {}

void CorrectionSession::require_active() const {
  if (status_ != Status::Active) {
    throw SessionError(Kind::SessionClosed, "session " + id_ + " is " + std::string(status_name(status_)));
  }
}

std::optional<Flag> CorrectionSession::examine(std::size_t token_index, const std::string& word) const {
  auto flag = flag_for(*checker_, word);
  if (!flag) return std::nullopt;
  flag->begin = tokens_[token_index].begin;
  flag->end = tokens_[token_index].end;
  locate(text_, line_starts_, *flag);
  return flag;
}

std::optional<Flag> CorrectionSession::next_flag() {
  if (status_ == Status::Completed) return std::nullopt;
  require_active();
  if (current_) return current_;
  for (; cursor_ < tokens_.size(); ++cursor_) {
    if (tokens_[cursor_].kind != TokenKind::GreekWord) continue;
    if (auto flag = examine(cursor_, tokens_[cursor_].text)) {
      current_token_ = cursor_;
      current_ = std::move(flag);
      return current_;
    }
  }
  status_ = Status::Completed;
  return std::nullopt;
}

void CorrectionSession::advance() {
  cursor_ = *current_token_ + 1;
  current_token_.reset();
  current_.reset();
}

void CorrectionSession::apply(const Action& action) {
  require_active();
  if (action.kind == ActionKind::Exit) {
    status_ = Status::Exited;
  } else {
    if (!current_) throw SessionError(Kind::NoCurrentFlag, "no pending flag in session " + id_);
    Decision decision{current_->begin, current_->end, action.kind, std::nullopt};
    switch (action.kind) {
      case ActionKind::Skip:
        advance();
        break;
      case ActionKind::Store: {
        const auto& user = checker_->user();
        if (!user) throw SessionError(Kind::BadAction, "no user dictionary attached");
        user->add(current_->word);
        advance();
        break;
      }
      case ActionKind::Correct: {
        if (action.index < 1 || action.index > current_->suggestions.size()) {
          throw SessionError(Kind::BadSuggestionIndex,
                             "suggestion index " + std::to_string(action.index) + " out of range 1.." +
                                 std::to_string(current_->suggestions.size()));
        }
        decision.replacement = current_->suggestions[action.index - 1].display;
        replacements_[*current_token_] = *decision.replacement;
        advance();
        break;
      }
      case ActionKind::Edit: {
        decision.replacement = action.replacement;
        replacements_[*current_token_] = action.replacement;
        const std::size_t index = *current_token_;
        auto again = examine(index, action.replacement);
        if (again && tokenize(action.replacement).size() == 1) {
          current_ = std::move(again);
        } else {
          advance();
        }
        break;
      }
      case ActionKind::Exit:
        break;
    }
    decisions_.push_back(std::move(decision));
  }
  if (journal_) {
    nlohmann::json line{{"action", action_name(action.kind)}};
    if (action.kind == ActionKind::Edit) line["replacement"] = action.replacement;
    if (action.kind == ActionKind::Correct) line["index"] = action.index;
    *journal_ << line.dump() << '\n';
    journal_->flush();
  }
}

std::size_t CorrectionSession::replay(std::istream& journal) {
  std::size_t count = 0;
  std::string line;
  while (std::getline(journal, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    Action action;
    action.kind = parse_action(j.at("action").get<std::string>());
    action.replacement = j.value("replacement", std::string());
    action.index = j.value("index", std::size_t{0});
    if (action.kind != ActionKind::Exit) next_flag();
    apply(action);
    ++count;
  }
  return count;
}

std::string CorrectionSession::export_text() const {
  if (status_ == Status::Active) {
    throw SessionError(Kind::SessionActive, "session " + id_ + " is still active");
  }
  std::string out;
  out.reserve(text_.size());
  std::size_t pos = 0;
  for (const auto& [index, replacement] : replacements_) {
    out.append(text_, pos, tokens_[index].begin - pos);
    out += replacement;
    pos = tokens_[index].end;
  }
  out.append(text_, pos, std::string::npos);
  return out;
}

SessionManager::SessionManager(std::shared_ptr<const Checker> checker) : checker_(std::move(checker)) {}

std::shared_ptr<CorrectionSession> SessionManager::create(std::string text) {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex_);
  std::string id;
  do {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    id = buf;
  } while (sessions_.count(id));
  auto session = std::make_shared<CorrectionSession>(id, std::move(text), checker_);
  sessions_.emplace(id, session);
  return session;
}

std::shared_ptr<CorrectionSession> SessionManager::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionError(Kind::NotFound, "no session '" + id + "'");
  return it->second;
}

bool SessionManager::erase(const std::string& id) {
  std::lock_guard lock(mutex_);
  return sessions_.erase(id) > 0;
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace glspell::session
