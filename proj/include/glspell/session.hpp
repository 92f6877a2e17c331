#pragma once

// Document tokenizer and the interactive correction session shared by the
// terminal driver and the HTTP service.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glspell/correct.hpp"

namespace glspell::session {

enum class TokenKind { GreekWord, Other };

struct Token {
  std::string text;
  std::size_t begin = 0;  // byte offsets into the document
  std::size_t end = 0;
  TokenKind kind = TokenKind::Other;

  bool operator==(const Token&) const = default;
};

// Splits UTF-8 text into maximal runs of Greek letters (with combining
// marks) and runs of everything else. Concatenating token texts gives back
// the input.
std::vector<Token> tokenize(std::string_view text);

struct Flag {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in code points
  std::string word;
  std::vector<correct::Suggestion> suggestions;
};

// Every flagged Greek word of a document, with suggestions.
std::vector<Flag> check_document(const correct::Checker& checker, std::string_view text);

class SessionError : public std::runtime_error {
 public:
  enum class Kind { SessionClosed, SessionActive, NoCurrentFlag, BadSuggestionIndex, NotFound, BadAction };

  SessionError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

enum class ActionKind { Skip, Edit, Store, Correct, Exit };

std::string_view action_name(ActionKind kind) noexcept;
// Throws SessionError(BadAction) for unknown names.
ActionKind parse_action(std::string_view name);

struct Action {
  ActionKind kind = ActionKind::Skip;
  std::string replacement;  // Edit
  std::size_t index = 0;    // Correct, 1-based

  bool operator==(const Action&) const = default;
};

struct Decision {
  std::size_t begin = 0;
  std::size_t end = 0;
  ActionKind action = ActionKind::Skip;
  std::optional<std::string> replacement;
};

enum class Status { Active, Exited, Completed };
std::string_view status_name(Status s) noexcept;

class CorrectionSession {
 public:
  CorrectionSession(std::string id, std::string text, std::shared_ptr<const correct::Checker> checker);

  // The pending flag, advancing to the next flagged word if none is pending.
  // Returns nullopt and completes the session when no flag remains.
  std::optional<Flag> next_flag();
  // The pending flag without advancing.
  const std::optional<Flag>& current() const noexcept { return current_; }

  void apply(const Action& action);

  // The document with all replacements spliced in. Requires the session to
  // be exited or completed.
  std::string export_text() const;

  // Appends every applied action as a JSON line.
  void set_journal(std::ostream* journal) noexcept { journal_ = journal; }
  // Re-applies a journal written by set_journal; returns the number of actions.
  std::size_t replay(std::istream& journal);

  const std::string& id() const noexcept { return id_; }
  const std::string& text() const noexcept { return text_; }
  Status status() const noexcept { return status_; }
  const std::vector<Decision>& decisions() const noexcept { return decisions_; }
  std::mutex& mutex() noexcept { return mutex_; }

 private:
  std::optional<Flag> examine(std::size_t token_index, const std::string& word) const;
  void advance();
  void require_active() const;

  std::string id_;
  std::string text_;
  std::shared_ptr<const correct::Checker> checker_;
  std::vector<Token> tokens_;
  std::vector<std::size_t> line_starts_;
  std::size_t cursor_ = 0;  // next token to examine
  std::optional<std::size_t> current_token_;
  std::optional<Flag> current_;
  std::map<std::size_t, std::string> replacements_;  // token index -> text
  std::vector<Decision> decisions_;
  Status status_ = Status::Active;
  std::ostream* journal_ = nullptr;
  std::mutex mutex_;
};

class SessionManager {
 public:
  explicit SessionManager(std::shared_ptr<const correct::Checker> checker);

  std::shared_ptr<CorrectionSession> create(std::string text);
  // Throws SessionError(NotFound).
  std::shared_ptr<CorrectionSession> get(const std::string& id) const;
  bool erase(const std::string& id);
  std::size_t size() const;

 private:
  std::shared_ptr<const correct::Checker> checker_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<CorrectionSession>> sessions_;
};

}  // namespace glspell::session
