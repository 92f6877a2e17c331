#include "glspell/http_service.hpp"

#include <mutex>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

namespace glspell::http {

using nlohmann::json;
using session::SessionError;

namespace {

class HttpError : public std::runtime_error {
 public:
  HttpError(int status, std::string error, const std::string& detail)
      : std::runtime_error(detail), status_(status), error_(std::move(error)) {}
  int status() const noexcept { return status_; }
  const std::string& error() const noexcept { return error_; }

 private:
  int status_;
  std::string error_;
};

json suggestion_json(const correct::Suggestion& s) {
  return {{"display", s.display}, {"class", correct::class_name(s.error_class)}, {"rank", s.rank}};
}

json flag_json(const session::Flag& f) {
  json suggestions = json::array();
  for (const auto& s : f.suggestions) suggestions.push_back(suggestion_json(s));
  return {{"span", {{"start", f.begin}, {"end", f.end}}},
          {"line", f.line},
          {"column", f.column},
          {"word", f.word},
          {"suggestions", std::move(suggestions)}};
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw HttpError(400, "BadRequest", "request body must be a JSON object");
  }
  return body;
}

std::string string_field(const json& body, const char* name) {
  const auto it = body.find(name);
  if (it == body.end() || !it->is_string()) {
    throw HttpError(400, "BadRequest", std::string("missing string field '") + name + "'");
  }
  return it->get<std::string>();
}

int session_error_status(SessionError::Kind kind) {
  switch (kind) {
    case SessionError::Kind::NotFound: return 404;
    case SessionError::Kind::SessionClosed:
    case SessionError::Kind::SessionActive:
    case SessionError::Kind::NoCurrentFlag: return 409;
    case SessionError::Kind::BadSuggestionIndex:
    case SessionError::Kind::BadAction: return 422;
  }
  return 400;
}

std::string session_error_name(SessionError::Kind kind) {
  switch (kind) {
    case SessionError::Kind::NotFound: return "NotFound";
    case SessionError::Kind::SessionClosed: return "SessionClosed";
    case SessionError::Kind::SessionActive: return "SessionActive";
    case SessionError::Kind::NoCurrentFlag: return "NoCurrentFlag";
    case SessionError::Kind::BadSuggestionIndex: return "BadSuggestionIndex";
    case SessionError::Kind::BadAction: return "BadAction";
  }
  return "Error";
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

}  // namespace

struct HttpService::Impl {
  std::shared_ptr<const correct::Checker> checker;
  ServiceOptions options;
  session::SessionManager sessions;
  std::mutex userdict_mutex;
  httplib::Server server;

  Impl(std::shared_ptr<const correct::Checker> c, ServiceOptions o)
      : checker(c), options(std::move(o)), sessions(std::move(c)) {}

  void persist_user() {
    if (options.user_path && checker->user()) checker->user()->save(*options.user_path);
  }

  template <typename Handler>
  httplib::Server::Handler wrap(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const HttpError& e) {
        send_json(res, e.status(), {{"error", e.error()}, {"detail", e.what()}});
      } catch (const SessionError& e) {
        send_json(res, session_error_status(e.kind()),
                  {{"error", session_error_name(e.kind())}, {"detail", e.what()}});
      } catch (const GreekTextError& e) {
        send_json(res, 422, {{"error", "NonGreekToken"}, {"detail", e.what()}});
      } catch (const json::exception& e) {
        send_json(res, 400, {{"error", "BadRequest"}, {"detail", e.what()}});
      } catch (const std::exception& e) {
        send_json(res, 500, {{"error", "Internal"}, {"detail", e.what()}});
      }
    };
  }

  void routes() {
    server.Get("/v1/health", wrap([this](const httplib::Request&, httplib::Response& res) {
      const auto& main = checker->main();
      send_json(res, 200,
                {{"status", "ok"},
                 {"entries", main.entry_count()},
                 {"forms", main.surface_form_count()},
                 {"memory_words", main.memory_size()},
                 {"user_words", checker->user() ? checker->user()->size() : 0},
                 {"sessions", sessions.size()}});
    }));

    server.Post("/v1/check", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string text = string_field(parse_body(req), "text");
      json flags = json::array();
      for (const auto& f : session::check_document(*checker, text)) flags.push_back(flag_json(f));
      send_json(res, 200, {{"flags", std::move(flags)}});
    }));

    server.Post("/v1/sessions", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto s = sessions.create(string_field(parse_body(req), "text"));
      send_json(res, 201, {{"id", s->id()}});
    }));

    server.Get(R"(/v1/sessions/([^/]+)/next)",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 const auto s = sessions.get(req.matches[1]);
                 std::lock_guard lock(s->mutex());
                 const auto flag = s->next_flag();
                 json body{{"done", !flag.has_value()}, {"status", session::status_name(s->status())}};
                 if (flag) body["flag"] = flag_json(*flag);
                 send_json(res, 200, body);
               }));

    server.Post(R"(/v1/sessions/([^/]+)/action)",
                wrap([this](const httplib::Request& req, httplib::Response& res) {
                  const json body = parse_body(req);
                  session::Action action;
                  action.kind = session::parse_action(string_field(body, "action"));
                  if (action.kind == session::ActionKind::Edit) {
                    action.replacement = string_field(body, "replacement");
                  }
                  if (action.kind == session::ActionKind::Correct) {
                    const auto it = body.find("index");
                    if (it == body.end() || !it->is_number_integer() || it->get<long long>() < 0) {
                      throw HttpError(400, "BadRequest", "missing integer field 'index'");
                    }
                    action.index = it->get<std::size_t>();
                  }
                  const auto s = sessions.get(req.matches[1]);
                  std::lock_guard lock(s->mutex());
                  if (action.kind != session::ActionKind::Exit &&
                      s->status() == session::Status::Active) {
                    s->next_flag();
                  }
                  if (action.kind == session::ActionKind::Store) {
                    std::lock_guard user_lock(userdict_mutex);
                    s->apply(action);
                    persist_user();
                  } else {
                    s->apply(action);
                  }
                  json out{{"status", session::status_name(s->status())}};
                  out["flag"] = s->current() ? flag_json(*s->current()) : json(nullptr);
                  send_json(res, 200, out);
                }));

    server.Get(R"(/v1/sessions/([^/]+)/export)",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 const auto s = sessions.get(req.matches[1]);
                 std::lock_guard lock(s->mutex());
                 send_json(res, 200, {{"text", s->export_text()}});
               }));

    server.Post("/v1/userdict", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string word = string_field(parse_body(req), "word");
      if (!checker->user()) throw HttpError(409, "NoUserDictionary", "no user dictionary attached");
      std::lock_guard lock(userdict_mutex);
      const bool added = checker->user()->add(word);
      persist_user();
      send_json(res, 200, {{"added", added}, {"user_words", checker->user()->size()}});
    }));

    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
      send_json(res, res.status, {{"error", res.status == 404 ? "NotFound" : "HttpError"}, {"detail", req.path}});
      return httplib::Server::HandlerResponse::Handled;
    });

    if (options.static_dir) server.set_mount_point("/", *options.static_dir);
  }
};

HttpService::HttpService(std::shared_ptr<const correct::Checker> checker, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(checker), std::move(options))) {
  impl_->routes();
}

HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpService::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpService::stop() { impl_->server.stop(); }

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

session::SessionManager& HttpService::sessions() noexcept { return impl_->sessions; }

std::pair<std::string, int> parse_listen_address(const std::string& address) {
  const auto colon = address.rfind(':');
  std::string host = colon == std::string::npos ? "127.0.0.1" : address.substr(0, colon);
  const std::string port_text = colon == std::string::npos ? address : address.substr(colon + 1);
  if (host.empty()) host = "0.0.0.0";
  std::size_t used = 0;
  int port = -1;
  try {
    port = std::stoi(port_text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != port_text.size() || port < 0 || port > 65535) {
    throw std::invalid_argument("bad listen address '" + address + "'");
  }
  return {host, port};
}

}  // namespace glspell::http
