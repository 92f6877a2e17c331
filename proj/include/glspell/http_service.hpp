#pragma once

// JSON-over-HTTP frontend to the checker and the correction session.

#include <memory>
#include <optional>
#include <string>

#include "glspell/correct.hpp"
#include "glspell/session.hpp"

namespace glspell::http {

struct ServiceOptions {
  // Where Store and POST /v1/userdict persist the user dictionary.
  std::optional<std::string> user_path;
  // Directory served at / (the web client bundle).
  std::optional<std::string> static_dir;
};

class HttpService {
 public:
  HttpService(std::shared_ptr<const correct::Checker> checker, ServiceOptions options = {});
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  // Returns the bound port, or -1. Port 0 picks a free port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

  session::SessionManager& sessions() noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Splits "host:port" (or ":port", or "port").
std::pair<std::string, int> parse_listen_address(const std::string& address);

}  // namespace glspell::http
