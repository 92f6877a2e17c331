#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "glspell/http_service.hpp"
#include "httplib.h"
#include "json.hpp"
#include "lexicon.hpp"

using namespace glspell;
using json = nlohmann::json;

namespace {

class Server {
 public:
  explicit Server(std::shared_ptr<dict::UserDictionary> user, http::ServiceOptions options = {})
      : service_(std::make_shared<correct::Checker>(dictionary(), std::move(user)), std::move(options)) {
    port_ = service_.bind("127.0.0.1", 0);
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { service_.listen_after_bind(); });
    service_.wait_until_ready();
  }
  ~Server() {
    service_.stop();
    thread_.join();
  }

  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }
  http::HttpService& service() { return service_; }

 private:
  static std::shared_ptr<const dict::CompiledDictionary> dictionary() {
    static const auto d = dict::build(testing::load_rules(testing::seed_sources()));
    return d;
  }

  http::HttpService service_;
  int port_ = -1;
  std::thread thread_;
};

struct Reply {
  int status = 0;
  json body;
};

Reply post(httplib::Client& c, const std::string& path, const std::string& body) {
  const auto r = c.Post(path, body, "application/json");
  REQUIRE(r);
  return {r->status, json::parse(r->body)};
}

Reply post(httplib::Client& c, const std::string& path, const json& body) { return post(c, path, body.dump()); }

Reply get(httplib::Client& c, const std::string& path) {
  const auto r = c.Get(path);
  REQUIRE(r);
  return {r->status, json::parse(r->body)};
}

std::string new_session(httplib::Client& c, const std::string& text) {
  const auto r = post(c, "/v1/sessions", json{{"text", text}});
  REQUIRE(r.status == 201);
  return r.body.at("id").get<std::string>();
}

}  // namespace

TEST_CASE("health and check") {
  Server server(std::make_shared<dict::UserDictionary>());
  auto c = server.client();

  const auto health = get(c, "/v1/health");
  CHECK(health.status == 200);
  CHECK(health.body.at("status") == "ok");
  CHECK(health.body.at("forms").get<std::size_t>() > 1000);

  const auto check = post(c, "/v1/check", json{{"text", "Η πρόοδος.\nΤο κέφαλι."}});
  CHECK(check.status == 200);
  REQUIRE(check.body.at("flags").size() == 1);
  const auto& flag = check.body["flags"][0];
  CHECK(flag.at("word") == "κέφαλι");
  CHECK(flag.at("line") == 2);
  CHECK(flag.at("column") == 4);
  CHECK(flag.at("span").at("start") == 24);
  CHECK(flag.at("span").at("end") == 36);
  CHECK(flag.at("suggestions").at(0) == json{{"display", "κεφάλι"}, {"class", "stress"}, {"rank", 1}});

  CHECK(post(c, "/v1/check", json{{"text", ""}}).body.at("flags").empty());
}

TEST_CASE("session round trip") {
  Server server(std::make_shared<dict::UserDictionary>());
  auto c = server.client();
  const std::string id = new_session(c, "Το κέφαλι και προώδου.");

  auto next = get(c, "/v1/sessions/" + id + "/next");
  CHECK(next.status == 200);
  CHECK(next.body.at("done") == false);
  CHECK(next.body.at("status") == "active");
  CHECK(next.body.at("flag").at("word") == "κέφαλι");

  auto act = post(c, "/v1/sessions/" + id + "/action", json{{"action", "correct"}, {"index", 1}});
  CHECK(act.status == 200);
  CHECK(act.body.at("flag").is_null());

  CHECK(get(c, "/v1/sessions/" + id + "/export").status == 409);

  act = post(c, "/v1/sessions/" + id + "/action", json{{"action", "edit"}, {"replacement", "προόδου"}});
  CHECK(act.status == 200);

  next = get(c, "/v1/sessions/" + id + "/next");
  CHECK(next.body.at("done") == true);
  CHECK(next.body.at("status") == "completed");
  CHECK_FALSE(next.body.contains("flag"));

  const auto exported = get(c, "/v1/sessions/" + id + "/export");
  CHECK(exported.status == 200);
  CHECK(exported.body.at("text") == "Το κεφάλι και προόδου.");
}

TEST_CASE("edit that is still misspelled stays current") {
  Server server(std::make_shared<dict::UserDictionary>());
  auto c = server.client();
  const std::string id = new_session(c, "κέφαλι");
  const auto act = post(c, "/v1/sessions/" + id + "/action", json{{"action", "edit"}, {"replacement", "κεφαλί"}});
  CHECK(act.status == 200);
  CHECK(act.body.at("status") == "active");
  CHECK(act.body.at("flag").at("word") == "κεφαλί");
}

TEST_CASE("store persists the user dictionary") {
  const auto path = std::filesystem::temp_directory_path() / "glspell_http_user.txt";
  std::filesystem::remove(path);
  const auto user = std::make_shared<dict::UserDictionary>();
  Server server(user, {path.string(), std::nullopt});
  auto c = server.client();

  const std::string id = new_session(c, "Ιντραλέξ και ιντραλέξ.");
  const auto act = post(c, "/v1/sessions/" + id + "/action", json{{"action", "store"}});
  CHECK(act.status == 200);
  CHECK(act.body.at("flag").is_null());
  CHECK(get(c, "/v1/sessions/" + id + "/next").body.at("done") == true);
  CHECK(user->contains("ιντραλέξ"));
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "ιντραλέξ");

  auto added = post(c, "/v1/userdict", json{{"word", "Ζιζάνιο"}});
  CHECK(added.status == 200);
  CHECK(added.body.at("added") == true);
  CHECK(added.body.at("user_words") == 2);
  added = post(c, "/v1/userdict", json{{"word", "ζιζάνιο"}});
  CHECK(added.body.at("added") == false);
  CHECK(post(c, "/v1/check", json{{"text", "ζιζάνιο"}}).body.at("flags").empty());
  std::filesystem::remove(path);
}

TEST_CASE("exit and export") {
  Server server(std::make_shared<dict::UserDictionary>());
  auto c = server.client();
  const std::string id = new_session(c, "κέφαλι κέφαλι");
  CHECK(post(c, "/v1/sessions/" + id + "/action", json{{"action", "correct"}, {"index", 1}}).status == 200);
  const auto exited = post(c, "/v1/sessions/" + id + "/action", json{{"action", "exit"}});
  CHECK(exited.status == 200);
  CHECK(exited.body.at("status") == "exited");
  CHECK(get(c, "/v1/sessions/" + id + "/export").body.at("text") == "κεφάλι κέφαλι");

  const auto closed = get(c, "/v1/sessions/" + id + "/next");
  CHECK(closed.status == 409);
  CHECK(closed.body.at("error") == "SessionClosed");
  CHECK(post(c, "/v1/sessions/" + id + "/action", json{{"action", "skip"}}).status == 409);
}

TEST_CASE("error responses") {
  Server server(nullptr);
  auto c = server.client();
  const auto expect = [](const Reply& r, int status, const std::string& error) {
    CHECK(r.status == status);
    CHECK(r.body.at("error") == error);
    CHECK(r.body.contains("detail"));
  };

  expect(post(c, "/v1/check", std::string("not json")), 400, "BadRequest");
  expect(post(c, "/v1/check", json::array()), 400, "BadRequest");
  expect(post(c, "/v1/check", json{{"text", 5}}), 400, "BadRequest");
  expect(post(c, "/v1/sessions", json::object()), 400, "BadRequest");
  expect(get(c, "/v1/sessions/0123456789abcdef/next"), 404, "NotFound");
  expect(get(c, "/v1/sessions/no-such/export"), 404, "NotFound");
  expect(post(c, "/v1/sessions/no-such/action", json{{"action", "skip"}}), 404, "NotFound");
  expect(get(c, "/v1/missing"), 404, "NotFound");
  expect(post(c, "/v1/userdict", json{{"word", "λέξη"}}), 409, "NoUserDictionary");

  const std::string id = new_session(c, "κέφαλι");
  const std::string action = "/v1/sessions/" + id + "/action";
  expect(post(c, action, json{{"action", "jump"}}), 422, "BadAction");
  expect(post(c, action, json{{"action", "correct"}, {"index", 7}}), 422, "BadSuggestionIndex");
  expect(post(c, action, json{{"action", "correct"}}), 400, "BadRequest");
  expect(post(c, action, json{{"action", "edit"}}), 400, "BadRequest");
  expect(post(c, action, json{{"action", "store"}}), 422, "BadAction");
  expect(get(c, "/v1/sessions/" + id + "/export"), 409, "SessionActive");

  const std::string done = new_session(c, "πρόοδος");
  expect(post(c, "/v1/sessions/" + done + "/action", json{{"action", "skip"}}), 409, "SessionClosed");
}

TEST_CASE("userdict rejects non-Greek words") {
  Server server(std::make_shared<dict::UserDictionary>());
  auto c = server.client();
  const auto r = post(c, "/v1/userdict", json{{"word", "hello"}});
  CHECK(r.status == 422);
  CHECK(r.body.at("error") == "NonGreekToken");
}

TEST_CASE("listen address parsing") {
  CHECK(http::parse_listen_address("127.0.0.1:8080") == std::pair<std::string, int>{"127.0.0.1", 8080});
  CHECK(http::parse_listen_address(":9000").second == 9000);
  CHECK(http::parse_listen_address("9001").second == 9001);
}
