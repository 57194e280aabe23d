#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <thread>

#include "emoharness/llm_client.hpp"
#include "emoharness/providers.hpp"

using namespace emoharness;

namespace {

/// Local chat endpoint on an ephemeral port, stopped on destruction.
class FakeServer {
 public:
  explicit FakeServer(httplib::Server::Handler handler) {
    server_.Post("/v1/chat/completions", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

ProviderConfig config_for(const std::string& endpoint, const std::string& auth_var = "") {
  ProviderConfig c;
  c.kind = ProviderKind::http_chat;
  c.endpoint = endpoint;
  c.model_name = "test-model";
  c.auth_env_var = auth_var;
  c.temperature = 0.0;
  c.max_output_tokens = 128;
  c.request_timeout_s = 5;
  c.max_retries = 3;
  c.base_backoff_s = 0.001;
  return c;
}

RenderedPrompt simple_prompt() {
  return render_prompt(PromptStrategy::zero_shot, {}, "I am thrilled", LabelSchema::english());
}

std::string chat_reply(const std::string& text) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}}}.dump();
}

}  // namespace

TEST_CASE("request body has the chat-completion shape") {
  const auto body = nlohmann::json::parse(HttpChatProvider::request_body(config_for("http://x/y"), "hello"));
  CHECK(body["model"] == "test-model");
  CHECK(body["messages"].size() == 1);
  CHECK(body["messages"][0]["role"] == "user");
  CHECK(body["messages"][0]["content"] == "hello");
  CHECK(body["temperature"] == 0.0);
  CHECK(body["max_tokens"] == 128);
}

TEST_CASE("text is extracted from the common response layouts") {
  CHECK(HttpChatProvider::extract_text(chat_reply("Emotions: Joy")) == "Emotions: Joy");
  CHECK(HttpChatProvider::extract_text(R"({"choices":[{"text":"Emotions: Fear"}]})") == "Emotions: Fear");
  CHECK(HttpChatProvider::extract_text(R"({"candidates":[{"content":{"parts":[{"text":"Emotions: None"}]}}]})") ==
        "Emotions: None");
  CHECK_THROWS_AS(HttpChatProvider::extract_text(R"({"choices":[]})"), RuntimeFailure);
  CHECK_THROWS_AS(HttpChatProvider::extract_text("not json"), RuntimeFailure);
}

TEST_CASE("endpoint must be an http URL") {
  CHECK_THROWS_AS(HttpChatProvider(config_for("ftp://host/x")), ValidationError);
  CHECK_THROWS_AS(HttpChatProvider(config_for("")), ValidationError);
}

TEST_CASE("round trip against a local server with bearer auth") {
  ::setenv("EMOHARNESS_TEST_KEY", "sekrit", 1);
  std::string seen_auth;
  std::string seen_body;
  FakeServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    seen_body = req.body;
    res.set_content(chat_reply("Emotions: Joy"), "application/json");
  });
  const auto config = config_for(server.endpoint(), "EMOHARNESS_TEST_KEY");
  HttpChatProvider provider(config);
  ResponseCache cache;
  const auto r = complete(simple_prompt(), config, provider, cache);
  CHECK(r.raw_text == "Emotions: Joy");
  CHECK(r.attempt_count == 1);
  CHECK(seen_auth == "Bearer sekrit");
  const auto body = nlohmann::json::parse(seen_body);
  CHECK(body["messages"][0]["content"] == simple_prompt().text);
  ::unsetenv("EMOHARNESS_TEST_KEY");
}

TEST_CASE("429 responses are retried until success") {
  std::atomic<int> hits{0};
  FakeServer server([&](const httplib::Request&, httplib::Response& res) {
    if (++hits <= 2) {
      res.status = 429;
      res.set_content("rate limited", "text/plain");
      return;
    }
    res.set_content(chat_reply("Emotions: Joy"), "application/json");
  });
  const auto config = config_for(server.endpoint());
  HttpChatProvider provider(config);
  ResponseCache cache;
  std::vector<double> waits;
  const auto r = complete(simple_prompt(), config, provider, cache,
                          {[&](std::chrono::duration<double> d) { waits.push_back(d.count()); }});
  CHECK(r.attempt_count == 3);
  CHECK(hits.load() == 3);
  CHECK(waits == std::vector<double>{0.001, 0.002});
}

TEST_CASE("400 fails at once with the body in the error") {
  std::atomic<int> hits{0};
  FakeServer server([&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 400;
    res.set_content(R"({"error":"unknown model"})", "application/json");
  });
  const auto config = config_for(server.endpoint());
  HttpChatProvider provider(config);
  ResponseCache cache;
  try {
    complete(simple_prompt(), config, provider, cache);
    FAIL("expected CompletionError");
  } catch (const CompletionError& e) {
    CHECK(e.last_status() == 400);
    CHECK(std::string(e.what()).find("unknown model") != std::string::npos);
  }
  CHECK(hits.load() == 1);
}

TEST_CASE("unset auth variable is reported before any request") {
  ::unsetenv("EMOHARNESS_TEST_MISSING_KEY");
  std::atomic<int> hits{0};
  FakeServer server([&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.set_content(chat_reply("x"), "application/json");
  });
  const auto config = config_for(server.endpoint(), "EMOHARNESS_TEST_MISSING_KEY");
  HttpChatProvider provider(config);
  ResponseCache cache;
  try {
    complete(simple_prompt(), config, provider, cache);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("EMOHARNESS_TEST_MISSING_KEY") != std::string::npos);
  }
  CHECK(hits.load() == 0);
}

TEST_CASE("connection refused is transient") {
  httplib::Server probe;
  const int port = probe.bind_to_any_port("127.0.0.1");
  probe.stop();
  const auto config = config_for("http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions");
  HttpChatProvider provider(config);
  const auto outcome = provider.attempt(simple_prompt());
  CHECK(outcome.kind == AttemptOutcome::Kind::transient);
}

TEST_CASE("mock lexicon answers from trigger words") {
  CHECK(mock_lexicon_response("I was furious and terrified") == "Emotions: Anger, Fear");
  CHECK(mock_lexicon_response("Totally SHOCKED, then happy.") == "Emotions: Joy, Surprise");
  CHECK(mock_lexicon_response("nothing to see") == "Emotions: None");
  CHECK(mock_lexicon_response("unhappy") == "Emotions: None");
  MockLexiconProvider mock;
  const auto out = mock.attempt(simple_prompt());
  CHECK(out.kind == AttemptOutcome::Kind::ok);
  CHECK(out.raw_text == "Emotions: Joy");
  CHECK(mock.invocations() == 1);
}
