#include <httplib.h>

#include <atomic>
#include <deque>
#include <mutex>
#include <thread>

#include "doctest.h"
#include "json.hpp"
#include "mvlabel/errors.hpp"
#include "mvlabel/labeling.hpp"
#include "mvlabel/llm_client.hpp"
#include "mvlabel/text.hpp"
#include "support.hpp"

using namespace mvlabel;
using namespace std::chrono_literals;

namespace {

std::string chat_reply(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}
      .dump();
}

/// Replays scripted outcomes: a response, or a thrown TransportError when status is 0.
class ScriptedTransport : public HttpTransport {
 public:
  explicit ScriptedTransport(std::deque<HttpResponse> script) : script_(std::move(script)) {}

  HttpResponse post(const std::string& url, const Headers& headers, const std::string& body,
                    std::chrono::seconds) override {
    const int now = ++in_flight_;
    max_in_flight_ = std::max(max_in_flight_.load(), now);
    std::this_thread::sleep_for(1ms);
    std::lock_guard lock(m_);
    --in_flight_;
    urls.push_back(url);
    bodies.push_back(body);
    last_headers = headers;
    if (script_.empty()) return {200, chat_reply("ok")};
    HttpResponse next = script_.front();
    script_.pop_front();
    if (next.status == 0) throw TransportError("connection refused");
    return next;
  }

  std::vector<std::string> urls;
  std::vector<std::string> bodies;
  Headers last_headers;
  std::atomic<int> max_in_flight_{0};

 private:
  std::mutex m_;
  std::deque<HttpResponse> script_;
  std::atomic<int> in_flight_{0};
};

LlmClientConfig live_config() {
  LlmClientConfig c;
  c.mode = LlmMode::Live;
  c.endpoint = "https://llm.example/v1/chat/completions";
  c.api_key = "secret";
  return c;
}

}  // namespace

TEST_SUITE("llm_client") {
  TEST_CASE("request body carries model, prompt and temperature") {
    const auto body = nlohmann::json::parse(chat_request_body("gpt-4o", "hello\nworld", 0.0));
    CHECK(body["model"] == "gpt-4o");
    CHECK(body["temperature"] == 0.0);
    CHECK(body["messages"][0]["role"] == "user");
    CHECK(body["messages"][0]["content"] == "hello\nworld");
  }

  TEST_CASE("chat content extraction") {
    CHECK(extract_chat_content(chat_reply("labels")) == "labels");
    CHECK_THROWS_AS(extract_chat_content("{}"), TransportError);
    CHECK_THROWS_AS(extract_chat_content("not json"), TransportError);
  }

  TEST_CASE("transient failures are retried with doubling backoff") {
    auto transport = std::make_shared<ScriptedTransport>(std::deque<HttpResponse>{
        {0, ""}, {503, "busy"}, {200, "{\"bad\": 1}"}, {200, chat_reply("Cluster 1: A - a")}});
    std::vector<std::chrono::milliseconds> sleeps;
    LlmClient client(live_config(), transport, [&](auto d) { sleeps.push_back(d); });
    CHECK(client.request_labels("prompt") == "Cluster 1: A - a");
    CHECK(transport->bodies.size() == 4);
    CHECK(sleeps == std::vector<std::chrono::milliseconds>{1000ms, 2000ms, 4000ms});
    CHECK(transport->urls.front() == "https://llm.example/v1/chat/completions");
    REQUIRE(transport->last_headers.size() == 1);
    CHECK(transport->last_headers[0].second == "Bearer secret");
  }

  TEST_CASE("exhausted retries raise TransportError") {
    auto transport = std::make_shared<ScriptedTransport>(
        std::deque<HttpResponse>{{500, ""}, {500, ""}, {500, ""}, {500, ""}, {200, chat_reply("late")}});
    int sleeps = 0;
    LlmClient client(live_config(), transport, [&](auto) { ++sleeps; });
    CHECK_THROWS_AS(client.request_labels("prompt"), TransportError);
    CHECK(transport->bodies.size() == 4);
    CHECK(sleeps == 3);
  }

  TEST_CASE("live mode needs credentials") {
    auto config = live_config();
    config.api_key.clear();
    LlmClient client(config, std::make_shared<ScriptedTransport>(std::deque<HttpResponse>{}),
                     [](auto) {});
    CHECK_THROWS_AS(client.request_labels("p"), ConfigError);
  }

  TEST_CASE("live requests are serialized across threads") {
    auto transport = std::make_shared<ScriptedTransport>(std::deque<HttpResponse>{});
    LlmClient client(live_config(), transport, [](auto) {});
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
      threads.emplace_back([&] { (void)client.request_labels("p"); });
    for (auto& t : threads) t.join();
    CHECK(transport->bodies.size() == 8);
    CHECK(transport->max_in_flight_ == 1);
  }

  TEST_CASE("fixture mode replays by prompt hash and writes audit copies") {
    testing::TempDir dir("fixtures");
    const std::string prompt = "Name these clusters.";
    write_file(dir / "fixtures" / prompt_hash(prompt), "Cluster 1: X - y\n");
    LlmClientConfig config;
    config.mode = LlmMode::Fixture;
    config.fixture_dir = dir / "fixtures";
    LlmClient client(config);
    CHECK(client.request_labels(prompt, AuditTarget{dir / "run", "step"}) == "Cluster 1: X - y\n");
    CHECK(read_file(dir / "run" / "prompts" / "step.txt") == prompt);
    CHECK(read_file(dir / "run" / "responses" / "step.txt") == "Cluster 1: X - y\n");
    CHECK_THROWS_AS(client.request_labels("another prompt"), FixtureMissingError);
  }

  TEST_CASE("off mode cannot request labels") {
    LlmClient client(LlmClientConfig{});
    CHECK_THROWS_AS(client.request_labels("p"), ContractError);
    CHECK(parse_llm_mode("fixture") == LlmMode::Fixture);
    CHECK_THROWS_AS(parse_llm_mode("offline"), ConfigError);
  }

  TEST_CASE("HTTP transport talks to a local chat endpoint") {
    httplib::Server server;
    std::string seen_auth;
    std::string seen_body;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
      seen_auth = req.get_header_value("Authorization");
      seen_body = req.body;
      res.set_content(chat_reply("Cluster 1: Local - served"), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    auto config = live_config();
    config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    config.timeout = 5s;
    LlmClient client(config, nullptr, [](auto) {});
    const auto reply = client.request_labels("hello");
    server.stop();
    worker.join();

    CHECK(reply == "Cluster 1: Local - served");
    CHECK(seen_auth == "Bearer secret");
    CHECK(nlohmann::json::parse(seen_body)["messages"][0]["content"] == "hello");
  }

  TEST_CASE("unreachable endpoint fails after retries") {
    auto config = live_config();
    config.endpoint = "http://127.0.0.1:9/v1/chat/completions";
    config.timeout = 1s;
    int sleeps = 0;
    LlmClient client(config, nullptr, [&](auto) { ++sleeps; });
    CHECK_THROWS_AS(client.request_labels("p"), TransportError);
    CHECK(sleeps == 3);
  }
}
