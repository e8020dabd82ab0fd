#include "mvlabel/llm_client.hpp"

#include <httplib.h>

#include <mutex>
#include "json.hpp"
#include <thread>

#include "mvlabel/errors.hpp"
#include "mvlabel/labeling.hpp"
#include "mvlabel/text.hpp"

namespace mvlabel {

std::string to_string(LlmMode mode) {
  switch (mode) {
    case LlmMode::Live: return "live";
    case LlmMode::Fixture: return "fixture";
    case LlmMode::Off: return "off";
  }
  return "off";
}

LlmMode parse_llm_mode(std::string_view text) {
  if (text == "live") return LlmMode::Live;
  if (text == "fixture") return LlmMode::Fixture;
  if (text == "off") return LlmMode::Off;
  throw ConfigError("unknown LLM mode '" + std::string(text) + "' (expected live, fixture or off)");
}

namespace {

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse post(const std::string& url, const Headers& headers, const std::string& body,
                    std::chrono::seconds timeout) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw TransportError("endpoint is not a URL: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = client.Post(path, h, body, "application/json");
    if (!res) throw TransportError("request to " + origin + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }
};

// One request in flight per process keeps the endpoint's rate limits happy.
std::mutex& live_request_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport() { return std::make_shared<HttplibTransport>(); }

std::string chat_request_body(std::string_view model, std::string_view prompt, double temperature) {
  nlohmann::json body = {
      {"model", model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", temperature},
  };
  return body.dump();
}

std::string extract_chat_content(std::string_view response_body) {
  try {
    const auto doc = nlohmann::json::parse(response_body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed chat-completion response: ") + e.what());
  }
}

LlmClient::LlmClient(LlmClientConfig config, std::shared_ptr<HttpTransport> transport,
                     Sleeper sleeper)
    : config_(std::move(config)), transport_(std::move(transport)), sleeper_(std::move(sleeper)) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string LlmClient::request_labels(const std::string& prompt,
                                      const std::optional<AuditTarget>& audit) {
  if (audit) write_file(audit->run_dir / "prompts" / (audit->tag + ".txt"), prompt);
  std::string response;
  switch (config_.mode) {
    case LlmMode::Live: response = request_live(prompt); break;
    case LlmMode::Fixture: response = request_fixture(prompt); break;
    case LlmMode::Off: throw ContractError("LLM mode is off; no labels can be requested");
  }
  if (audit) write_file(audit->run_dir / "responses" / (audit->tag + ".txt"), response);
  return response;
}

std::string LlmClient::request_fixture(const std::string& prompt) const {
  const auto path = config_.fixture_dir / prompt_hash(prompt);
  if (!std::filesystem::is_regular_file(path))
    throw FixtureMissingError("no fixture response for prompt hash " + prompt_hash(prompt) +
                              " in '" + config_.fixture_dir.string() + "'");
  return read_file(path);
}

std::string LlmClient::request_live(const std::string& prompt) {
  if (config_.endpoint.empty()) throw ConfigError("live LLM mode needs an endpoint URL");
  if (config_.api_key.empty()) throw ConfigError("live LLM mode needs LLM_API_KEY to be set");
  if (!transport_) transport_ = make_http_transport();

  const Headers headers = {{"Authorization", "Bearer " + config_.api_key}};
  const std::string body = chat_request_body(config_.model, prompt, config_.temperature);

  std::lock_guard lock(live_request_mutex());
  std::string last_error;
  auto delay = config_.backoff_base;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      sleeper_(delay);
      delay *= 2;
    }
    try {
      const HttpResponse res = transport_->post(config_.endpoint, headers, body, config_.timeout);
      if (res.status >= 200 && res.status < 400) return extract_chat_content(res.body);
      last_error = "HTTP " + std::to_string(res.status);
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw TransportError("LLM request failed after " + std::to_string(config_.max_retries) +
                       " retries: " + last_error);
}

}  // namespace mvlabel
