#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mvlabel {

enum class LlmMode { Live, Fixture, Off };

std::string to_string(LlmMode mode);
LlmMode parse_llm_mode(std::string_view text);

struct LlmClientConfig {
  LlmMode mode = LlmMode::Off;
  std::string endpoint;  // full URL of an OpenAI-compatible chat-completions route
  std::string model = "gpt-4o";
  std::string api_key;   // read from LLM_API_KEY by the pipeline
  std::filesystem::path fixture_dir;
  double temperature = 0.0;
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{1000};
  std::chrono::seconds timeout{60};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

/// Minimal POST transport so the client can be exercised without a network.
/// Implementations throw TransportError when no HTTP response is obtained.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const std::string& url, const Headers& headers,
                            const std::string& body, std::chrono::seconds timeout) = 0;
};

/// cpp-httplib backed transport (http and https).
std::shared_ptr<HttpTransport> make_http_transport();

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Request body for an OpenAI-compatible chat completion.
std::string chat_request_body(std::string_view model, std::string_view prompt, double temperature);

/// Returns choices[0].message.content; throws TransportError on a malformed body.
std::string extract_chat_content(std::string_view response_body);

/// Where request/response pairs are persisted for audit.
struct AuditTarget {
  std::filesystem::path run_dir;
  std::string tag;  // file stem, usually the view name
};

/// Obtains raw label text for a prompt, either from a live endpoint or from a
/// fixture directory of files named by prompt_hash(). Live requests are
/// serialized and retried on transport failure or HTTP status >= 400 with
/// exponential backoff (base, 2*base, 4*base, ...).
class LlmClient {
 public:
  explicit LlmClient(LlmClientConfig config, std::shared_ptr<HttpTransport> transport = nullptr,
                     Sleeper sleeper = nullptr);

  std::string request_labels(const std::string& prompt,
                             const std::optional<AuditTarget>& audit = std::nullopt);

  [[nodiscard]] const LlmClientConfig& config() const noexcept { return config_; }

 private:
  std::string request_live(const std::string& prompt);
  std::string request_fixture(const std::string& prompt) const;

  LlmClientConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
};

}  // namespace mvlabel
