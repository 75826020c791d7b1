#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bpm/error.h"
#include "bpm/motion.h"

// Clients for the two external services (paragraph LLM, text-to-motion
// generator) and the deterministic retrieval generator used in their place.
namespace bpm {

// Transport, HTTP status or payload failure of an external service. The
// message starts with the endpoint.
class ServiceError : public Error {
 public:
  ServiceError(std::string endpoint, const std::string& what, int status = 0)
      : Error(endpoint + ": " + what), endpoint_(std::move(endpoint)), status_(status) {}

  const std::string& endpoint() const noexcept { return endpoint_; }
  // HTTP status, 0 when no response arrived.
  int status() const noexcept { return status_; }
  bool is_auth() const noexcept { return status_ == 401 || status_ == 403; }

 private:
  std::string endpoint_;
  int status_;
};

struct HttpClientConfig {
  std::string endpoint;  // http://host:port/path
  std::string api_key;   // sent as "Authorization: Bearer ..." when set
  std::chrono::milliseconds timeout{30000};
  int max_concurrent = 4;
};

// POSTs `body` as JSON and parses the JSON reply. Throws ServiceError.
nlohmann::json post_json(const HttpClientConfig& config, const nlohmann::json& body);

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
  virtual std::string name() const = 0;
};

// Single-endpoint contract: POST {"prompt": ...} -> {"text": ...}.
class HttpCompletionClient : public CompletionClient {
 public:
  explicit HttpCompletionClient(HttpClientConfig config);
  ~HttpCompletionClient() override;
  std::string complete(const std::string& prompt) override;
  std::string name() const override { return config_.endpoint; }

 private:
  HttpClientConfig config_;
  struct Limiter;
  std::unique_ptr<Limiter> limiter_;
};

// Replies from a callback; used by tests and offline runs.
class StubCompletionClient : public CompletionClient {
 public:
  using Reply = std::function<std::string(const std::string& prompt, int call)>;
  explicit StubCompletionClient(Reply reply) : reply_(std::move(reply)) {}
  std::string complete(const std::string& prompt) override { return reply_(prompt, calls_++); }
  std::string name() const override { return "stub"; }
  int calls() const { return calls_.load(); }

 private:
  Reply reply_;
  std::atomic<int> calls_{0};
};

inline constexpr std::string_view kEmptyDetailToken = "<EMPTY>";

struct GeneratorRequest {
  std::string coarse_text;
  std::optional<std::string> detailed_text;  // templated BPMSDs
  std::optional<int> target_frames;

  // Throws on an empty coarse text or a non-positive target length.
  void validate() const;
  // The detail the backend sees: the template, or "<EMPTY>" when omitted.
  std::string effective_detail() const;
};

nlohmann::json generator_request_to_json(const GeneratorRequest& request);
GeneratorRequest generator_request_from_json(const nlohmann::json& j);

class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  // Canonical 20 fps motion.
  virtual MotionSequence generate(const GeneratorRequest& request) = 0;
  virtual std::string name() const = 0;
};

// POST {"coarse_text", "detailed_text", "target_frames"} -> {"motion": {...}}
// in the motion JSON layout; the reply is canonicalized and resampled.
class HttpGenerator : public GeneratorBackend {
 public:
  explicit HttpGenerator(HttpClientConfig config) : config_(std::move(config)) {}
  MotionSequence generate(const GeneratorRequest& request) override;
  std::string name() const override { return config_.endpoint; }

 private:
  HttpClientConfig config_;
};

struct StubFixture {
  std::string id;
  std::string coarse_text;
  std::string detailed_text;  // assembled template
  MotionSequence motion;
};

// Tokens the stub scores with: lower-case words, "<Motionless>" and
// "<EMPTY>" kept whole, "<SEP>" dropped.
std::vector<std::string> stub_tokens(std::string_view text);

// Jaccard overlap of the token sets of (coarse + detail).
double stub_score(const GeneratorRequest& request, const StubFixture& fixture);

// Nearest stored fixture by stub_score; ties go to the smallest id. Target
// lengths are ignored: the stored motion is returned as is.
class StubGenerator : public GeneratorBackend {
 public:
  explicit StubGenerator(std::vector<StubFixture> fixtures);
  StubGenerator(StubGenerator&& other) noexcept
      : fixtures_(std::move(other.fixtures_)), calls_(other.calls_.load()) {}

  // Fixture motions with their coarse captions; the detail is the described
  // motion at `snippet_duration_s`.
  static StubGenerator from_bundled(double snippet_duration_s = 0.5);
  // `*.mofg` motions plus captions.json ({"id": "caption"}).
  static StubGenerator from_directory(const std::filesystem::path& dir, double snippet_duration_s = 0.5);

  MotionSequence generate(const GeneratorRequest& request) override;
  std::string name() const override { return "stub"; }

  const StubFixture& nearest(const GeneratorRequest& request) const;
  const std::vector<StubFixture>& fixtures() const { return fixtures_; }
  int calls() const { return calls_.load(); }

 private:
  std::vector<StubFixture> fixtures_;
  std::atomic<int> calls_{0};
};

}  // namespace bpm
