#include "bpm/clients.h"

#include <algorithm>
#include <condition_variable>
#include <mutex>
#include <regex>
#include <set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "bpm/dataset.h"
#include "bpm/describer.h"
#include "bpm/fixtures.h"
#include "bpm/json_io.h"
#include "bpm/motion_io.h"
#include "bpm/motion_ops.h"
#include "bpm/text_assembly.h"

namespace bpm {
namespace {

struct Url {
  std::string base;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& endpoint) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint, m, re)) throw ServiceError(endpoint, "not an http(s) URL");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (endpoint.rfind("https://", 0) == 0) throw ServiceError(endpoint, "built without TLS support");
#endif
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

}  // namespace

nlohmann::json post_json(const HttpClientConfig& config, const nlohmann::json& body) {
  const Url url = split_url(config.endpoint);
  httplib::Client client(url.base);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!config.api_key.empty()) headers.emplace("Authorization", "Bearer " + config.api_key);
  const auto res = client.Post(url.path, headers, body.dump(), "application/json");
  if (!res) throw ServiceError(config.endpoint, "request failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    std::string snippet = res->body.substr(0, 200);
    throw ServiceError(config.endpoint, "HTTP " + std::to_string(res->status) + ": " + snippet, res->status);
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw ServiceError(config.endpoint, std::string("reply is not JSON: ") + e.what(), res->status);
  }
}

struct HttpCompletionClient::Limiter {
  std::mutex mu;
  std::condition_variable cv;
  int in_flight = 0;
};

HttpCompletionClient::HttpCompletionClient(HttpClientConfig config)
    : config_(std::move(config)), limiter_(std::make_unique<Limiter>()) {
  split_url(config_.endpoint);
  if (config_.max_concurrent < 1) throw Error("max_concurrent must be >= 1");
}

HttpCompletionClient::~HttpCompletionClient() = default;

std::string HttpCompletionClient::complete(const std::string& prompt) {
  {
    std::unique_lock lock(limiter_->mu);
    limiter_->cv.wait(lock, [&] { return limiter_->in_flight < config_.max_concurrent; });
    ++limiter_->in_flight;
  }
  struct Release {
    Limiter* l;
    ~Release() {
      {
        std::lock_guard lock(l->mu);
        --l->in_flight;
      }
      l->cv.notify_one();
    }
  } release{limiter_.get()};

  const nlohmann::json reply = post_json(config_, {{"prompt", prompt}});
  if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string()) {
    throw ServiceError(config_.endpoint, "reply has no string field \"text\"");
  }
  return reply["text"].get<std::string>();
}

void GeneratorRequest::validate() const {
  if (coarse_text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error("generator request: coarse_text is empty");
  }
  if (target_frames && *target_frames <= 0) {
    throw Error("generator request: target_frames must be positive, got " + std::to_string(*target_frames));
  }
}

std::string GeneratorRequest::effective_detail() const {
  return detailed_text ? *detailed_text : std::string(kEmptyDetailToken);
}

nlohmann::json generator_request_to_json(const GeneratorRequest& request) {
  nlohmann::json j = {{"coarse_text", request.coarse_text}};
  if (request.detailed_text) j["detailed_text"] = *request.detailed_text;
  if (request.target_frames) j["target_frames"] = *request.target_frames;
  return j;
}

GeneratorRequest generator_request_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("", "generator request must be a JSON object");
  GeneratorRequest r;
  try {
    r.coarse_text = j.at("coarse_text").get<std::string>();
    if (j.contains("detailed_text") && !j["detailed_text"].is_null()) {
      r.detailed_text = j["detailed_text"].get<std::string>();
    }
    if (j.contains("target_frames") && !j["target_frames"].is_null()) {
      r.target_frames = j["target_frames"].get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("", std::string("generator request: ") + e.what());
  }
  r.validate();
  return r;
}

MotionSequence HttpGenerator::generate(const GeneratorRequest& request) {
  request.validate();
  nlohmann::json body = {{"coarse_text", request.coarse_text}, {"detailed_text", request.effective_detail()}};
  if (request.target_frames) body["target_frames"] = *request.target_frames;
  const nlohmann::json reply = post_json(config_, body);
  if (!reply.is_object() || !reply.contains("motion")) {
    throw ServiceError(config_.endpoint, "reply has no \"motion\" field");
  }
  MotionSequence motion;
  try {
    motion = motion_from_json(reply["motion"]);
    motion.validate();
  } catch (const Error& e) {
    throw ServiceError(config_.endpoint, std::string("malformed motion payload: ") + e.what());
  }
  if (motion.frames.empty()) throw ServiceError(config_.endpoint, "malformed motion payload: no frames");
  if (motion.fps != 20.0) motion = resample(motion, 20.0);
  return canonicalize(motion);
}

std::vector<std::string> stub_tokens(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) break;
    const std::string_view raw = text.substr(i, j - i);
    i = j;
    if (raw == "<SEP>") continue;
    if (raw == kMotionlessToken || raw == kEmptyDetailToken) {
      out.emplace_back(raw);
      continue;
    }
    for (auto& w : word_tokens(raw)) out.push_back(std::move(w));
  }
  return out;
}

namespace {

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  size_t shared = 0;
  for (const auto& t : sa) shared += sb.count(t);
  return static_cast<double>(shared) / static_cast<double>(sa.size() + sb.size() - shared);
}

}  // namespace

double stub_score(const GeneratorRequest& request, const StubFixture& fixture) {
  return jaccard(stub_tokens(request.coarse_text + " " + request.effective_detail()),
                 stub_tokens(fixture.coarse_text + " " + fixture.detailed_text));
}

StubGenerator::StubGenerator(std::vector<StubFixture> fixtures) : fixtures_(std::move(fixtures)) {
  if (fixtures_.empty()) throw Error("stub generator: fixture store is empty");
  std::sort(fixtures_.begin(), fixtures_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (size_t i = 1; i < fixtures_.size(); ++i) {
    if (fixtures_[i].id == fixtures_[i - 1].id) throw Error("stub generator: duplicate fixture id " + fixtures_[i].id);
  }
}

StubGenerator StubGenerator::from_bundled(double snippet_duration_s) {
  std::vector<StubFixture> out;
  for (auto& f : fixtures::bundled()) {
    const std::string detail = assemble_template(describe_motion(f.motion, snippet_duration_s));
    out.push_back({f.motion.id, f.coarse_text, detail, std::move(f.motion)});
  }
  return StubGenerator(std::move(out));
}

StubGenerator StubGenerator::from_directory(const std::filesystem::path& dir, double snippet_duration_s) {
  const auto captions_path = dir / "captions.json";
  nlohmann::json captions = nlohmann::json::object();
  if (std::filesystem::exists(captions_path)) {
    try {
      captions = nlohmann::json::parse(read_file(captions_path));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(captions_path.string(), e.what());
    }
  }
  std::vector<StubFixture> out;
  for (const auto& path : list_motion_files(dir)) {
    MotionSequence m = read_motion(path);
    const std::string caption = captions.value(m.id, std::string());
    const std::string detail = assemble_template(describe_motion(m, snippet_duration_s));
    out.push_back({m.id, caption, detail, std::move(m)});
  }
  return StubGenerator(std::move(out));
}

const StubFixture& StubGenerator::nearest(const GeneratorRequest& request) const {
  request.validate();
  const StubFixture* best = nullptr;
  double best_score = -1.0;
  for (const auto& f : fixtures_) {  // sorted by id, so the first maximum wins ties
    const double s = stub_score(request, f);
    if (s > best_score) {
      best_score = s;
      best = &f;
    }
  }
  return *best;
}

MotionSequence StubGenerator::generate(const GeneratorRequest& request) {
  ++calls_;
  return nearest(request).motion;
}

}  // namespace bpm
