#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "bpm/clients.h"
#include "bpm/orchestrator.h"

namespace bpm {

struct ServiceConfig {
  // A run_pipeline output directory (motions/ plus all.*.json).
  std::filesystem::path store_dir;
  double snippet_duration_s = 0.5;
  ThresholdTable thresholds;
  ParagraphOptions paragraph;
};

// JSON API over a dataset directory. Every handler is also callable without
// HTTP; the server routes map 1:1 onto them. Reads share a lock, snippet
// edits and saved paragraphs take it exclusively and are written through to
// disk before the response.
class Service {
 public:
  // Backends are looked up by EditRequest::backend / the "backend" field of
  // /generate. Pointers must outlive the service.
  Service(ServiceConfig config, std::map<std::string, GeneratorBackend*> backends,
          CompletionClient* llm = nullptr);
  ~Service();

  struct Response {
    int status = 200;
    nlohmann::json body;
  };

  Response list_motions();
  Response get_motion(const std::string& id);
  Response get_snippets(const std::string& id);
  Response put_snippet(const std::string& id, int index, const std::string& text);
  Response suggest(const std::string& query, int k);
  Response paragraph(const std::string& id, const nlohmann::json& options);
  Response generate(const nlohmann::json& request);
  Response edit(const nlohmann::json& request);

  // Binds and serves on a background thread; returns the bound port (pass 0
  // for any free port). Throws when the port is taken.
  int start(const std::string& host, int port);
  void stop();
  // Blocks until stop().
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bpm
