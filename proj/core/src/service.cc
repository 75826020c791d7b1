#include "bpm/service.h"

#include <mutex>
#include <optional>
#include <shared_mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "bpm/dataset.h"
#include "bpm/features.h"
#include "bpm/json_io.h"
#include "bpm/motion_io.h"
#include "bpm/segmenter.h"

namespace bpm {
namespace {

namespace fs = std::filesystem;

class NotFound : public Error {
 public:
  using Error::Error;
};

nlohmann::json error_body(const std::string& message) { return {{"error", message}}; }

template <typename Fn>
Service::Response guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const NotFound& e) {
    return {404, error_body(e.what())};
  } catch (const ParagraphRejected& e) {
    nlohmann::json body = error_body(e.what());
    if (e.report()) body["validation"] = validation_report_to_json(*e.report());
    return {502, body};
  } catch (const ServiceError& e) {
    return {502, error_body(e.what())};
  } catch (const Error& e) {
    return {400, error_body(e.what())};
  } catch (const nlohmann::json::exception& e) {
    return {400, error_body(e.what())};
  } catch (const std::exception& e) {
    return {500, error_body(e.what())};
  }
}

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  std::map<std::string, GeneratorBackend*> backends;
  CompletionClient* llm = nullptr;

  std::shared_mutex mu;
  std::map<std::string, fs::path> motion_files;  // id -> file
  std::map<std::string, MotionSequence> motion_cache;
  std::mutex cache_mu;
  std::map<std::string, AnnotationRecord> records;
  DatasetSplit split;
  std::optional<Corpus> corpus;

  httplib::Server server;
  std::thread thread;

  const MotionSequence& motion(const std::string& id) {
    const auto file = motion_files.find(id);
    if (file == motion_files.end()) throw NotFound("unknown motion id " + id);
    std::lock_guard lock(cache_mu);
    auto it = motion_cache.find(id);
    if (it == motion_cache.end()) it = motion_cache.emplace(id, read_motion(file->second)).first;
    return it->second;
  }

  std::vector<std::string> texts(const std::string& id) {
    const MotionSequence& m = motion(id);
    const auto r = records.find(id);
    const int count = snippet_count(m.frame_count(), snippet_step(config.snippet_duration_s, m.fps));
    if (r != records.end() && static_cast<int>(r->second.bpmsd.size()) == count) return r->second.bpmsd;
    return describe_motion(m, config.snippet_duration_s, config.thresholds);
  }

  AnnotationRecord& record(const std::string& id) {
    auto it = records.find(id);
    if (it == records.end()) it = records.emplace(id, AnnotationRecord{id, {}, {}}).first;
    return it->second;
  }

  void persist(const std::string& id) {
    std::vector<AnnotationRecord> all;
    for (const auto& [rid, r] : records) all.push_back(r);
    write_annotations(config.store_dir, "all", all);
    for (const auto& [name, ids] : {std::pair<std::string, const std::vector<std::string>*>{"train", &split.train},
                                    {"val", &split.val},
                                    {"test", &split.test}}) {
      if (std::find(ids->begin(), ids->end(), id) == ids->end()) continue;
      std::vector<AnnotationRecord> part;
      for (const auto& sid : *ids) {
        const auto it = records.find(sid);
        part.push_back(it != records.end() ? it->second : AnnotationRecord{sid, {}, {}});
      }
      write_annotations(config.store_dir, name, part);
    }
    corpus.reset();
  }

  GeneratorBackend& backend(const std::string& name) {
    const auto it = backends.find(name);
    if (it == backends.end() || it->second == nullptr) {
      std::string known;
      for (const auto& [n, b] : backends) known += (known.empty() ? "" : ", ") + n;
      throw Error("unknown backend \"" + name + "\" (configured: " + known + ")");
    }
    return *it->second;
  }
};

Service::Service(ServiceConfig config, std::map<std::string, GeneratorBackend*> backends, CompletionClient* llm)
    : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->backends = std::move(backends);
  impl_->llm = llm;
  const fs::path& dir = impl_->config.store_dir;
  if (!fs::is_directory(dir)) throw Error("service: no such store directory " + dir.string());
  const fs::path motions = fs::is_directory(dir / "motions") ? dir / "motions" : dir;
  for (const auto& file : list_motion_files(motions)) impl_->motion_files[file.stem().string()] = file;
  if (fs::exists(dir / "all.bpmsd.json")) {
    for (auto& r : read_annotations(dir, "all")) impl_->records[r.motion_id] = std::move(r);
  }
  if (fs::exists(dir / "train.txt")) impl_->split = read_split(dir);
}

Service::~Service() { stop(); }

Service::Response Service::list_motions() {
  return guarded([&]() -> Response {
    std::shared_lock lock(impl_->mu);
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& [id, file] : impl_->motion_files) ids.push_back(id);
    return {200, {{"motions", ids}}};
  });
}

Service::Response Service::get_motion(const std::string& id) {
  return guarded([&]() -> Response {
    std::shared_lock lock(impl_->mu);
    const MotionSequence& m = impl_->motion(id);
    return {200, {{"motion", motion_to_json(m)}, {"features", features_to_json(encode_features(m))}}};
  });
}

Service::Response Service::get_snippets(const std::string& id) {
  return guarded([&]() -> Response {
    std::shared_lock lock(impl_->mu);
    const MotionSequence& m = impl_->motion(id);
    const std::vector<std::string> texts = impl_->texts(id);
    const auto snippets = segment(m, impl_->config.snippet_duration_s);
    nlohmann::json list = nlohmann::json::array();
    for (size_t k = 0; k < snippets.size(); ++k) {
      list.push_back({{"index", k}, {"start", snippets[k].frames.start}, {"end", snippets[k].frames.end},
                      {"text", texts[k]}});
    }
    return {200,
            {{"motion_id", id}, {"fps", m.fps}, {"snippet_duration_s", impl_->config.snippet_duration_s},
             {"snippets", list}}};
  });
}

Service::Response Service::put_snippet(const std::string& id, int index, const std::string& text) {
  return guarded([&]() -> Response {
    std::unique_lock lock(impl_->mu);
    std::vector<std::string> texts = impl_->texts(id);
    if (index < 0 || index >= static_cast<int>(texts.size())) {
      throw NotFound("motion " + id + " has no snippet " + std::to_string(index) + " (" +
                     std::to_string(texts.size()) + " snippets)");
    }
    texts[index] = text;
    impl_->record(id).bpmsd = texts;
    impl_->persist(id);
    return {200, {{"motion_id", id}, {"index", index}, {"text", text}}};
  });
}

Service::Response Service::suggest(const std::string& query, int k) {
  return guarded([&]() -> Response {
    if (k < 1) throw Error("k must be >= 1");
    std::unique_lock lock(impl_->mu);  // may build the corpus
    if (!impl_->corpus) {
      std::vector<AnnotationRecord> all;
      for (const auto& [id, r] : impl_->records) all.push_back(r);
      impl_->corpus = build_corpus(all);
    }
    nlohmann::json list = nlohmann::json::array();
    for (const auto& s : suggest_sentences(*impl_->corpus, query, k)) {
      list.push_back({{"sentence", s.sentence}, {"score", s.score}, {"frequency", s.frequency}});
    }
    return {200, {{"query", query}, {"suggestions", list}}};
  });
}

Service::Response Service::paragraph(const std::string& id, const nlohmann::json& options) {
  return guarded([&]() -> Response {
    const nlohmann::json opts = options.is_null() ? nlohmann::json::object() : options;
    if (!opts.is_object()) throw Error("paragraph options must be a JSON object");
    ParagraphOptions p = impl_->config.paragraph;
    if (opts.contains("mode")) p.mode = parse_paragraph_mode(opts["mode"].get<std::string>());
    const uint64_t seed = opts.value("seed", uint64_t{0});
    const bool save = opts.value("save", true);
    const int variant = opts.value("variant", 0);
    if (variant < 0) throw Error("variant must be >= 0");

    std::vector<std::string> texts;
    {
      std::shared_lock lock(impl_->mu);
      texts = impl_->texts(id);
    }
    const OrganizeResult r = organize_paragraph({id, texts}, p, impl_->llm, seed);
    if (save) {
      std::unique_lock lock(impl_->mu);
      AnnotationRecord& rec = impl_->record(id);
      if (rec.bpmsd.empty()) rec.bpmsd = texts;
      if (static_cast<int>(rec.bpmp.size()) <= variant) rec.bpmp.resize(variant + 1);
      rec.bpmp[variant] = r.paragraph.text;
      impl_->persist(id);
    }
    return {200,
            {{"motion_id", id}, {"text", r.paragraph.text}, {"variant", variant}, {"source", r.source},
             {"attempts", r.attempts}, {"validation", validation_report_to_json(r.report)}}};
  });
}

Service::Response Service::generate(const nlohmann::json& request) {
  return guarded([&]() -> Response {
    const GeneratorRequest req = generator_request_from_json(request);
    const std::string name = request.value("backend", std::string("stub"));
    const MotionSequence m = impl_->backend(name).generate(req);
    return {200, {{"backend", name}, {"motion", motion_to_json(m)}}};
  });
}

Service::Response Service::edit(const nlohmann::json& request) {
  return guarded([&]() -> Response {
    const EditRequest req = edit_request_from_json(request);
    GeneratorBackend& backend = impl_->backend(req.backend);
    const EditResult r = edit_motion(req, backend, {impl_->config.snippet_duration_s, impl_->config.thresholds});
    return {200, edit_result_to_json(r)};
  });
}

int Service::start(const std::string& host, int port) {
  auto& s = impl_->server;
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto parse_body = [](const httplib::Request& req) {
    if (req.body.empty()) return nlohmann::json::object();
    try {
      return nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("", std::string("request body is not JSON: ") + e.what());
    }
  };
  auto json_route = [&](auto fn) {
    return [=](const httplib::Request& req, httplib::Response& res) {
      Response r = guarded([&] { return fn(req, parse_body(req)); });
      reply(res, r);
    };
  };

  s.Get("/motions", [=, this](const httplib::Request&, httplib::Response& res) { reply(res, list_motions()); });
  s.Get(R"(/motions/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_motion(req.matches[1]));
  });
  s.Get(R"(/motions/([^/]+)/snippets)", [=, this](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_snippets(req.matches[1]));
  });
  s.Put(R"(/motions/([^/]+)/snippets/(-?\d+))", [=, this](const httplib::Request& req, httplib::Response& res) {
    Response r = guarded([&]() -> Response {
      std::string text = req.body;
      if (req.get_header_value("Content-Type").rfind("application/json", 0) == 0) {
        const nlohmann::json j = nlohmann::json::parse(req.body);
        text = j.is_string() ? j.get<std::string>() : j.at("text").get<std::string>();
      }
      return put_snippet(req.matches[1], std::stoi(req.matches[2]), text);
    });
    reply(res, r);
  });
  s.Get("/corpus/suggest", [=, this](const httplib::Request& req, httplib::Response& res) {
    Response r = guarded([&]() -> Response {
      const int k = req.has_param("k") ? std::stoi(req.get_param_value("k")) : 5;
      return suggest(req.get_param_value("q"), k);
    });
    reply(res, r);
  });
  s.Post(R"(/paragraph/([^/]+))", json_route([this](const httplib::Request& req, const nlohmann::json& body) {
           return paragraph(req.matches[1], body);
         }));
  s.Post("/generate",
         json_route([this](const httplib::Request&, const nlohmann::json& body) { return generate(body); }));
  s.Post("/edit", json_route([this](const httplib::Request&, const nlohmann::json& body) { return edit(body); }));

  // httplib's default also sets SO_REUSEPORT, which lets a second server bind
  // the same port silently.
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  int bound = port;
  if (port == 0) {
    bound = s.bind_to_any_port(host);
    if (bound < 0) throw Error("service: cannot bind " + host);
  } else if (!s.bind_to_port(host, port)) {
    throw Error("service: cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  s.wait_until_ready();
  return bound;
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void Service::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace bpm
