#include "bpm/orchestrator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "bpm/dataset.h"
#include "bpm/json_io.h"
#include "bpm/motion_io.h"
#include "bpm/motion_ops.h"
#include "bpm/random.h"
#include "bpm/segmenter.h"

namespace bpm {
namespace {

namespace fs = std::filesystem;

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void default_sleep(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

}  // namespace

uint64_t motion_seed(uint64_t seed, std::string_view motion_id) { return derive_seed(seed, fnv1a(motion_id)); }

MotionSequence preprocess_motion(const MotionSequence& motion, uint64_t seed, double max_seconds) {
  motion.validate();
  MotionSequence m = motion.fps == 20.0 ? motion : resample(motion, 20.0);
  m = random_crop_to_duration(m, max_seconds, seed);
  // Same 22-joint topology, so local rotations carry over unchanged.
  m.skeleton = Skeleton::standard();
  return canonicalize(m);
}

std::string to_string(ParagraphMode mode) {
  switch (mode) {
    case ParagraphMode::kLlm:
      return "llm";
    case ParagraphMode::kFallback:
      return "fallback";
    case ParagraphMode::kLlmWithFallback:
      return "llm-with-fallback";
  }
  return "?";
}

ParagraphMode parse_paragraph_mode(const std::string& text) {
  if (text == "llm") return ParagraphMode::kLlm;
  if (text == "fallback") return ParagraphMode::kFallback;
  if (text == "llm-with-fallback") return ParagraphMode::kLlmWithFallback;
  throw Error("unknown paragraph mode \"" + text + "\" (llm, fallback, llm-with-fallback)");
}

nlohmann::json validation_report_to_json(const ValidationReport& report) {
  return {{"coverage", report.coverage},
          {"missing_snippets", report.missing_snippets},
          {"extra_parts", report.extra_parts},
          {"lexicon_inputs", report.lexicon_inputs}};
}

OrganizeResult organize_paragraph(const BpmsdList& texts, const ParagraphOptions& options,
                                  CompletionClient* client, uint64_t seed) {
  const std::string prompt = build_paragraph_prompt(texts.texts);  // throws on all-empty input

  OrganizeResult result;
  auto use_fallback = [&] {
    result.paragraph = fallback_paragraph(texts, seed, options.fallback);
    result.report = validate_paragraph(result.paragraph.text, texts.texts);
    result.source = "fallback";
    return result;
  };
  if (options.mode == ParagraphMode::kFallback) return use_fallback();
  if (client == nullptr) {
    if (options.mode == ParagraphMode::kLlmWithFallback) return use_fallback();
    throw Error("llm paragraph mode needs a completion client (set LLM_ENDPOINT)");
  }
  if (options.retry.attempts < 1) throw Error("retry attempts must be >= 1");

  const auto& sleep = options.retry.sleep ? options.retry.sleep : default_sleep;
  std::optional<ValidationReport> last_report;
  std::string last_error;
  auto backoff = options.retry.initial_backoff;
  for (int attempt = 1; attempt <= options.retry.attempts; ++attempt) {
    result.attempts = attempt;
    try {
      const std::string text = trim(client->complete(prompt));
      const ValidationReport report = validate_paragraph(text, texts.texts);
      if (!text.empty() && report.passes(options.min_coverage)) {
        result.paragraph = {texts.motion_id, text, 0};
        result.report = report;
        result.source = "llm";
        return result;
      }
      last_report = report;
      last_error = "paragraph rejected: coverage " + std::to_string(report.coverage) +
                   (report.extra_parts.empty() ? "" : ", extra body parts");
    } catch (const ServiceError& e) {
      last_error = e.what();
      if (e.is_auth()) break;  // retrying will not help
    }
    if (attempt < options.retry.attempts) {
      sleep(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<long long>(std::llround(backoff.count() * options.retry.backoff_factor)));
    }
  }
  if (options.mode == ParagraphMode::kLlmWithFallback) {
    const int attempts = result.attempts;
    use_fallback();
    result.attempts = attempts;
    return result;
  }
  throw ParagraphRejected(client->name() + ": no valid paragraph after " + std::to_string(result.attempts) +
                              " attempt(s); last: " + last_error,
                          last_report);
}

nlohmann::json edit_request_to_json(const EditRequest& request) {
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& [index, text] : request.edits) edits.push_back({{"index", index}, {"text", text}});
  nlohmann::json j = {{"coarse_text", request.coarse_text}, {"edits", edits}, {"backend", request.backend},
                      {"seed", request.seed}};
  if (request.target_frames) j["target_frames"] = *request.target_frames;
  if (request.initial) j["initial"] = motion_to_json(*request.initial);
  return j;
}

EditRequest edit_request_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("", "edit request must be a JSON object");
  EditRequest r;
  try {
    r.coarse_text = j.at("coarse_text").get<std::string>();
    if (j.contains("edits")) {
      for (const auto& e : j.at("edits")) r.edits.emplace_back(e.at("index").get<int>(), e.at("text").get<std::string>());
    }
    r.backend = j.value("backend", std::string("stub"));
    r.seed = j.value("seed", uint64_t{0});
    if (j.contains("target_frames") && !j["target_frames"].is_null()) r.target_frames = j["target_frames"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("", std::string("edit request: ") + e.what());
  }
  if (j.contains("initial") && !j["initial"].is_null()) r.initial = motion_from_json(j["initial"]);
  return r;
}

nlohmann::json edit_result_to_json(const EditResult& result) {
  return {{"initial", motion_to_json(result.initial)},
          {"edited", motion_to_json(result.edited)},
          {"before", result.before},
          {"after", result.after},
          {"detail", result.detail}};
}

EditResult edit_motion(const EditRequest& request, GeneratorBackend& backend, const EditOptions& options) {
  const GeneratorRequest first{request.coarse_text, std::nullopt, std::nullopt};
  first.validate();
  if (request.target_frames && *request.target_frames <= 0) throw Error("edit: target_frames must be positive");
  const int step = snippet_step(options.snippet_duration_s, 20.0);

  std::set<int> seen;
  for (const auto& [index, text] : request.edits) {
    if (index < 0) throw Error("edit: snippet index " + std::to_string(index) + " is negative");
    if (!seen.insert(index).second) throw Error("edit: snippet index " + std::to_string(index) + " repeated");
  }

  auto check_range = [&](int count) {
    for (const auto& [index, text] : request.edits) {
      if (index >= count) {
        throw Error("edit: snippet index " + std::to_string(index) + " out of range (motion has " +
                    std::to_string(count) + " snippets)");
      }
    }
  };

  EditResult result;
  if (request.initial) {
    result.initial = preprocess_motion(*request.initial, request.seed);
    check_range(snippet_count(result.initial.frame_count(), step));
  } else {
    // Preprocessing caps every motion at kMaxClipSeconds.
    check_range(snippet_count(static_cast<int>(std::lround(kMaxClipSeconds * 20.0)), step));
    try {
      result.initial = preprocess_motion(backend.generate(first), request.seed);
    } catch (const Error& e) {
      throw Error(std::string("edit step 1 (initial generation): ") + e.what());
    }
  }

  result.before = describe_motion(result.initial, options.snippet_duration_s, options.thresholds);
  check_range(static_cast<int>(result.before.size()));
  result.after = result.before;
  for (const auto& [index, text] : request.edits) result.after[index] = text;
  result.detail = assemble_template(result.after);

  GeneratorRequest second{request.coarse_text, result.detail,
                          request.target_frames.value_or(result.initial.frame_count())};
  try {
    result.edited = backend.generate(second);
  } catch (const Error& e) {
    throw Error(std::string("edit step 5 (regeneration): ") + e.what());
  }
  return result;
}

void PipelineConfig::validate() const {
  if (input_dir.empty()) throw Error("pipeline: input directory not set");
  if (output_dir.empty()) throw Error("pipeline: output directory not set");
  if (!(snippet_duration_s > 0.0)) throw Error("pipeline: snippet duration must be > 0");
  if (variants < 1) throw Error("pipeline: variants must be >= 1");
  if (threads < 1) throw Error("pipeline: threads must be >= 1");
}

PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("", "config must be a JSON object");
  static const std::set<std::string> known = {
      "input_dir", "output_dir",      "snippet_duration_s", "thresholds_path",  "paragraph_mode",
      "variants",  "seed",            "split_seed",         "threads",          "min_coverage",
      "retry_attempts", "retry_backoff_ms", "thresholds",   "llm",              "generator",
      "service"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ParseError(key, "unknown config key");
  }
  PipelineConfig c;
  auto get = [&](const char* key, auto& out) {
    if (!j.contains(key)) return;
    try {
      out = j.at(key).get<std::decay_t<decltype(out)>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(key, e.what());
    }
  };
  std::string input, output, thresholds, mode = to_string(c.paragraph.mode);
  int backoff_ms = static_cast<int>(c.paragraph.retry.initial_backoff.count());
  get("input_dir", input);
  get("output_dir", output);
  get("thresholds_path", thresholds);
  get("paragraph_mode", mode);
  get("snippet_duration_s", c.snippet_duration_s);
  get("variants", c.variants);
  get("seed", c.seed);
  get("split_seed", c.split_seed);
  get("threads", c.threads);
  get("min_coverage", c.paragraph.min_coverage);
  get("retry_attempts", c.paragraph.retry.attempts);
  get("retry_backoff_ms", backoff_ms);
  c.input_dir = input;
  c.output_dir = output;
  if (!thresholds.empty()) c.thresholds_path = thresholds;
  if (j.contains("thresholds")) {
    if (c.thresholds_path) throw ParseError("thresholds", "give either thresholds or thresholds_path, not both");
    c.thresholds = ThresholdTable::from_json(j.at("thresholds"));
  }
  c.paragraph.mode = parse_paragraph_mode(mode);
  c.paragraph.retry.initial_backoff = std::chrono::milliseconds(backoff_ms);
  return c;
}

nlohmann::json pipeline_summary_to_json(const PipelineSummary& s) {
  return {{"motions_found", s.motions_found},
          {"motions_processed", s.motions_processed},
          {"snippets", s.snippets},
          {"empty_snippets", s.empty_snippets},
          {"paragraphs", s.paragraphs},
          {"llm_paragraphs", s.llm_paragraphs},
          {"fallback_paragraphs", s.fallback_paragraphs},
          {"failures", s.failures},
          {"split", {{"train", s.train}, {"val", s.val}, {"test", s.test}}}};
}

namespace {

struct MotionOutcome {
  std::optional<MotionSequence> motion;
  AnnotationRecord record;
  int llm = 0;
  int fallback = 0;
  std::string error;
};

MotionOutcome process_motion(const fs::path& file, const PipelineConfig& config, const ThresholdTable& thresholds,
                             CompletionClient* client) {
  MotionOutcome out;
  try {
    const MotionSequence raw = read_motion(file);
    const uint64_t mseed = bpm::motion_seed(config.seed, raw.id);
    MotionSequence m = preprocess_motion(raw, mseed);
    out.record.motion_id = m.id;
    out.record.bpmsd = describe_motion(m, config.snippet_duration_s, thresholds);
    const bool any = std::any_of(out.record.bpmsd.begin(), out.record.bpmsd.end(),
                                 [](const std::string& s) { return !s.empty(); });
    const BpmsdList list{m.id, out.record.bpmsd};
    for (int v = 0; v < config.variants; ++v) {
      const uint64_t s = derive_seed(mseed, 1000 + v);
      if (!any) {
        out.record.bpmp.push_back(motionless_paragraph(m.id, s, config.paragraph.fallback).text);
        ++out.fallback;
        continue;
      }
      const OrganizeResult r = organize_paragraph(list, config.paragraph, client, s);
      out.record.bpmp.push_back(r.paragraph.text);
      (r.source == "llm" ? out.llm : out.fallback) += 1;
    }
    out.motion = std::move(m);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

std::vector<AnnotationRecord> pick(const std::map<std::string, AnnotationRecord>& all,
                                   const std::vector<std::string>& ids) {
  std::vector<AnnotationRecord> out;
  for (const auto& id : ids) out.push_back(all.at(id));
  return out;
}

}  // namespace

PipelineSummary run_pipeline(const PipelineConfig& config, CompletionClient* client) {
  config.validate();
  if (!fs::is_directory(config.input_dir)) throw Error("pipeline: no such directory " + config.input_dir.string());
  const auto files = list_motion_files(config.input_dir);
  if (files.empty()) throw Error("pipeline: no motion files in " + config.input_dir.string());
  const ThresholdTable thresholds =
      config.thresholds_path ? ThresholdTable::load(config.thresholds_path->string()) : config.thresholds;

  std::vector<MotionOutcome> outcomes(files.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < files.size(); i = next++) {
      outcomes[i] = process_motion(files[i], config, thresholds, client);
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min<int>(config.threads, static_cast<int>(files.size()));
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  PipelineSummary summary;
  summary.motions_found = static_cast<int>(files.size());
  std::map<std::string, AnnotationRecord> records;
  std::map<std::string, const MotionSequence*> motions;
  for (size_t i = 0; i < files.size(); ++i) {
    auto& o = outcomes[i];
    const std::string name = files[i].filename().string();
    if (!o.error.empty()) {
      summary.failures[name] = o.error;
      continue;
    }
    if (records.count(o.record.motion_id)) {
      summary.failures[name] = "duplicate motion id " + o.record.motion_id;
      continue;
    }
    summary.snippets += static_cast<int>(o.record.bpmsd.size());
    summary.empty_snippets += static_cast<int>(std::count(o.record.bpmsd.begin(), o.record.bpmsd.end(), ""));
    summary.paragraphs += static_cast<int>(o.record.bpmp.size());
    summary.llm_paragraphs += o.llm;
    summary.fallback_paragraphs += o.fallback;
    motions[o.record.motion_id] = &*o.motion;
    records[o.record.motion_id] = o.record;
  }
  summary.motions_processed = static_cast<int>(records.size());
  if (records.empty()) throw Error("pipeline: every motion failed; first error: " + summary.failures.begin()->second);

  fs::create_directories(config.output_dir / "motions");
  for (const auto& [id, m] : motions) write_motion(config.output_dir / "motions" / (id + ".mofg"), *m);

  std::vector<AnnotationRecord> all;
  std::vector<std::string> ids;
  for (const auto& [id, r] : records) {
    all.push_back(r);
    ids.push_back(id);
  }
  write_annotations(config.output_dir, "all", all);

  DatasetSplit split;
  if (ids.size() >= 3) {
    split = split_dataset(ids, config.split_seed);
  } else {
    split.train = ids;  // too few motions to hold anything out
  }
  write_split(config.output_dir, split);
  write_annotations(config.output_dir, "train", pick(records, split.train));
  write_annotations(config.output_dir, "val", pick(records, split.val));
  write_annotations(config.output_dir, "test", pick(records, split.test));
  summary.train = static_cast<int>(split.train.size());
  summary.val = static_cast<int>(split.val.size());
  summary.test = static_cast<int>(split.test.size());

  const DatasetStats stats = dataset_stats(all);
  write_file(config.output_dir / "stats.json", stats_to_json(stats).dump(2) + "\n");
  {
    std::ofstream csv(config.output_dir / "word_frequency.csv", std::ios::binary);
    write_frequency_csv(csv, stats);
    if (!csv) throw Error("pipeline: cannot write word_frequency.csv");
  }
  nlohmann::json log = pipeline_summary_to_json(summary);
  log["config"] = {{"snippet_duration_s", config.snippet_duration_s},
                   {"paragraph_mode", to_string(config.paragraph.mode)},
                   {"variants", config.variants},
                   {"seed", config.seed},
                   {"split_seed", config.split_seed}};
  write_file(config.output_dir / "pipeline_log.json", log.dump(2) + "\n");
  return summary;
}

}  // namespace bpm
