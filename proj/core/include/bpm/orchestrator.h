#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bpm/clients.h"
#include "bpm/describer.h"
#include "bpm/motion.h"
#include "bpm/text_assembly.h"

namespace bpm {

inline constexpr double kMaxClipSeconds = 10.0;

// 20 fps, random window of at most `max_seconds`, standard skeleton, first
// frame facing +Z.
MotionSequence preprocess_motion(const MotionSequence& motion, uint64_t seed,
                                 double max_seconds = kMaxClipSeconds);

// Per-motion stream of a run seed, keyed by motion id so that results do not
// depend on file order or thread count.
uint64_t motion_seed(uint64_t seed, std::string_view motion_id);

enum class ParagraphMode { kLlm, kFallback, kLlmWithFallback };

std::string to_string(ParagraphMode mode);
// "llm", "fallback" or "llm-with-fallback".
ParagraphMode parse_paragraph_mode(const std::string& text);

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double backoff_factor = 2.0;
  // Replaced in tests to avoid real waits.
  std::function<void(std::chrono::milliseconds)> sleep;
};

struct ParagraphOptions {
  ParagraphMode mode = ParagraphMode::kFallback;
  double min_coverage = 0.9;
  RetryPolicy retry;
  FallbackOptions fallback;
};

// LLM mode ran out of attempts. `report` is the last validation result
// (absent when no reply came back at all).
class ParagraphRejected : public Error {
 public:
  ParagraphRejected(const std::string& what, std::optional<ValidationReport> report)
      : Error(what), report_(std::move(report)) {}
  const std::optional<ValidationReport>& report() const noexcept { return report_; }

 private:
  std::optional<ValidationReport> report_;
};

struct OrganizeResult {
  Bpmp paragraph;
  std::string source;  // "llm" or "fallback"
  int attempts = 0;    // LLM calls made
  ValidationReport report;
};

nlohmann::json validation_report_to_json(const ValidationReport& report);

// `client` may be null in fallback mode. `seed` picks the fallback subject.
OrganizeResult organize_paragraph(const BpmsdList& texts, const ParagraphOptions& options,
                                  CompletionClient* client, uint64_t seed = 0);

struct EditRequest {
  std::string coarse_text;
  std::vector<std::pair<int, std::string>> edits;  // snippet index, new text
  std::string backend = "stub";
  // Regeneration length; defaults to the initial motion's length.
  std::optional<int> target_frames;
  // Motion the edits refer to. When absent it is generated from coarse_text.
  std::optional<MotionSequence> initial;
  uint64_t seed = 0;  // crop seed of the preprocessing step
};

nlohmann::json edit_request_to_json(const EditRequest& request);
EditRequest edit_request_from_json(const nlohmann::json& j);

struct EditResult {
  MotionSequence initial;
  MotionSequence edited;
  std::vector<std::string> before;
  std::vector<std::string> after;
  std::string detail;  // assembled template sent with the second request
};

nlohmann::json edit_result_to_json(const EditResult& result);

struct EditOptions {
  double snippet_duration_s = 0.5;
  ThresholdTable thresholds;
};

// Generate (unless `initial` is given), preprocess, segment and describe,
// apply the edits, assemble, regenerate. Indices are checked against the
// largest possible snippet count before any backend call and against the
// actual count before the regeneration call.
EditResult edit_motion(const EditRequest& request, GeneratorBackend& backend, const EditOptions& options = {});

struct PipelineConfig {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  double snippet_duration_s = 0.5;
  // A thresholds file wins over the inline table.
  std::optional<std::filesystem::path> thresholds_path;
  ThresholdTable thresholds;
  ParagraphOptions paragraph;
  int variants = 1;
  uint64_t seed = 0;        // crops and fallback subjects
  uint64_t split_seed = 0;
  int threads = 1;

  void validate() const;
};

// Reads the JSON config layout documented in the README; unknown keys throw.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);

struct PipelineSummary {
  int motions_found = 0;
  int motions_processed = 0;
  int snippets = 0;
  int empty_snippets = 0;
  int paragraphs = 0;
  int llm_paragraphs = 0;
  int fallback_paragraphs = 0;
  std::map<std::string, std::string> failures;  // motion file -> error
  int train = 0;
  int val = 0;
  int test = 0;
};

nlohmann::json pipeline_summary_to_json(const PipelineSummary& summary);

// Output layout under output_dir:
//   motions/<id>.mofg (+ .json sidecar)   preprocessed motions
//   all.bpmsd.json, all.bpmp.json         every record
//   <split>.bpmsd.json, <split>.bpmp.json, <split>.txt for train/val/test
//   stats.json, word_frequency.csv, pipeline_log.json
// Per-motion failures are logged and skipped; an empty input throws.
PipelineSummary run_pipeline(const PipelineConfig& config, CompletionClient* client = nullptr);

}  // namespace bpm
