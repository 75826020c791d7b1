// bpm: command line front end for the motion description toolkit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bpm/clients.h"
#include "bpm/dataset.h"
#include "bpm/describer.h"
#include "bpm/fixtures.h"
#include "bpm/json_io.h"
#include "bpm/metrics.h"
#include "bpm/motion_io.h"
#include "bpm/orchestrator.h"
#include "bpm/random.h"
#include "bpm/segmenter.h"
#include "bpm/service.h"
#include "bpm/text_assembly.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::string config_path;
  std::optional<uint64_t> seed;
};

// --config file plus environment. Endpoints from the environment win over the
// file so that a shared config can be pointed at a different service.
struct Context {
  json raw = json::object();
  bpm::PipelineConfig pipeline;

  static Context load(const Globals& g) {
    Context c;
    if (!g.config_path.empty()) {
      try {
        c.raw = json::parse(bpm::read_file(g.config_path));
      } catch (const json::exception& e) {
        throw bpm::ParseError(g.config_path, e.what());
      }
    }
    c.pipeline = bpm::pipeline_config_from_json(c.raw);
    if (g.seed) c.pipeline.seed = *g.seed;
    return c;
  }

  uint64_t seed() const { return pipeline.seed; }

  bpm::ThresholdTable thresholds() const {
    return pipeline.thresholds_path ? bpm::ThresholdTable::load(pipeline.thresholds_path->string())
                                    : pipeline.thresholds;
  }

  json section(const char* key) const {
    if (!raw.contains(key)) return json::object();
    if (!raw.at(key).is_object()) throw bpm::ParseError(key, "must be a JSON object");
    return raw.at(key);
  }

  static std::string env(const char* name) {
    const char* v = std::getenv(name);
    return v ? v : "";
  }

  std::optional<bpm::HttpClientConfig> client_config(const char* key, const char* env_endpoint,
                                                     const char* env_key = nullptr) const {
    const json s = section(key);
    bpm::HttpClientConfig c;
    c.endpoint = env(env_endpoint);
    if (c.endpoint.empty()) c.endpoint = s.value("endpoint", std::string());
    if (c.endpoint.empty()) return std::nullopt;
    if (env_key) c.api_key = env(env_key);
    if (c.api_key.empty()) c.api_key = s.value("api_key", std::string());
    c.timeout = std::chrono::milliseconds(s.value("timeout_ms", 30000));
    c.max_concurrent = s.value("max_concurrent", 4);
    return c;
  }

  std::unique_ptr<bpm::CompletionClient> llm() const {
    const auto c = client_config("llm", "LLM_ENDPOINT", "LLM_API_KEY");
    if (!c) return nullptr;
    return std::make_unique<bpm::HttpCompletionClient>(*c);
  }

  std::unique_ptr<bpm::GeneratorBackend> t2m() const {
    const auto c = client_config("generator", "T2M_ENDPOINT");
    if (!c) return nullptr;
    return std::make_unique<bpm::HttpGenerator>(*c);
  }

  bpm::StubGenerator stub(const std::string& dir_flag) const {
    std::string dir = dir_flag;
    if (dir.empty()) dir = section("generator").value("stub_dir", std::string());
    return dir.empty() ? bpm::StubGenerator::from_bundled(pipeline.snippet_duration_s)
                       : bpm::StubGenerator::from_directory(dir, pipeline.snippet_duration_s);
  }
};

bpm::MotionSequence load_motion(const fs::path& path) {
  if (path.extension() == ".json") {
    try {
      return bpm::motion_from_json(json::parse(bpm::read_file(path)));
    } catch (const json::exception& e) {
      throw bpm::ParseError(path.string(), e.what());
    }
  }
  return bpm::read_motion(path);
}

std::vector<fs::path> expand_motion_paths(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& f : bpm::list_motion_files(in)) out.push_back(f);
    } else {
      out.emplace_back(in);
    }
  }
  return out;
}

// A motion file is described; a JSON file is either a list of texts or an
// object with "bpmsd" (and optionally "motion_id").
bpm::BpmsdList load_texts(const fs::path& path, const Context& ctx) {
  if (path.extension() == ".mofg") {
    const bpm::MotionSequence m = bpm::read_motion(path);
    return {m.id, bpm::describe_motion(m, ctx.pipeline.snippet_duration_s, ctx.thresholds())};
  }
  json j;
  try {
    j = json::parse(bpm::read_file(path));
    if (j.is_array()) return {path.stem().string(), j.get<std::vector<std::string>>()};
    if (j.is_object() && j.contains("bpmsd")) {
      return {j.value("motion_id", path.stem().string()), j.at("bpmsd").get<std::vector<std::string>>()};
    }
    if (j.is_object() && j.contains("frames")) {
      const bpm::MotionSequence m = bpm::motion_from_json(j);
      return {m.id, bpm::describe_motion(m, ctx.pipeline.snippet_duration_s, ctx.thresholds())};
    }
  } catch (const json::exception& e) {
    throw bpm::ParseError(path.string(), e.what());
  }
  throw bpm::ParseError(path.string(), "expected a motion, a JSON list of texts or an object with \"bpmsd\"");
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    bpm::write_file(out, j.dump(2) + "\n");
  }
}

bpm::metrics::Embeddings synthetic_embeddings(int rows, int dims, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  bpm::metrics::Embeddings x(rows, dims);
  for (int i = 0; i < rows; ++i)
    for (int d = 0; d < dims; ++d) x(i, d) = n(rng);
  return x;
}

bpm::metrics::Embeddings take_rows(const bpm::metrics::Embeddings& x, const std::vector<int>& rows) {
  bpm::metrics::Embeddings out(rows.size(), x.cols());
  for (size_t i = 0; i < rows.size(); ++i) out.row(i) = x.row(rows[i]);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bpm: body-part motion descriptions, datasets and metrics"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON config file (see README)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Run seed (overrides the config)");

  std::string out;
  double duration = 0.0;
  auto add_duration = [&](CLI::App* c) {
    c->add_option("--duration", duration, "Snippet duration in seconds (default from config, 0.5)");
  };

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Resample, crop, retarget and canonicalize motion files");
  std::vector<std::string> ingest_inputs;
  double max_seconds = bpm::kMaxClipSeconds;
  ingest->add_option("inputs", ingest_inputs, "Motion files (.mofg/.json) or directories")->required();
  ingest->add_option("-o,--out", out, "Output directory")->required();
  ingest->add_option("--max-seconds", max_seconds, "Crop window");

  // segment
  auto* seg = app.add_subcommand("segment", "Split a motion into snippets, or profile snippet durations");
  std::string seg_input;
  bool profile = false;
  int samples = 200;
  int threads = 1;
  seg->add_option("input", seg_input, "Motion file, or a directory with --profile")->required();
  seg->add_flag("--profile", profile, "Similarity profile over the duration grid, then select a duration");
  seg->add_option("--samples", samples, "Sampled pairs per duration (--profile)");
  seg->add_option("--threads", threads);
  seg->add_option("-o,--out", out);
  add_duration(seg);

  // describe
  auto* desc = app.add_subcommand("describe", "Describe every snippet of a motion");
  std::string desc_input;
  desc->add_option("input", desc_input, "Motion file")->required();
  desc->add_option("-o,--out", out);
  add_duration(desc);

  // assemble
  auto* asmb = app.add_subcommand("assemble", "Join snippet texts into the generator template");
  std::string texts_input;
  asmb->add_option("input", texts_input, "Motion file or JSON texts")->required();
  add_duration(asmb);

  // paragraph
  auto* para = app.add_subcommand("paragraph", "Organize snippet texts into a paragraph");
  std::string mode;
  bool prompt_only = false;
  int variant = 0;
  para->add_option("input", texts_input, "Motion file or JSON texts")->required();
  para->add_option("--mode", mode, "llm, fallback or llm-with-fallback");
  para->add_option("--variant", variant, "Variant index (changes the seed)");
  para->add_flag("--prompt", prompt_only, "Print the LLM prompt and exit");
  para->add_option("-o,--out", out);
  add_duration(para);

  // augment
  auto* aug = app.add_subcommand("augment", "Random snippet-aligned crops with their texts");
  std::string aug_input;
  int count = 10;
  aug->add_option("input", aug_input, "Motion file")->required();
  aug->add_option("-n,--count", count, "Number of crops");
  aug->add_option("-o,--out", out, "Output directory")->required();
  add_duration(aug);

  // split
  auto* split = app.add_subcommand("split", "Train/val/test split of motion ids");
  std::string split_input;
  bpm::SplitRatios ratios;
  split->add_option("input", split_input, "Motion directory or a text file with one id per line")->required();
  split->add_option("-o,--out", out, "Directory for train.txt/val.txt/test.txt")->required();
  split->add_option("--train", ratios.train);
  split->add_option("--val", ratios.val);
  split->add_option("--test", ratios.test);

  // stats
  auto* stats = app.add_subcommand("stats", "Word statistics of an annotation set");
  std::string stats_dir, split_name = "all", csv;
  int top = 100;
  stats->add_option("dir", stats_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  stats->add_option("--split", split_name, "all, train, val or test");
  stats->add_option("--top", top, "Most frequent words to list");
  stats->add_option("--csv", csv, "Also write word frequencies as CSV");
  stats->add_option("-o,--out", out);

  // eval
  auto* eval = app.add_subcommand("eval", "Retrieval and distribution metrics over embedding files");
  std::string text_path, motion_path, ref_path, method = "model", json_out;
  std::vector<std::string> mm_paths;
  int reps = 20, sample_rows = 0, synthetic = 0;
  bpm::metrics::EvalOptions eval_opts;
  eval->add_option("--text", text_path, "Text embeddings (matrix file, one row per sample)");
  eval->add_option("--motion", motion_path, "Motion embeddings, row-aligned with --text");
  eval->add_option("--reference", ref_path, "Real-motion embeddings for FID (default: --motion)");
  eval->add_option("--mm", mm_paths, "Embeddings of repeated generations, one file per prompt");
  eval->add_option("--synthetic", synthetic, "Ignore files and use N synthetic rows");
  eval->add_option("--reps", reps, "Repetitions");
  eval->add_option("--sample", sample_rows, "Rows drawn per repetition (0 = all)");
  eval->add_option("--pool", eval_opts.pool_size, "R-precision pool size");
  eval->add_option("--diversity-pairs", eval_opts.diversity_pairs);
  eval->add_option("--threads", threads);
  eval->add_option("--method", method, "Row label");
  eval->add_option("--json", json_out, "Also write the report as JSON");

  // edit
  auto* edit = app.add_subcommand("edit", "Generate, edit snippet texts, regenerate");
  std::string request_path, coarse, backend = "stub", stub_dir, initial_path;
  std::vector<std::string> edit_args;
  std::optional<int> target_frames;
  edit->add_option("--request", request_path, "EditRequest JSON (flags below are ignored)");
  edit->add_option("--coarse", coarse, "Coarse description");
  edit->add_option("-e,--edit", edit_args, "INDEX=TEXT, repeatable")->delimiter('\0');
  edit->add_option("--backend", backend, "stub or t2m");
  edit->add_option("--stub-dir", stub_dir, "Stub fixture directory (*.mofg + captions.json)");
  edit->add_option("--initial", initial_path, "Edit this motion instead of generating one");
  edit->add_option("--target-frames", target_frames);
  edit->add_option("-o,--out", out, "Write initial.mofg/edited.mofg and result.json here");
  add_duration(edit);

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP API over a dataset directory");
  std::string store, host = "127.0.0.1";
  int port = 8080;
  serve->add_option("store", store, "Output directory of `bpm pipeline`")->required()->check(CLI::ExistingDirectory);
  serve->add_option("--host", host);
  serve->add_option("--port", port, "0 picks a free port");
  serve->add_option("--stub-dir", stub_dir);
  add_duration(serve);

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Build a dataset directory from raw motions");
  std::string in_dir;
  int variants = 0;
  pipe->add_option("--in", in_dir, "Raw motion directory (overrides input_dir)");
  pipe->add_option("-o,--out", out, "Output directory (overrides output_dir)");
  pipe->add_option("--mode", mode, "Paragraph mode");
  pipe->add_option("--variants", variants, "Paragraphs per motion");
  pipe->add_option("--threads", threads);
  add_duration(pipe);

  // fixtures
  auto* fix = app.add_subcommand("fixtures", "Write the bundled synthetic motions and captions");
  fix->add_option("-o,--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    Context ctx = Context::load(g);
    if (duration > 0.0) ctx.pipeline.snippet_duration_s = duration;
    const double dur = ctx.pipeline.snippet_duration_s;

    if (*ingest) {
      int written = 0;
      for (const auto& path : expand_motion_paths(ingest_inputs)) {
        const bpm::MotionSequence raw = load_motion(path);
        const bpm::MotionSequence m =
            bpm::preprocess_motion(raw, bpm::motion_seed(ctx.seed(), raw.id), max_seconds);
        bpm::write_motion(fs::path(out) / (m.id + ".mofg"), m);
        std::cout << m.id << "\t" << raw.frame_count() << " @ " << raw.fps << " fps -> " << m.frame_count()
                  << " @ 20 fps\n";
        ++written;
      }
      std::cerr << written << " motions written to " << out << "\n";
    } else if (*seg) {
      if (profile) {
        std::vector<bpm::MotionSequence> motions;
        for (const auto& path : expand_motion_paths({seg_input})) motions.push_back(load_motion(path));
        const auto p = bpm::duration_similarity_profile(motions, bpm::default_duration_grid(), samples,
                                                        ctx.seed(), bpm::pose_descriptor, threads);
        std::ostringstream csv_text;
        bpm::write_profile_csv(csv_text, p);
        if (out.empty()) {
          std::cout << csv_text.str();
        } else {
          bpm::write_file(out, csv_text.str());
        }
        std::cerr << "selected duration: " << bpm::select_duration(p) << " s\n";
      } else {
        const bpm::MotionSequence m = load_motion(seg_input);
        json list = json::array();
        for (const auto& s : bpm::segment(m, dur)) {
          list.push_back({{"index", s.index}, {"start", s.frames.start}, {"end", s.frames.end}});
        }
        emit({{"motion_id", m.id},
              {"fps", m.fps},
              {"frames", m.frame_count()},
              {"step", bpm::snippet_step(dur, m.fps)},
              {"snippets", list}},
             out);
      }
    } else if (*desc) {
      const bpm::MotionSequence m = load_motion(desc_input);
      emit({{"motion_id", m.id}, {"bpmsd", bpm::describe_motion(m, dur, ctx.thresholds())}}, out);
    } else if (*asmb) {
      std::cout << bpm::assemble_template(load_texts(texts_input, ctx).texts) << "\n";
    } else if (*para) {
      const bpm::BpmsdList texts = load_texts(texts_input, ctx);
      if (prompt_only) {
        std::cout << bpm::build_paragraph_prompt(texts.texts);
        return 0;
      }
      bpm::ParagraphOptions options = ctx.pipeline.paragraph;
      if (!mode.empty()) options.mode = bpm::parse_paragraph_mode(mode);
      const auto client = ctx.llm();
      const uint64_t seed = bpm::derive_seed(bpm::motion_seed(ctx.seed(), texts.motion_id), 1000 + variant);
      const bpm::OrganizeResult r = bpm::organize_paragraph(texts, options, client.get(), seed);
      emit({{"motion_id", texts.motion_id},
            {"text", r.paragraph.text},
            {"source", r.source},
            {"attempts", r.attempts},
            {"validation", bpm::validation_report_to_json(r.report)}},
           out);
    } else if (*aug) {
      const bpm::MotionSequence m = load_motion(aug_input);
      const auto texts = bpm::describe_motion(m, dur, ctx.thresholds());
      bpm::StringListMap lists;
      for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(bpm::derive_seed(bpm::motion_seed(ctx.seed(), m.id), i));
        bpm::AugmentedClip clip = bpm::temporal_augment(m, texts, dur, rng);
        const std::string id = m.id + "_aug" + std::to_string(i);
        clip.motion.id = id;
        bpm::write_motion(fs::path(out) / (id + ".mofg"), clip.motion);
        lists[id] = clip.texts;
      }
      bpm::write_file(fs::path(out) / "augment.bpmsd.json", bpm::serialize_string_lists(lists));
      std::cerr << count << " crops written to " << out << "\n";
    } else if (*split) {
      std::vector<std::string> ids;
      if (fs::is_directory(split_input)) {
        for (const auto& f : bpm::list_motion_files(split_input)) ids.push_back(f.stem().string());
      } else {
        std::istringstream lines(bpm::read_file(split_input));
        for (std::string line; std::getline(lines, line);) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (!line.empty()) ids.push_back(line);
        }
      }
      const uint64_t seed = g.seed ? *g.seed : ctx.pipeline.split_seed;
      const bpm::DatasetSplit s = bpm::split_dataset(ids, seed, ratios);
      bpm::write_split(out, s);
      std::cout << "train " << s.train.size() << "\nval " << s.val.size() << "\ntest " << s.test.size() << "\n";
    } else if (*stats) {
      const bpm::DatasetStats st = bpm::dataset_stats(bpm::read_annotations(stats_dir, split_name));
      if (!csv.empty()) {
        std::ofstream f(csv);
        if (!f) throw bpm::Error("cannot write " + csv);
        bpm::write_frequency_csv(f, st, top);
      }
      emit(bpm::stats_to_json(st, top), out);
    } else if (*eval) {
      namespace m = bpm::metrics;
      m::Embeddings text, motion, reference;
      std::vector<m::Embeddings> groups;
      if (synthetic > 0) {
        // Motion = text + noise, so retrieval is better than chance.
        std::mt19937_64 rng(ctx.seed());
        text = synthetic_embeddings(synthetic, 16, rng);
        motion = text + 0.5 * synthetic_embeddings(synthetic, 16, rng);
        reference = synthetic_embeddings(synthetic, 16, rng);
        for (int i = 0; i < std::min(synthetic, 32); ++i) {
          groups.push_back(motion.row(i).replicate(10, 1) + 0.3 * synthetic_embeddings(10, 16, rng));
        }
      } else {
        if (text_path.empty() || motion_path.empty()) throw bpm::Error("eval needs --text and --motion (or --synthetic)");
        text = bpm::read_matrix(text_path);
        motion = bpm::read_matrix(motion_path);
        reference = ref_path.empty() ? motion : bpm::read_matrix(ref_path);
        for (const auto& p : mm_paths) groups.push_back(bpm::read_matrix(p));
      }
      if (text.rows() != motion.rows()) {
        throw bpm::Error("eval: --text has " + std::to_string(text.rows()) + " rows, --motion has " +
                         std::to_string(motion.rows()));
      }
      const int n = static_cast<int>(text.rows());
      const int take = sample_rows > 0 ? std::min(sample_rows, n) : n;
      if (!eval->count("--diversity-pairs") && 2 * eval_opts.diversity_pairs > take) {
        eval_opts.diversity_pairs = take / 2;
        std::cerr << "note: " << take << " rows, diversity uses " << eval_opts.diversity_pairs << " pairs\n";
      }
      auto sample = [&](uint64_t seed) {
        if (take == n) return m::EvalSample{text, motion, reference, groups};
        std::vector<int> rows(n);
        std::iota(rows.begin(), rows.end(), 0);
        std::mt19937_64 rng(seed);
        std::shuffle(rows.begin(), rows.end(), rng);
        rows.resize(take);
        return m::EvalSample{take_rows(text, rows), take_rows(motion, rows), reference, groups};
      };
      m::MetricReport report;
      report.rows.emplace_back(method, m::evaluate_repeated(sample, reps, ctx.seed(), eval_opts, threads));
      std::cout << m::format_table(report);
      if (!json_out.empty()) bpm::write_file(json_out, m::report_to_json(report).dump(2) + "\n");
    } else if (*edit) {
      bpm::EditRequest req;
      if (!request_path.empty()) {
        try {
          req = bpm::edit_request_from_json(json::parse(bpm::read_file(request_path)));
        } catch (const json::exception& e) {
          throw bpm::ParseError(request_path, e.what());
        }
      } else {
        req.coarse_text = coarse;
        req.backend = backend;
        req.target_frames = target_frames;
        req.seed = ctx.seed();
        if (!initial_path.empty()) req.initial = load_motion(initial_path);
        for (const auto& arg : edit_args) {
          const auto eq = arg.find('=');
          if (eq == std::string::npos) throw bpm::Error("--edit expects INDEX=TEXT, got \"" + arg + "\"");
          try {
            req.edits.emplace_back(std::stoi(arg.substr(0, eq)), arg.substr(eq + 1));
          } catch (const std::exception&) {
            throw bpm::Error("--edit: bad index in \"" + arg + "\"");
          }
        }
      }
      std::unique_ptr<bpm::GeneratorBackend> remote;
      std::optional<bpm::StubGenerator> stub;
      bpm::GeneratorBackend* gen = nullptr;
      if (req.backend == "stub") {
        stub.emplace(ctx.stub(stub_dir));
        gen = &*stub;
      } else if (req.backend == "t2m") {
        remote = ctx.t2m();
        if (!remote) throw bpm::Error("backend t2m needs T2M_ENDPOINT or generator.endpoint in the config");
        gen = remote.get();
      } else {
        throw bpm::Error("unknown backend \"" + req.backend + "\" (stub or t2m)");
      }
      const bpm::EditResult r = bpm::edit_motion(req, *gen, {dur, ctx.thresholds()});
      if (out.empty()) {
        std::cout << bpm::edit_result_to_json(r).dump(2) << "\n";
      } else {
        bpm::write_motion(fs::path(out) / "initial.mofg", r.initial);
        bpm::write_motion(fs::path(out) / "edited.mofg", r.edited);
        const json summary = {{"before", r.before}, {"after", r.after}, {"detail", r.detail}};
        bpm::write_file(fs::path(out) / "result.json", summary.dump(2) + "\n");
        std::cout << summary.dump(2) << "\n";
      }
    } else if (*serve) {
      bpm::StubGenerator stub = ctx.stub(stub_dir);
      const auto remote = ctx.t2m();
      const auto llm = ctx.llm();
      std::map<std::string, bpm::GeneratorBackend*> backends{{"stub", &stub}};
      if (remote) backends["t2m"] = remote.get();
      const json svc = ctx.section("service");
      if (!serve->count("--host")) host = svc.value("host", host);
      if (!serve->count("--port")) port = svc.value("port", port);
      bpm::Service service({store, dur, ctx.thresholds(), ctx.pipeline.paragraph}, backends, llm.get());
      const int bound = service.start(host, port);
      std::cerr << "serving " << store << " on http://" << host << ":" << bound << "\n";
      service.wait();
    } else if (*pipe) {
      bpm::PipelineConfig c = ctx.pipeline;
      if (!in_dir.empty()) c.input_dir = in_dir;
      if (!out.empty()) c.output_dir = out;
      if (!mode.empty()) c.paragraph.mode = bpm::parse_paragraph_mode(mode);
      if (variants > 0) c.variants = variants;
      if (pipe->count("--threads")) c.threads = threads;
      const auto llm = ctx.llm();
      const bpm::PipelineSummary s = bpm::run_pipeline(c, llm.get());
      std::cout << bpm::pipeline_summary_to_json(s).dump(2) << "\n";
      if (!s.failures.empty()) return 2;
    } else if (*fix) {
      json captions = json::object();
      for (const auto& f : bpm::fixtures::bundled()) {
        bpm::write_motion(fs::path(out) / (f.motion.id + ".mofg"), f.motion);
        captions[f.motion.id] = f.coarse_text;
      }
      bpm::write_file(fs::path(out) / "captions.json", captions.dump(2) + "\n");
      std::cerr << captions.size() << " fixtures written to " << out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "bpm: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
