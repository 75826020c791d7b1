#include <chrono>
#include <filesystem>
#include <random>
#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bpm/clients.h"
#include "bpm/dataset.h"
#include "bpm/error.h"
#include "bpm/fixtures.h"
#include "bpm/json_io.h"
#include "bpm/motion_io.h"
#include "bpm/motion_ops.h"
#include "bpm/orchestrator.h"
#include "bpm/segmenter.h"

// After Eigen: <resolv.h> defines a `_res` macro that clashes with Eigen.
#include <httplib.h>

namespace bpm {
namespace {

namespace fs = std::filesystem;
using std::chrono::milliseconds;

std::string data_path(const std::string& name) { return std::string(BPM_TEST_DATA_DIR) + "/" + name; }

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bpm_orchestrator_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

BpmsdList list_000314() {
  const auto records = deserialize_annotations(read_file(data_path("000314.bpmsd.json")),
                                               read_file(data_path("000314.bpmp.json")));
  return {records.at(0).motion_id, records.at(0).bpmsd};
}

ParagraphOptions fast_options(ParagraphMode mode, std::vector<milliseconds>* sleeps = nullptr) {
  ParagraphOptions o;
  o.mode = mode;
  o.retry.sleep = [sleeps](milliseconds d) {
    if (sleeps) sleeps->push_back(d);
  };
  return o;
}

std::vector<std::string> random_lexicon_texts(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::string> texts(1 + rng() % 8);
  for (auto& t : texts) {
    if (rng() % 4 == 0) continue;
    DeltaSet d;
    for (auto& v : d.translation) v = 0.25 * Eigen::Vector3d(u(rng), u(rng), u(rng)) * (rng() % 3 == 0);
    for (auto& a : d.angle_deg) a = 70.0 * u(rng) * (rng() % 3 == 0);
    t = render_bpmsd(classify_deltas(d, {}));
  }
  if (std::all_of(texts.begin(), texts.end(), [](const std::string& s) { return s.empty(); })) {
    texts[0] = "Bend your left knee.";
  }
  return texts;
}

TEST(OrganizeTest, FallbackOn000314) {
  const BpmsdList list = list_000314();
  const OrganizeResult a = organize_paragraph(list, fast_options(ParagraphMode::kFallback), nullptr, 7);
  const OrganizeResult b = organize_paragraph(list, fast_options(ParagraphMode::kFallback), nullptr, 7);
  EXPECT_EQ(a.source, "fallback");
  EXPECT_EQ(a.paragraph.text, b.paragraph.text);
  EXPECT_EQ(a.report.coverage, 1.0);
  EXPECT_TRUE(a.report.extra_parts.empty());
  EXPECT_EQ(a.attempts, 0);
}

TEST(OrganizeTest, LlmEchoIsReturnedUnmodified) {
  const BpmsdList list = list_000314();
  const std::string valid = fallback_paragraph(list, 3).text;
  std::string seen_prompt;
  StubCompletionClient client([&](const std::string& prompt, int) {
    seen_prompt = prompt;
    return valid;
  });
  const OrganizeResult r = organize_paragraph(list, fast_options(ParagraphMode::kLlm), &client);
  EXPECT_EQ(r.source, "llm");
  EXPECT_EQ(r.paragraph.text, valid);
  EXPECT_EQ(r.attempts, 1);
  EXPECT_EQ(seen_prompt, build_paragraph_prompt(list.texts));
}

TEST(OrganizeTest, ExtraBodyPartIsRejectedWithBackoff) {
  const BpmsdList list = list_000314();
  const std::string toes = fallback_paragraph(list, 3).text + " He wiggles his toes.";
  StubCompletionClient client([&](const std::string&, int) { return toes; });
  std::vector<milliseconds> sleeps;
  try {
    organize_paragraph(list, fast_options(ParagraphMode::kLlm, &sleeps), &client);
    FAIL() << "expected rejection";
  } catch (const ParagraphRejected& e) {
    ASSERT_TRUE(e.report().has_value());
    EXPECT_EQ(e.report()->extra_parts, std::vector<std::string>{"toes"});
    EXPECT_NE(std::string(e.what()).find("stub"), std::string::npos);
  }
  EXPECT_EQ(client.calls(), 3);
  EXPECT_EQ(sleeps, (std::vector<milliseconds>{milliseconds(500), milliseconds(1000)}));

  const OrganizeResult r = organize_paragraph(list, fast_options(ParagraphMode::kLlmWithFallback), &client, 3);
  EXPECT_EQ(r.source, "fallback");
  EXPECT_EQ(r.paragraph.text, fallback_paragraph(list, 3).text);
  EXPECT_EQ(r.attempts, 3);
}

TEST(OrganizeTest, SecondAttemptCanSucceed) {
  const BpmsdList list = list_000314();
  const std::string valid = fallback_paragraph(list, 0).text;
  StubCompletionClient client([&](const std::string&, int call) { return call == 0 ? std::string("nonsense") : valid; });
  const OrganizeResult r = organize_paragraph(list, fast_options(ParagraphMode::kLlm), &client);
  EXPECT_EQ(r.source, "llm");
  EXPECT_EQ(r.attempts, 2);
}

TEST(OrganizeTest, AuthErrorIsNotRetried) {
  const BpmsdList list = list_000314();
  StubCompletionClient client(
      [](const std::string&, int) -> std::string { throw ServiceError("http://llm.invalid/v1", "HTTP 401", 401); });
  try {
    organize_paragraph(list, fast_options(ParagraphMode::kLlm), &client);
    FAIL() << "expected an error";
  } catch (const ParagraphRejected& e) {
    EXPECT_NE(std::string(e.what()).find("http://llm.invalid/v1"), std::string::npos);
    EXPECT_FALSE(e.report().has_value());
  }
  EXPECT_EQ(client.calls(), 1);
}

TEST(OrganizeTest, LlmModeWithoutClientThrows) {
  EXPECT_THROW(organize_paragraph(list_000314(), fast_options(ParagraphMode::kLlm), nullptr), Error);
  EXPECT_THROW(organize_paragraph({"x", {"", ""}}, fast_options(ParagraphMode::kFallback), nullptr), Error);
}

// Replies that a misbehaving LLM might send.
std::string adversarial_reply(const std::vector<std::string>& texts, uint64_t kind, std::mt19937_64& rng) {
  switch (kind % 7) {
    case 0:
      return "";
    case 1:
      return "I cannot help with that.";
    case 2:
      return fallback_paragraph({"x", texts}, rng()).text + " Then he shakes his head and taps his toes.";
    case 3: {
      std::vector<std::string> dropped = texts;
      for (auto& t : dropped) {
        if (!t.empty()) {
          t.clear();
          break;
        }
      }
      if (std::all_of(dropped.begin(), dropped.end(), [](const auto& s) { return s.empty(); })) return "He waits.";
      return fallback_paragraph({"x", dropped}, rng()).text;
    }
    case 4:
      throw ServiceError("http://llm.invalid", "connection refused");
    case 5:
      return std::string(5000, 'x');
    default:
      return "### Output ###: The person moves his fingers and his chest.";
  }
}

TEST(OrganizeTest, LlmWithFallbackNeverEmitsInvalidParagraph) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto texts = random_lexicon_texts(rng);
    const uint64_t kind = rng();
    StubCompletionClient client([&](const std::string&, int) { return adversarial_reply(texts, kind, rng); });
    const OrganizeResult r =
        organize_paragraph({"m", texts}, fast_options(ParagraphMode::kLlmWithFallback), &client, i);
    const ValidationReport v = validate_paragraph(r.paragraph.text, texts);
    ASSERT_TRUE(v.passes(0.9)) << i << ": " << r.paragraph.text;
  }
}

TEST(StubGeneratorTest, ExactMatchReturnsFixture) {
  StubGenerator stub = StubGenerator::from_bundled();
  for (const auto& f : stub.fixtures()) {
    const MotionSequence m = stub.generate({f.coarse_text, f.detailed_text, std::nullopt});
    EXPECT_EQ(m, f.motion) << f.id;
  }
  EXPECT_EQ(stub.calls(), static_cast<int>(stub.fixtures().size()));
}

TEST(StubGeneratorTest, MatchesExhaustiveScorer) {
  StubGenerator stub = StubGenerator::from_bundled();
  std::mt19937_64 rng(5);
  std::vector<std::string> vocab;
  for (const auto& f : stub.fixtures()) {
    for (const auto& t : stub_tokens(f.coarse_text + " " + f.detailed_text)) vocab.push_back(t);
  }
  for (int i = 0; i < 300; ++i) {
    std::string coarse = "a";
    for (int k = 0; k < 1 + static_cast<int>(rng() % 12); ++k) coarse += " " + vocab[rng() % vocab.size()];
    const GeneratorRequest req{coarse, std::nullopt, std::nullopt};
    // Oracle: Jaccard with explicit sets, first maximum in id order.
    const auto qt = stub_tokens(coarse + " <EMPTY>");
    const std::set<std::string> q(qt.begin(), qt.end());
    std::string best;
    double best_score = -1;
    for (const auto& f : stub.fixtures()) {
      const auto ft = stub_tokens(f.coarse_text + " " + f.detailed_text);
      const std::set<std::string> s(ft.begin(), ft.end());
      std::set<std::string> uni = q;
      uni.insert(s.begin(), s.end());
      const double score = static_cast<double>(q.size() + s.size() - uni.size()) / uni.size();
      if (score > best_score || (score == best_score && f.id < best)) {
        best_score = score;
        best = f.id;
      }
    }
    EXPECT_EQ(stub.nearest(req).id, best) << coarse;
  }
}

TEST(StubGeneratorTest, ContractErrors) {
  StubGenerator stub = StubGenerator::from_bundled();
  EXPECT_THROW(stub.generate({"", std::nullopt, std::nullopt}), Error);
  EXPECT_THROW(stub.generate({"  ", std::nullopt, std::nullopt}), Error);
  EXPECT_THROW(StubGenerator({}), Error);
  // Omitted detail and an all-motionless detail are both served.
  EXPECT_NO_THROW(stub.generate({"a person", std::nullopt, std::nullopt}));
  EXPECT_NO_THROW(stub.generate({"a person", std::string("<Motionless> <SEP> <Motionless>"), std::nullopt}));
  EXPECT_EQ(stub_tokens("<Motionless> <SEP> Bend your knees."),
            (std::vector<std::string>{"<Motionless>", "bend", "your", "knees"}));
}

TEST(StubGeneratorTest, FromDirectory) {
  const fs::path dir = temp_dir("stubdir");
  nlohmann::json captions;
  for (const auto& f : fixtures::bundled()) {
    write_motion(dir / (f.motion.id + ".mofg"), f.motion);
    captions[f.motion.id] = f.coarse_text;
  }
  write_file(dir / "captions.json", captions.dump());
  StubGenerator stub = StubGenerator::from_directory(dir);
  ASSERT_EQ(stub.fixtures().size(), 10u);
  EXPECT_EQ(stub.nearest({"a person walks forward", std::nullopt, std::nullopt}).id, "fx001");
}

// Picks a fixture pair with equal snippet counts whose texts differ.
std::pair<const StubFixture*, const StubFixture*> equal_length_pair(const StubGenerator& stub) {
  for (const auto& a : stub.fixtures()) {
    for (const auto& b : stub.fixtures()) {
      if (a.id != b.id && parse_template(a.detailed_text).size() == parse_template(b.detailed_text).size() &&
          a.detailed_text != b.detailed_text && b.detailed_text.find_first_not_of("<Motionless> SEP") != std::string::npos) {
        return {&a, &b};
      }
    }
  }
  return {nullptr, nullptr};
}

TEST(EditTest, EditingToFixtureBTextsReturnsB) {
  StubGenerator stub = StubGenerator::from_bundled();
  const auto [a, b] = equal_length_pair(stub);
  ASSERT_NE(a, nullptr);
  ASSERT_EQ(stub.nearest({a->coarse_text, std::nullopt, std::nullopt}).id, a->id);

  EditRequest req;
  req.coarse_text = a->coarse_text;
  const auto b_texts = parse_template(b->detailed_text);
  for (size_t k = 0; k < b_texts.size(); ++k) req.edits.emplace_back(static_cast<int>(k), b_texts[k]);
  const EditResult r = edit_motion(req, stub);
  EXPECT_EQ(r.initial, a->motion);
  EXPECT_EQ(r.before, parse_template(a->detailed_text));
  EXPECT_EQ(r.after, b_texts);
  EXPECT_EQ(r.edited, b->motion);
  EXPECT_EQ(stub.calls(), 2);
}

TEST(EditTest, EmptyEditListKeepsDescriptions) {
  StubGenerator stub = StubGenerator::from_bundled();
  EditRequest req;
  req.coarse_text = "a person waves with the right hand";
  const EditResult r = edit_motion(req, stub);
  EXPECT_EQ(r.before, r.after);
  EXPECT_EQ(r.detail, assemble_template(r.before));
  // Edit locality under the stub: same conditioning, same motion.
  const MotionSequence again = stub.generate({req.coarse_text, r.detail, r.initial.frame_count()});
  EXPECT_EQ(r.edited, again);
}

TEST(EditTest, OutOfRangeIndexFailsBeforeAnyBackendCall) {
  StubGenerator stub = StubGenerator::from_bundled();
  EditRequest req;
  req.coarse_text = "a person walks forward";
  req.edits = {{99, "Bend your knees."}};
  EXPECT_THROW(edit_motion(req, stub), Error);
  EXPECT_EQ(stub.calls(), 0);

  // Against a known 7-snippet motion every index >= 7 is caught up front.
  req.initial = fixtures::forward_walk(70, 1.0, "walk7");
  ASSERT_EQ(describe_motion(*req.initial, 0.5).size(), 7u);
  for (int index : {7, 12, 99}) {
    req.edits = {{index, "Bend your knees."}};
    EXPECT_THROW(edit_motion(req, stub), Error);
  }
  EXPECT_EQ(stub.calls(), 0);
  req.edits = {{6, "Bend your knees."}};
  EXPECT_NO_THROW(edit_motion(req, stub));
  EXPECT_EQ(stub.calls(), 1);
}

TEST(EditTest, IndexBeyondGeneratedLengthFailsBeforeRegeneration) {
  StubGenerator stub = StubGenerator::from_bundled();
  EditRequest req;
  req.coarse_text = "a person raises the right leg";
  req.edits = {{15, "Bend your knees."}};
  EXPECT_THROW(edit_motion(req, stub), Error);
  EXPECT_EQ(stub.calls(), 1);
}

TEST(EditTest, RejectsBadRequests) {
  StubGenerator stub = StubGenerator::from_bundled();
  EditRequest req;
  req.coarse_text = "a person walks";
  req.edits = {{1, "a"}, {1, "b"}};
  EXPECT_THROW(edit_motion(req, stub), Error);
  req.edits = {{-1, "a"}};
  EXPECT_THROW(edit_motion(req, stub), Error);
  req.edits.clear();
  req.coarse_text = "";
  EXPECT_THROW(edit_motion(req, stub), Error);
  EXPECT_EQ(stub.calls(), 0);
}

TEST(EditTest, JsonRoundtrip) {
  EditRequest req;
  req.coarse_text = "a person walks";
  req.edits = {{2, "Bend your knees."}, {0, ""}};
  req.target_frames = 80;
  req.initial = fixtures::standing(5, "s");
  const EditRequest back = edit_request_from_json(edit_request_to_json(req));
  EXPECT_EQ(back.coarse_text, req.coarse_text);
  EXPECT_EQ(back.edits, req.edits);
  EXPECT_EQ(back.target_frames, req.target_frames);
  ASSERT_TRUE(back.initial.has_value());
  EXPECT_EQ(back.initial->frame_count(), 5);
}

// Minimal HTTP stand-ins for the external services.
class FakeServer {
 public:
  explicit FakeServer(std::function<void(httplib::Server&)> routes) {
    routes(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST(HttpClientTest, CompletionContract) {
  std::string auth;
  FakeServer fake([&](httplib::Server& s) {
    s.Post("/v1/complete", [&](const httplib::Request& req, httplib::Response& res) {
      auth = req.get_header_value("Authorization");
      const auto body = nlohmann::json::parse(req.body);
      res.set_content(nlohmann::json{{"text", "echo:" + body["prompt"].get<std::string>()}}.dump(), "application/json");
    });
    s.Post("/denied", [](const httplib::Request&, httplib::Response& res) {
      res.status = 401;
      res.set_content("{}", "application/json");
    });
    s.Post("/bad", [](const httplib::Request&, httplib::Response& res) { res.set_content("{\"x\":1}", "application/json"); });
  });
  HttpCompletionClient ok({fake.url("/v1/complete"), "secret", milliseconds(5000), 2});
  EXPECT_EQ(ok.complete("hi"), "echo:hi");
  EXPECT_EQ(auth, "Bearer secret");

  HttpCompletionClient denied({fake.url("/denied"), "", milliseconds(5000), 1});
  try {
    denied.complete("hi");
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_TRUE(e.is_auth());
    EXPECT_EQ(e.endpoint(), fake.url("/denied"));
  }
  HttpCompletionClient bad({fake.url("/bad"), "", milliseconds(5000), 1});
  EXPECT_THROW(bad.complete("hi"), ServiceError);
}

TEST(HttpClientTest, UnreachableEndpointNamesIt) {
  // Port 9 on localhost: nothing listens there in the test environment.
  const std::string endpoint = "http://127.0.0.1:9/generate";
  HttpGenerator gen({endpoint, "", milliseconds(2000), 1});
  const auto t0 = std::chrono::steady_clock::now();
  try {
    gen.generate({"a person walks", std::nullopt, std::nullopt});
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_NE(std::string(e.what()).find(endpoint), std::string::npos);
  }
  EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(30));
  EXPECT_THROW(HttpCompletionClient({"ftp://x", "", milliseconds(10), 1}), ServiceError);
}

TEST(HttpClientTest, GeneratorContract) {
  nlohmann::json last;
  const MotionSequence walk = fixtures::forward_walk(40, 1.0, "gen");
  FakeServer fake([&](httplib::Server& s) {
    s.Post("/t2m", [&](const httplib::Request& req, httplib::Response& res) {
      last = nlohmann::json::parse(req.body);
      res.set_content(nlohmann::json{{"motion", motion_to_json(walk)}}.dump(), "application/json");
    });
    s.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"motion": {"id": "x", "fps": 20, "frames": [{"root_position": [0]}]}})", "application/json");
    });
  });
  HttpGenerator gen({fake.url("/t2m"), "", milliseconds(5000), 1});
  const MotionSequence m = gen.generate({"a person walks", std::nullopt, 40});
  EXPECT_EQ(last["detailed_text"], "<EMPTY>");
  EXPECT_EQ(last["target_frames"], 40);
  EXPECT_EQ(m.frame_count(), 40);
  EXPECT_TRUE(is_canonical(m));
  gen.generate({"a person walks", std::string("<Motionless>"), std::nullopt});
  EXPECT_EQ(last["detailed_text"], "<Motionless>");

  HttpGenerator broken({fake.url("/broken"), "", milliseconds(5000), 1});
  EXPECT_THROW(broken.generate({"a person walks", std::nullopt, std::nullopt}), ServiceError);
}

PipelineConfig fixture_pipeline(const std::string& name, int threads, int variants = 2) {
  const fs::path root = temp_dir(name);
  for (const auto& f : fixtures::bundled()) write_motion(root / "in" / (f.motion.id + ".mofg"), f.motion);
  PipelineConfig c;
  c.input_dir = root / "in";
  c.output_dir = root / "out";
  c.variants = variants;
  c.threads = threads;
  c.seed = 11;
  c.split_seed = 3;
  return c;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = read_file(e.path());
  }
  return out;
}

TEST(PipelineTest, BundledFixtures) {
  const PipelineConfig c = fixture_pipeline("bundled", 1);
  const PipelineSummary s = run_pipeline(c);
  EXPECT_EQ(s.motions_found, 10);
  EXPECT_EQ(s.motions_processed, 10);
  EXPECT_EQ(s.paragraphs, 20);
  EXPECT_EQ(s.fallback_paragraphs, 20);
  EXPECT_EQ(s.train, 8);
  EXPECT_EQ(s.val, 1);
  EXPECT_EQ(s.test, 1);
  EXPECT_TRUE(s.failures.empty());

  const auto records = read_annotations(c.output_dir, "all");
  ASSERT_EQ(records.size(), 10u);
  for (const auto& r : records) {
    EXPECT_EQ(r.bpmp.size(), 2u) << r.motion_id;
    EXPECT_EQ(r.bpmsd, describe_motion(read_motion(c.output_dir / "motions" / (r.motion_id + ".mofg")), 0.5));
    for (const auto& p : r.bpmp) EXPECT_TRUE(validate_paragraph(p, r.bpmsd).passes(1.0)) << p;
  }
  const DatasetSplit split = read_split(c.output_dir);
  EXPECT_EQ(split.train.size() + split.val.size() + split.test.size(), 10u);
  EXPECT_EQ(read_annotations(c.output_dir, "train").size(), 8u);
  for (const char* f : {"stats.json", "word_frequency.csv", "pipeline_log.json", "test.bpmsd.json"}) {
    EXPECT_TRUE(fs::exists(c.output_dir / f)) << f;
  }
}

TEST(PipelineTest, DeterministicAcrossRunsAndThreads) {
  const PipelineConfig a = fixture_pipeline("det_a", 1);
  const PipelineConfig b = fixture_pipeline("det_b", 4);
  run_pipeline(a);
  run_pipeline(b);
  const auto first = read_tree(a.output_dir);
  EXPECT_EQ(first, read_tree(b.output_dir));
  run_pipeline(a);
  EXPECT_EQ(first, read_tree(a.output_dir));
}

TEST(PipelineTest, FailuresAreLoggedAndSkipped) {
  PipelineConfig c = fixture_pipeline("broken", 2, 1);
  write_file(c.input_dir / "zz_broken.mofg", "not a motion");
  const PipelineSummary s = run_pipeline(c);
  EXPECT_EQ(s.motions_found, 11);
  EXPECT_EQ(s.motions_processed, 10);
  ASSERT_EQ(s.failures.count("zz_broken.mofg"), 1u);
  const auto log = nlohmann::json::parse(read_file(c.output_dir / "pipeline_log.json"));
  EXPECT_TRUE(log["failures"].contains("zz_broken.mofg"));
}

TEST(PipelineTest, EmptyInputAndBadConfig) {
  PipelineConfig c;
  c.input_dir = temp_dir("empty");
  c.output_dir = temp_dir("empty_out");
  EXPECT_THROW(run_pipeline(c), Error);
  c.variants = 0;
  EXPECT_THROW(run_pipeline(c), Error);
  EXPECT_THROW(pipeline_config_from_json({{"bogus", 1}}), ParseError);
  const PipelineConfig j = pipeline_config_from_json(
      {{"input_dir", "a"}, {"output_dir", "b"}, {"paragraph_mode", "llm-with-fallback"}, {"variants", 3}});
  EXPECT_EQ(j.paragraph.mode, ParagraphMode::kLlmWithFallback);
  EXPECT_EQ(j.variants, 3);
  EXPECT_THROW(parse_paragraph_mode("gpt"), Error);
}

TEST(PreprocessTest, CapsLengthAndCanonicalizes) {
  MotionSequence m = fixtures::random_motion(300, 4);
  m.fps = 30.0;  // 10 s at 30 fps -> 200 frames at 20 fps
  const MotionSequence p = preprocess_motion(m, 1);
  EXPECT_EQ(p.fps, 20.0);
  EXPECT_EQ(p.frame_count(), 200);
  EXPECT_TRUE(is_canonical(p));
  MotionSequence longer = fixtures::random_motion(300, 4);
  EXPECT_EQ(preprocess_motion(longer, 1).frame_count(), 200);
  EXPECT_EQ(preprocess_motion(longer, 1), preprocess_motion(longer, 1));
}

}  // namespace
}  // namespace bpm
