#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bpm/describer.h"
#include "bpm/error.h"
#include "bpm/fixtures.h"
#include "bpm/kinematics.h"

namespace bpm {
namespace {

using Eigen::Vector3d;
using fixtures::axis_angle_deg;

constexpr double kPi = 3.14159265358979323846;

PoseFrame rest_pose() { return fixtures::standing(1).frames[0]; }

// Right forearm bent forward at the elbow, upper arm rolled by `roll_deg`
// about its own axis: the wrist moves on a vertical circle while the elbow
// stays put and the elbow angle is unchanged.
PoseFrame rolled_forearm(double roll_deg) {
  PoseFrame f = rest_pose();
  f.local_rotation(kRightElbow) = axis_angle_deg(Vector3d::UnitY(), 90.0);
  f.local_rotation(kRightShoulder) = axis_angle_deg(Vector3d::UnitX(), roll_deg);
  return f;
}

// Start / end pair whose only change is the right wrist rising `height` m.
std::pair<PoseFrame, PoseFrame> raised_wrist(double height) {
  const double roll = std::asin(height / 0.5) * 180.0 / kPi;
  return {rolled_forearm(roll), rolled_forearm(-roll)};
}

Snippet snippet_of(const PoseFrame& a, const PoseFrame& b) {
  Snippet s;
  s.frames = {0, 2};
  s.start_pose = a;
  s.end_pose = b;
  return s;
}

std::string describe(const PoseFrame& a, const PoseFrame& b) {
  return describe_snippet(snippet_of(a, b), Skeleton::standard());
}

double max_abs(const DeltaSet& d, BodyPart except_translation = BodyPart::kTorso) {
  double m = std::max(std::abs(d.lean_forward_deg), std::abs(d.lean_left_deg));
  for (int p = 0; p < lexicon::kBodyPartCount; ++p) {
    if (p != static_cast<int>(except_translation)) m = std::max(m, d.translation[p].cwiseAbs().maxCoeff());
    m = std::max(m, std::abs(d.angle_deg[p]));
  }
  return m;
}

TEST(BodyPartDeltasTest, IdenticalPosesGiveZero) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const PoseFrame p = fixtures::random_pose(rng);
    EXPECT_EQ(max_abs(body_part_deltas(p, p, Skeleton::standard())), 0.0);
    EXPECT_EQ(describe(p, p), "");
  }
}

TEST(BodyPartDeltasTest, RaisedWristMovesOnlyTheRightHand) {
  const auto [a, b] = raised_wrist(0.30);
  const DeltaSet d = body_part_deltas(a, b, Skeleton::standard());
  EXPECT_NEAR(d[BodyPart::kRightHand].y(), 0.30, 1e-6);
  EXPECT_LT(std::abs(d[BodyPart::kRightHand].x()), 1e-6);
  EXPECT_LT(std::abs(d[BodyPart::kRightHand].z()), 1e-6);
  EXPECT_LT(max_abs(d, BodyPart::kRightHand), 1e-6);
}

TEST(BodyPartDeltasTest, RootYawIsReportedAndLimbsStayPut) {
  std::mt19937_64 rng(5);
  const PoseFrame a = fixtures::random_pose(rng, 20.0);
  PoseFrame b = a;
  b.root_orientation = axis_angle_deg(Vector3d::UnitY(), 30.0) * a.root_orientation;
  const DeltaSet d = body_part_deltas(a, b, Skeleton::standard());
  EXPECT_NEAR(d.angle(BodyPart::kRoot), 30.0, 1e-6);
  for (BodyPart p : {BodyPart::kHead, BodyPart::kLeftHand, BodyPart::kRightHand,
                     BodyPart::kLeftLeg, BodyPart::kRightLeg}) {
    EXPECT_LT(d[p].norm(), 1e-6) << lexicon::to_string(p);
  }
  EXPECT_LT(d[BodyPart::kRoot].norm(), 1e-9);
  EXPECT_LT(std::abs(d.angle(BodyPart::kTorso)), 1e-6);
  EXPECT_LT(std::abs(d.lean_forward_deg) + std::abs(d.lean_left_deg), 1e-6);
}

TEST(BodyPartDeltasTest, YawStaysInHalfOpenRange) {
  PoseFrame a = rest_pose();
  PoseFrame b = a;
  b.root_orientation = axis_angle_deg(Vector3d::UnitY(), 180.0);
  const double yaw = body_part_deltas(a, b, Skeleton::standard()).angle(BodyPart::kRoot);
  EXPECT_GT(yaw, -180.0);
  EXPECT_LE(yaw, 180.0);
  EXPECT_NEAR(std::abs(yaw), 180.0, 1e-9);
}

DeltaSet with_translation(BodyPart p, const Vector3d& v) {
  DeltaSet d;
  d[p] = v;
  return d;
}

TEST(ClassifyTest, WorkedExamples) {
  const ThresholdTable t;
  EXPECT_TRUE(classify_deltas(with_translation(BodyPart::kRightHand, {0, 0.03, 0}), t).empty());
  const auto slight = classify_deltas(with_translation(BodyPart::kRightHand, {0, 0.10, 0}), t);
  ASSERT_EQ(slight.size(), 1u);
  EXPECT_EQ(slight[0], (MovementCode{BodyPart::kRightHand, MovementKind::kTranslate,
                                     Direction::kUp, Magnitude::kSlight, std::nullopt}));
  DeltaSet yaw;
  yaw.angle(BodyPart::kRoot) = 40.0;
  const auto turn = classify_deltas(yaw, t);
  ASSERT_EQ(turn.size(), 1u);
  EXPECT_EQ(turn[0], (MovementCode{BodyPart::kRoot, MovementKind::kYaw, Direction::kTurnLeft,
                                   Magnitude::kPlain, std::nullopt}));
}

// Independent classifier for single-axis inputs: scan the bucket edges.
std::optional<Magnitude> oracle_bucket(double m, double eps, double lam) {
  if (m < eps) return std::nullopt;
  if (m >= lam) return Magnitude::kPlain;
  return Magnitude::kSlight;
}

TEST(ClassifyTest, BruteForceSingleAxisBuckets) {
  const ThresholdTable t;
  const Direction axis_dirs[3][2] = {{Direction::kLeft, Direction::kRight},
                                     {Direction::kUp, Direction::kDown},
                                     {Direction::kForward, Direction::kBack}};
  for (BodyPart p : {BodyPart::kRoot, BodyPart::kHead, BodyPart::kLeftHand,
                     BodyPart::kRightHand, BodyPart::kLeftLeg, BodyPart::kRightLeg}) {
    for (int axis = 0; axis < 3; ++axis) {
      for (int sign : {1, -1}) {
        for (int k = 0; k <= 300; ++k) {
          const double m = k * 0.001;
          Vector3d v = Vector3d::Zero();
          v[axis] = sign * m;
          const auto codes = classify_deltas(with_translation(p, v), t);
          const auto expected = oracle_bucket(m, 0.05, 0.15);
          ASSERT_EQ(codes.size(), expected ? 1u : 0u) << m;
          if (expected) {
            EXPECT_EQ(codes[0].magnitude, *expected);
            EXPECT_EQ(codes[0].direction, axis_dirs[axis][sign > 0 ? 0 : 1]);
            EXPECT_FALSE(codes[0].secondary.has_value());
          }
        }
      }
    }
  }
  for (BodyPart p : {BodyPart::kRoot, BodyPart::kTorso, BodyPart::kLeftElbow,
                     BodyPart::kRightKnee}) {
    const bool hinge = p != BodyPart::kRoot && p != BodyPart::kTorso;
    const double eps = hinge ? 15.0 : 10.0;
    const double lam = hinge ? 45.0 : 30.0;
    for (int k = -900; k <= 900; ++k) {
      const double deg = k * 0.1;
      DeltaSet d;
      d.angle(p) = deg;
      const auto codes = classify_deltas(d, t);
      const auto expected = oracle_bucket(std::abs(deg), eps, lam);
      ASSERT_EQ(codes.size(), expected ? 1u : 0u) << deg;
      if (expected) {
        EXPECT_EQ(codes[0].magnitude, *expected);
        if (hinge) {
          EXPECT_EQ(codes[0].direction, deg > 0 ? Direction::kBend : Direction::kStraighten);
        } else {
          EXPECT_EQ(codes[0].direction, deg > 0 ? Direction::kTurnLeft : Direction::kTurnRight);
        }
      }
    }
  }
}

TEST(ClassifyTest, DiagonalWithinMarginIsCompound) {
  const ThresholdTable t;
  auto one = [&](const Vector3d& v) {
    const auto c = classify_deltas(with_translation(BodyPart::kLeftHand, v), t);
    EXPECT_EQ(c.size(), 1u);
    return c.at(0);
  };
  const MovementCode diag = one({0.2, 0.0, 0.2});
  EXPECT_EQ(diag.direction, Direction::kForward);
  EXPECT_EQ(diag.secondary, Direction::kLeft);
  // 0.59 share: compound. 0.61 share: single axis.
  EXPECT_TRUE(one({0.0, 0.59, 0.41}).secondary.has_value());
  EXPECT_FALSE(one({0.0, 0.61, 0.39}).secondary.has_value());
  EXPECT_EQ(render_bpmsd({diag}), "Move your left hand forward and to the left.");
}

TEST(ClassifyTest, LeanUsesTheDominantTiltAxis) {
  DeltaSet d;
  d.lean_left_deg = -35.0;
  d.lean_forward_deg = 5.0;
  const auto codes = classify_deltas(d, ThresholdTable{});
  ASSERT_EQ(codes.size(), 1u);
  EXPECT_EQ(codes[0].direction, Direction::kLeanRight);
  EXPECT_EQ(render_bpmsd(codes), "Lean to the right.");
}

TEST(ClassifyTest, RejectsInvalidTables) {
  ThresholdTable t;
  t.hinge = {45.0, 15.0};
  EXPECT_THROW(classify_deltas(DeltaSet{}, t), Error);
  t.hinge = {0.0, 15.0};
  EXPECT_THROW(classify_deltas(DeltaSet{}, t), Error);
}

TEST(ClassifyTest, EveryCodeIsCompatible) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const PoseFrame a = fixtures::random_pose(rng);
    const PoseFrame b = fixtures::random_pose(rng);
    for (const auto& c : classify_deltas(body_part_deltas(a, b, Skeleton::standard()), {})) {
      EXPECT_TRUE(lexicon::is_compatible(c));
    }
  }
  EXPECT_FALSE(lexicon::is_compatible({BodyPart::kTorso, MovementKind::kTranslate,
                                       Direction::kUp, Magnitude::kPlain, std::nullopt}));
  EXPECT_FALSE(lexicon::is_compatible({BodyPart::kLeftHand, MovementKind::kHinge,
                                       Direction::kBend, Magnitude::kPlain, std::nullopt}));
  EXPECT_FALSE(lexicon::is_compatible({BodyPart::kLeftHand, MovementKind::kTranslate,
                                       Direction::kUp, Magnitude::kPlain, Direction::kDown}));
  EXPECT_FALSE(lexicon::is_compatible({BodyPart::kHead, MovementKind::kLean,
                                       Direction::kLeanBack, Magnitude::kPlain, std::nullopt}));
}

TEST(RenderTest, ExamplePhraseStrings) {
  EXPECT_EQ(render_bpmsd({}), "");
  EXPECT_EQ(render_bpmsd({{BodyPart::kRightLeg, MovementKind::kTranslate, Direction::kForward,
                           Magnitude::kSlight, std::nullopt}}),
            "Move your right leg forward slightly.");
  EXPECT_EQ(
      render_bpmsd({{BodyPart::kRoot, MovementKind::kYaw, Direction::kTurnLeft, Magnitude::kPlain,
                     std::nullopt},
                    {BodyPart::kLeftLeg, MovementKind::kTranslate, Direction::kForward,
                     Magnitude::kPlain, std::nullopt},
                    {BodyPart::kLeftHand, MovementKind::kTranslate, Direction::kBack,
                     Magnitude::kSlight, std::nullopt}}),
      "Turn to the left. Move your left leg forward. Move your left hand back slightly.");
  EXPECT_EQ(render_bpmsd({{BodyPart::kRightLeg, MovementKind::kTranslate, Direction::kForward,
                           Magnitude::kPlain, std::nullopt},
                          {BodyPart::kRoot, MovementKind::kLean, Direction::kLeanRight,
                           Magnitude::kPlain, std::nullopt}}),
            "Lean to the right. Move your right leg forward.");
}

TEST(RenderTest, PairsMerge) {
  const MovementCode bend_l{BodyPart::kLeftElbow, MovementKind::kHinge, Direction::kBend,
                            Magnitude::kPlain, std::nullopt};
  MovementCode bend_r = bend_l;
  bend_r.part = BodyPart::kRightElbow;
  EXPECT_EQ(render_bpmsd({bend_l, bend_r}), "Bend your elbows.");

  const MovementCode up_l{BodyPart::kLeftHand, MovementKind::kTranslate, Direction::kUp,
                          Magnitude::kSlight, Direction::kForward};
  MovementCode up_r = up_l;
  up_r.part = BodyPart::kRightHand;
  EXPECT_EQ(render_bpmsd({up_l, up_r}), "Raise your hands and move them forward slightly.");

  const MovementCode out_l{BodyPart::kLeftHand, MovementKind::kTranslate, Direction::kLeft,
                           Magnitude::kPlain, std::nullopt};
  EXPECT_EQ(render_bpmsd({out_l, lexicon::mirror(out_l)}), "Move your hands apart.");
  const MovementCode in_l{BodyPart::kLeftLeg, MovementKind::kTranslate, Direction::kRight,
                          Magnitude::kPlain, Direction::kUp};
  EXPECT_EQ(render_bpmsd({in_l, lexicon::mirror(in_l)}), "Move your legs together and raise them.");

  // Different magnitudes stay separate.
  MovementCode slight_r = bend_r;
  slight_r.magnitude = Magnitude::kSlight;
  EXPECT_EQ(render_bpmsd({bend_l, slight_r}), "Bend your right elbow slightly. Bend your left elbow.");
}

TEST(RenderTest, RootPhrases) {
  auto root = [](Direction d, std::optional<Direction> s = std::nullopt) {
    return render_bpmsd({{BodyPart::kRoot, MovementKind::kTranslate, d, Magnitude::kPlain, s}});
  };
  EXPECT_EQ(root(Direction::kUp), "Rise up.");
  EXPECT_EQ(root(Direction::kDown), "Crouch down.");
  EXPECT_EQ(root(Direction::kBack), "Step back.");
  EXPECT_EQ(root(Direction::kRight), "Step to the right.");
  EXPECT_EQ(root(Direction::kForward, Direction::kLeft), "Step forward and to the left.");
  EXPECT_EQ(root(Direction::kDown, Direction::kBack), "Crouch down and step back.");
  EXPECT_EQ(render_bpmsd({{BodyPart::kTorso, MovementKind::kYaw, Direction::kTurnRight,
                           Magnitude::kSlight, std::nullopt}}),
            "Turn your upper body to the right slightly.");
}

TEST(DescribeTest, RaisedWristFixture) {
  const auto [a, b] = raised_wrist(0.10);
  EXPECT_EQ(describe(a, b), "Raise your right hand slightly.");
  const auto [c, d] = raised_wrist(0.30);
  EXPECT_EQ(describe(c, d), "Raise your right hand.");
}

TEST(DescribeTest, TurnAndStepFixture) {
  const PoseFrame a = rest_pose();
  PoseFrame b = a;
  b.root_orientation = axis_angle_deg(Vector3d::UnitY(), 40.0);
  b.local_rotation(kLeftHip) = axis_angle_deg(Vector3d::UnitX(), -20.0);
  EXPECT_EQ(describe(a, b), "Turn to the left. Move your left leg forward.");
}

TEST(DescribeTest, StandingIsMotionless) {
  for (const auto& text : describe_motion(fixtures::standing(60), 0.5)) EXPECT_EQ(text, "");
}

TEST(DescribeTest, WalkSteps) {
  const auto texts = describe_motion(fixtures::forward_walk(100), 0.5);
  ASSERT_EQ(texts.size(), 10u);
  for (size_t i = 0; i + 1 < texts.size(); ++i) {
    EXPECT_EQ(texts[i].rfind("Step forward.", 0), 0u) << texts[i];
  }
}

TEST(DescribeTest, Deterministic) {
  const auto m = fixtures::random_motion(60, 8, 45.0);
  EXPECT_EQ(describe_motion(m, 0.5), describe_motion(m, 0.5));
}

TEST(DescriberPropertyTest, MirrorSymmetryOnRandomPoses) {
  std::mt19937_64 rng(2024);
  int non_empty = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const PoseFrame a = fixtures::random_pose(rng);
    const PoseFrame b = fixtures::random_pose(rng);
    const std::string text = describe(a, b);
    non_empty += !text.empty();
    EXPECT_EQ(describe(mirror_pose(a), mirror_pose(b)), lexicon::swap_sides(text));
  }
  EXPECT_GT(non_empty, 90);
}

TEST(DescriberPropertyTest, MirrorSymmetryOnBundledFixtures) {
  for (const auto& fx : fixtures::bundled()) {
    MotionSequence mirrored = fx.motion;
    for (auto& f : mirrored.frames) f = mirror_pose(f);
    const auto texts = describe_motion(fx.motion, 0.5);
    const auto mirrored_texts = describe_motion(mirrored, 0.5);
    ASSERT_EQ(texts.size(), mirrored_texts.size());
    for (size_t i = 0; i < texts.size(); ++i) {
      EXPECT_EQ(mirrored_texts[i], lexicon::swap_sides(texts[i])) << fx.motion.id << " " << i;
    }
  }
}

DeltaSet random_deltas(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DeltaSet d;
  for (auto& v : d.translation) v = scale * 0.08 * Vector3d(u(rng), u(rng), u(rng));
  for (auto& a : d.angle_deg) a = scale * 20.0 * u(rng);
  d.lean_forward_deg = scale * 12.0 * u(rng);
  d.lean_left_deg = scale * 12.0 * u(rng);
  return d;
}

TEST(DescriberPropertyTest, NullSoundness) {
  std::mt19937_64 rng(77);
  const ThresholdTable t;
  int empties = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const DeltaSet d = random_deltas(rng, trial % 2 ? 0.6 : 1.0);
    bool all_below = std::hypot(d.lean_forward_deg, d.lean_left_deg) < t.lean.epsilon;
    for (BodyPart p : {BodyPart::kRoot, BodyPart::kHead, BodyPart::kLeftHand,
                       BodyPart::kRightHand, BodyPart::kLeftLeg, BodyPart::kRightLeg}) {
      all_below = all_below && d[p].norm() < t.translate.epsilon;
    }
    for (BodyPart p : {BodyPart::kRoot, BodyPart::kTorso}) {
      all_below = all_below && std::abs(d.angle(p)) < t.yaw.epsilon;
    }
    for (BodyPart p : {BodyPart::kLeftElbow, BodyPart::kRightElbow, BodyPart::kLeftKnee,
                       BodyPart::kRightKnee}) {
      all_below = all_below && std::abs(d.angle(p)) < t.hinge.epsilon;
    }
    const std::string text = render_bpmsd(classify_deltas(d, t));
    EXPECT_EQ(text.empty(), all_below);
    empties += text.empty();
  }
  EXPECT_GT(empties, 10);
}

TEST(DescriberPropertyTest, BucketMonotonicity) {
  std::mt19937_64 rng(31);
  const ThresholdTable t;
  auto rank = [](const std::vector<MovementCode>& codes, BodyPart p, MovementKind k) {
    for (const auto& c : codes) {
      if (c.part == p && c.kind == k) return c.magnitude == Magnitude::kSlight ? 1 : 2;
    }
    return 0;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const DeltaSet base = random_deltas(rng, 0.2);
    std::vector<int> previous(4 * lexicon::kBodyPartCount, 0);
    for (int step = 1; step <= 60; ++step) {
      const double s = 0.1 * step;
      DeltaSet d = base;
      for (auto& v : d.translation) v *= s;
      for (auto& a : d.angle_deg) a *= s;
      d.lean_forward_deg *= s;
      d.lean_left_deg *= s;
      const auto codes = classify_deltas(d, t);
      for (int p = 0; p < lexicon::kBodyPartCount; ++p) {
        for (int k = 0; k < 4; ++k) {
          const int r = rank(codes, static_cast<BodyPart>(p), static_cast<MovementKind>(k));
          int& prev = previous[4 * p + k];
          EXPECT_GE(r, prev);
          prev = r;
        }
      }
    }
  }
}

TEST(ThresholdTableTest, JsonRoundtripAndErrors) {
  ThresholdTable t;
  t.translate = {0.02, 0.2};
  EXPECT_EQ(ThresholdTable::from_json(t.to_json()).to_json(), t.to_json());
  const auto partial = ThresholdTable::from_json(nlohmann::json::parse(R"({"yaw": {"epsilon": 5, "lambda": 20}})"));
  EXPECT_EQ(partial.yaw.epsilon, 5.0);
  EXPECT_EQ(partial.hinge.lambda, 45.0);
  EXPECT_THROW(ThresholdTable::from_json(nlohmann::json::parse(R"({"yaw": {"epsilon": 30, "lambda": 20}})")), Error);
  EXPECT_THROW(ThresholdTable::from_json(nlohmann::json::parse(R"({"spin": {"epsilon": 1, "lambda": 2}})")), Error);
  EXPECT_THROW(ThresholdTable::from_json(nlohmann::json::parse(R"({"yaw": {"epsilon": "x", "lambda": 2}})")), Error);
  EXPECT_THROW(ThresholdTable::from_json(nlohmann::json::parse("[]")), Error);
}

TEST(LexiconTest, SwapSidesWholeWordsOnly) {
  EXPECT_EQ(lexicon::swap_sides("Move your left hand to the right. Leftover rights."),
            "Move your right hand to the left. Leftover rights.");
}

TEST(LexiconTest, Stems) {
  EXPECT_EQ(lexicon::body_part_stem("feet"), "foot");
  EXPECT_EQ(lexicon::body_part_stem("elbows"), "elbow");
  EXPECT_EQ(lexicon::verb_stem("raises"), "raise");
  EXPECT_EQ(lexicon::verb_stem("bent"), "bend");
  EXPECT_FALSE(lexicon::body_part_stem("back").has_value());
  const auto words = lexicon::content_words("He turns his Upper Body and raises his hands.");
  ASSERT_EQ(words.size(), 4u);
  EXPECT_EQ(words[1].stem, "upper body");
  EXPECT_TRUE(words[1].is_body_part);
  EXPECT_EQ(words[3].stem, "hand");
  EXPECT_EQ(lexicon::third_person("crouch"), "crouches");
}

}  // namespace
}  // namespace bpm
