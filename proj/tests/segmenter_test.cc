#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "bpm/error.h"
#include "bpm/fixtures.h"
#include "bpm/segmenter.h"

namespace bpm {
namespace {

TEST(SegmentTest, ExactDivision) {
  const auto snippets = segment(fixtures::standing(70), 0.5);
  ASSERT_EQ(snippets.size(), 7u);
  for (const auto& s : snippets) EXPECT_EQ(s.frames.length(), 10);
}

TEST(SegmentTest, RemainderBecomesItsOwnSnippet) {
  const auto snippets = segment(fixtures::standing(73), 0.5);
  ASSERT_EQ(snippets.size(), 8u);
  EXPECT_EQ(snippets.back().frames, (FrameRange{70, 73}));
}

TEST(SegmentTest, ShortMotionIsOneSnippet) {
  const auto snippets = segment(fixtures::standing(5), 0.5);
  ASSERT_EQ(snippets.size(), 1u);
  EXPECT_EQ(snippets[0].frames, (FrameRange{0, 5}));
}

TEST(SegmentTest, ZeroFrameStepIsRejected) {
  EXPECT_THROW(segment(fixtures::standing(10), 0.01), Error);
  EXPECT_THROW(segment(fixtures::standing(10), 0.0), Error);
  MotionSequence empty;
  EXPECT_THROW(segment(empty, 0.5), Error);
}

TEST(SegmentTest, PartitionsRandomLengthsAndDurations) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> length(1, 1000);
  std::uniform_real_distribution<double> duration(0.05, 2.0);
  const MotionSequence long_motion = fixtures::standing(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = length(rng);
    const double d = duration(rng);
    MotionSequence m = long_motion;
    m.frames.resize(n);
    const int step = snippet_step(d, m.fps);
    const auto snippets = segment(m, d);
    ASSERT_EQ(static_cast<int>(snippets.size()), snippet_count(n, step));
    int cursor = 0;
    for (size_t i = 0; i < snippets.size(); ++i) {
      EXPECT_EQ(snippets[i].index, static_cast<int>(i));
      EXPECT_EQ(snippets[i].frames.start, cursor);
      if (i + 1 < snippets.size()) {
        EXPECT_EQ(snippets[i].frames.length(), step);
      } else {
        EXPECT_GE(snippets[i].frames.length(), 1);
        EXPECT_LE(snippets[i].frames.length(), step);
      }
      cursor = snippets[i].frames.end;
    }
    EXPECT_EQ(cursor, n);
  }
}

TEST(SegmentTest, BoundaryPosesComeFromTheSnippetsOwnFrames) {
  const MotionSequence m = fixtures::random_motion(73, 2);
  const auto snippets = segment(m, 0.5);
  for (size_t i = 0; i < snippets.size(); ++i) {
    EXPECT_TRUE(snippets[i].start_pose == m.frames[snippets[i].frames.start]);
    EXPECT_TRUE(snippets[i].end_pose == m.frames[snippets[i].frames.end - 1]);
    if (i + 1 < snippets.size()) {
      // Consecutive snippets meet at adjacent frames.
      EXPECT_EQ(snippets[i].frames.end, snippets[i + 1].frames.start);
    }
  }
  EXPECT_TRUE(snippets.back().end_pose == m.frames.back());
}

TEST(PoseDescriptorTest, UnitNormAndSelfSimilarity) {
  std::mt19937_64 rng(4);
  const Skeleton s = Skeleton::standard();
  for (int trial = 0; trial < 100; ++trial) {
    const PoseFrame pose = fixtures::random_pose(rng);
    const Eigen::VectorXd d = pose_descriptor(pose, s);
    EXPECT_NEAR(d.norm(), 1.0, 1e-9);
    EXPECT_NEAR(d.dot(pose_descriptor(pose, s)), 1.0, 1e-12);
  }
}

TEST(PoseDescriptorTest, MirrorPermutesAndNegatesX) {
  std::mt19937_64 rng(9);
  const Skeleton s = Skeleton::standard();
  const DescriptorMirror mirror = descriptor_mirror(s);
  for (int trial = 0; trial < 100; ++trial) {
    const PoseFrame pose = fixtures::random_pose(rng);
    const Eigen::VectorXd d = pose_descriptor(pose, s);
    const Eigen::VectorXd dm = pose_descriptor(mirror_pose(pose), s);
    ASSERT_EQ(d.size(), dm.size());
    ASSERT_EQ(static_cast<Eigen::Index>(mirror.permutation.size()), d.size());
    for (Eigen::Index k = 0; k < d.size(); ++k) {
      EXPECT_NEAR(dm[k], mirror.sign[k] * d[mirror.permutation[k]], 1e-9) << k;
    }
  }
}

TEST(PoseDescriptorTest, InvariantToRootYawAndTranslation) {
  std::mt19937_64 rng(12);
  const Skeleton s = Skeleton::standard();
  PoseFrame pose = fixtures::random_pose(rng);
  PoseFrame moved = pose;
  moved.root_position += Eigen::Vector3d(2.0, 0.0, -1.0);
  moved.root_orientation = fixtures::axis_angle_deg(Eigen::Vector3d::UnitY(), 63.0) * moved.root_orientation;
  EXPECT_LE((pose_descriptor(pose, s) - pose_descriptor(moved, s)).norm(), 1e-9);
}

TEST(DurationProfileTest, FrozenMotionIsPerfectlySimilar) {
  const auto profile =
      duration_similarity_profile({fixtures::standing(40)}, default_duration_grid(), 50, 3);
  ASSERT_EQ(profile.entries.size(), 10u);
  for (const auto& e : profile.entries) {
    EXPECT_NEAR(e.mean_similarity, 1.0, 1e-12);
    EXPECT_EQ(e.ci_halfwidth, 0.0);
    EXPECT_EQ(e.samples, 50);
  }
}

// Closed form: for a uniform twist with angular rate w, descriptor similarity
// is a + b cos(w d) regardless of the start phase, so the minimum sits at half
// a period.
TEST(DurationProfileTest, TwistFixtureMinimumAtHalfPeriod) {
  const double period = 1.2;
  const auto profile = duration_similarity_profile({fixtures::spine_twist(200, period)},
                                                   default_duration_grid(), 200, 5);
  int best = 0;
  for (int i = 0; i < 10; ++i) {
    if (profile.entries[i].mean_similarity < profile.entries[best].mean_similarity) best = i;
    EXPECT_GE(profile.entries[i].mean_similarity, -1.0);
    EXPECT_LE(profile.entries[i].mean_similarity, 1.0);
  }
  EXPECT_NEAR(profile.entries[best].duration_s, 0.6, 1e-12);
  for (int i = 0; i < best; ++i) {
    EXPECT_GT(profile.entries[i].mean_similarity, profile.entries[i + 1].mean_similarity);
  }
  for (int i = best; i + 1 < 10; ++i) {
    EXPECT_LT(profile.entries[i].mean_similarity, profile.entries[i + 1].mean_similarity);
  }
  EXPECT_DOUBLE_EQ(select_duration(profile), 0.5);
}

TEST(DurationProfileTest, HalfwidthShrinksWithSamples) {
  std::vector<MotionSequence> pool;
  for (uint64_t s = 0; s < 4; ++s) pool.push_back(fixtures::random_motion(100, s, 50.0));
  double previous = 1e9;
  for (int n : {10, 100, 1000}) {
    double total = 0.0;
    for (uint64_t seed = 0; seed < 8; ++seed) {
      const auto p = duration_similarity_profile(pool, {0.5}, n, seed);
      total += p.entries[0].ci_halfwidth;
    }
    EXPECT_LT(total, previous) << n;
    previous = total;
  }
}

TEST(DurationProfileTest, DeterministicAcrossThreadCounts) {
  std::vector<MotionSequence> pool = {fixtures::random_motion(90, 1), fixtures::random_motion(60, 2)};
  const auto a = duration_similarity_profile(pool, default_duration_grid(), 100, 42, pose_descriptor, 1);
  const auto b = duration_similarity_profile(pool, default_duration_grid(), 100, 42, pose_descriptor, 4);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].mean_similarity, b.entries[i].mean_similarity);
    EXPECT_EQ(a.entries[i].ci_halfwidth, b.entries[i].ci_halfwidth);
  }
}

TEST(DurationProfileTest, DurationLongerThanEveryMotionFails) {
  EXPECT_THROW(duration_similarity_profile({fixtures::standing(10)}, {0.2, 0.6}, 10, 0), Error);
}

DurationProfile profile_of(std::vector<std::pair<double, double>> points) {
  DurationProfile p;
  for (auto [d, m] : points) p.entries.push_back({d, m, 0.0, 1});
  return p;
}

TEST(SelectDurationTest, MinimumWithinCap) {
  EXPECT_DOUBLE_EQ(select_duration(profile_of({{0.2, 0.9}, {0.4, 0.5}, {0.6, 0.7}})), 0.4);
}

TEST(SelectDurationTest, MinimumBeyondCapClampsToLargestCappedEntry) {
  EXPECT_DOUBLE_EQ(
      select_duration(profile_of({{0.3, 0.9}, {0.5, 0.8}, {0.6, 0.7}, {0.8, 0.1}, {1.0, 0.4}})), 0.5);
  EXPECT_DOUBLE_EQ(select_duration(profile_of({{0.3, 0.9}, {0.45, 0.8}, {0.8, 0.1}})), 0.45);
}

TEST(SelectDurationTest, FlatProfilePicksSmallest) {
  EXPECT_DOUBLE_EQ(select_duration(profile_of({{0.1, 0.5}, {0.2, 0.5}, {0.3, 0.5}})), 0.1);
}

TEST(SelectDurationTest, Errors) {
  EXPECT_THROW(select_duration(DurationProfile{}), Error);
  EXPECT_THROW(select_duration(profile_of({{0.6, 0.1}})), Error);
}

TEST(ProfileCsvTest, Format) {
  std::ostringstream out;
  write_profile_csv(out, profile_of({{0.5, 0.25}}));
  EXPECT_EQ(out.str(), "duration_s,mean,ci_halfwidth,n\n0.5,0.25,0,1\n");
}

}  // namespace
}  // namespace bpm
