#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bpm/motion.h"

namespace bpm {

struct FrameRange {
  int start = 0;
  int end = 0;  // exclusive

  int length() const { return end - start; }
  friend bool operator==(const FrameRange&, const FrameRange&) = default;
};

struct Snippet {
  std::string motion_id;
  int index = 0;
  FrameRange frames;
  PoseFrame start_pose;  // frame `frames.start`
  PoseFrame end_pose;    // frame `frames.end - 1`
};

// Frame step of a snippet: round(duration * fps). Throws when it is zero.
int snippet_step(double snippet_duration_s, double fps);

// Tiles the motion with fixed-length snippets. A trailing remainder shorter
// than the step becomes its own snippet.
std::vector<Snippet> segment(const MotionSequence& motion, double snippet_duration_s);

// Number of snippets segment() produces for `frame_count` frames.
int snippet_count(int frame_count, int step);

// Geometric pose embedding: root-relative joint positions in the pose's own
// facing frame followed by the cosine of each inter-bone angle, scaled to unit
// norm.
Eigen::VectorXd pose_descriptor(const PoseFrame& pose, const Skeleton& skeleton);

// Index permutation mapping descriptor entries of a pose onto those of its
// left/right mirror, together with the per-entry sign (X components flip).
struct DescriptorMirror {
  std::vector<int> permutation;
  std::vector<double> sign;
};
DescriptorMirror descriptor_mirror(const Skeleton& skeleton);

// Any embedding of a single pose. Learned embeddings plug in here.
using PoseEmbedder = std::function<Eigen::VectorXd(const PoseFrame&, const Skeleton&)>;

struct DurationProfileEntry {
  double duration_s = 0.0;
  double mean_similarity = 0.0;
  double ci_halfwidth = 0.0;
  int samples = 0;
};

struct DurationProfile {
  std::vector<DurationProfileEntry> entries;
};

// Default grid {0.1, 0.2, ..., 1.0} s.
std::vector<double> default_duration_grid();

// For each duration, draws `samples_per_duration` start frames uniformly over
// all valid starts in the pool (so longer motions get proportionally more
// draws) and averages the cosine similarity of the start / end descriptors,
// where end = start + round(duration * fps). Each duration uses its own
// generator derived from (seed, duration index), so the result does not depend
// on `threads`.
DurationProfile duration_similarity_profile(const std::vector<MotionSequence>& motions,
                                            const std::vector<double>& durations,
                                            int samples_per_duration, uint64_t seed,
                                            const PoseEmbedder& embed = pose_descriptor,
                                            int threads = 1);

// Minimum-similarity duration subject to the cap; see the implementation for
// the exact tie and cap rules.
double select_duration(const DurationProfile& profile, double cap_s = 0.5);

// CSV with header "duration_s,mean,ci_halfwidth,n".
void write_profile_csv(std::ostream& out, const DurationProfile& profile);

}  // namespace bpm
