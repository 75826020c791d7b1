#include "bpm/segmenter.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <ostream>
#include <random>

#include "bpm/error.h"
#include "bpm/kinematics.h"
#include "bpm/random.h"
#include "bpm/summary.h"

namespace bpm {
namespace {

// Joints whose parent is not the root: each contributes the cosine of the
// angle between its bone and its parent's bone.
std::vector<int> angle_joints(const Skeleton& skeleton) {
  std::vector<int> out;
  for (int j = 1; j < skeleton.size(); ++j) {
    if (skeleton.parents[skeleton.parents[j]] >= 0) out.push_back(j);
  }
  return out;
}

constexpr double kGridTolerance = 1e-9;

}  // namespace

int snippet_step(double snippet_duration_s, double fps) {
  if (!(snippet_duration_s > 0.0)) throw Error("snippet duration must be positive");
  const long step = std::lround(snippet_duration_s * fps);
  if (step <= 0) {
    throw Error("snippet duration " + std::to_string(snippet_duration_s) + " s is shorter than one frame");
  }
  return static_cast<int>(step);
}

int snippet_count(int frame_count, int step) { return (frame_count + step - 1) / step; }

std::vector<Snippet> segment(const MotionSequence& motion, double snippet_duration_s) {
  if (motion.frames.empty()) throw Error("cannot segment an empty motion");
  const int step = snippet_step(snippet_duration_s, motion.fps);
  const int n = motion.frame_count();
  std::vector<Snippet> out;
  out.reserve(snippet_count(n, step));
  for (int start = 0; start < n; start += step) {
    Snippet s;
    s.motion_id = motion.id;
    s.index = static_cast<int>(out.size());
    s.frames = {start, std::min(start + step, n)};
    s.start_pose = motion.frames[s.frames.start];
    s.end_pose = motion.frames[s.frames.end - 1];
    out.push_back(std::move(s));
  }
  return out;
}

Eigen::VectorXd pose_descriptor(const PoseFrame& pose, const Skeleton& skeleton) {
  const JointPositions p = forward_kinematics(pose, skeleton);
  const Eigen::Quaterniond to_local = yaw_rotation(-facing_yaw(p));
  const std::vector<int> angles = angle_joints(skeleton);

  Eigen::VectorXd d(3 * (kNumJoints - 1) + angles.size());
  for (int j = 1; j < kNumJoints; ++j) {
    d.segment<3>(3 * (j - 1)) = to_local * (p[j] - p[kPelvis]);
  }
  int k = 3 * (kNumJoints - 1);
  for (int j : angles) {
    const int parent = skeleton.parents[j];
    const Eigen::Vector3d upper = p[parent] - p[skeleton.parents[parent]];
    const Eigen::Vector3d lower = p[j] - p[parent];
    d[k++] = std::clamp(upper.dot(lower) / (upper.norm() * lower.norm()), -1.0, 1.0);
  }
  const double norm = d.norm();
  if (!(norm > 0.0)) throw Error("pose descriptor has zero magnitude");
  return d / norm;
}

DescriptorMirror descriptor_mirror(const Skeleton& skeleton) {
  const std::vector<int> angles = angle_joints(skeleton);
  DescriptorMirror m;
  for (int j = 1; j < kNumJoints; ++j) {
    for (int c = 0; c < 3; ++c) {
      m.permutation.push_back(3 * (mirror_joint(j) - 1) + c);
      m.sign.push_back(c == 0 ? -1.0 : 1.0);
    }
  }
  const int base = 3 * (kNumJoints - 1);
  for (int j : angles) {
    const auto it = std::find(angles.begin(), angles.end(), mirror_joint(j));
    m.permutation.push_back(base + static_cast<int>(it - angles.begin()));
    m.sign.push_back(1.0);
  }
  return m;
}

std::vector<double> default_duration_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

DurationProfile duration_similarity_profile(const std::vector<MotionSequence>& motions,
                                            const std::vector<double>& durations,
                                            int samples_per_duration, uint64_t seed,
                                            const PoseEmbedder& embed, int threads) {
  if (motions.empty()) throw Error("duration profile needs at least one motion");
  if (samples_per_duration < 1) throw Error("samples per duration must be >= 1");
  for (size_t i = 1; i < durations.size(); ++i) {
    if (!(durations[i] > durations[i - 1])) throw Error("durations must be strictly increasing");
  }

  // Descriptors of every frame, computed once and shared by all durations.
  std::vector<std::vector<Eigen::VectorXd>> descriptors(motions.size());
  for (size_t m = 0; m < motions.size(); ++m) {
    descriptors[m].reserve(motions[m].frames.size());
    for (const auto& f : motions[m].frames) descriptors[m].push_back(embed(f, motions[m].skeleton));
  }

  auto profile_one = [&](size_t d) {
    const double duration = durations[d];
    std::vector<int> steps(motions.size());
    std::vector<long> cumulative(motions.size());
    long total = 0;
    for (size_t m = 0; m < motions.size(); ++m) {
      steps[m] = snippet_step(duration, motions[m].fps);
      total += std::max(0, motions[m].frame_count() - steps[m]);
      cumulative[m] = total;
    }
    if (total == 0) {
      throw Error("duration " + std::to_string(duration) + " s does not fit inside any motion");
    }
    std::mt19937_64 rng(derive_seed(seed, d));
    std::uniform_int_distribution<long> pick(0, total - 1);
    std::vector<double> sims(samples_per_duration);
    for (double& sim : sims) {
      const long u = pick(rng);
      const size_t m = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
      const int start = static_cast<int>(u - (m == 0 ? 0 : cumulative[m - 1]));
      const Eigen::VectorXd& a = descriptors[m][start];
      const Eigen::VectorXd& b = descriptors[m][start + steps[m]];
      sim = std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
    }
    const MeanCi ci = mean_ci95(sims);
    return DurationProfileEntry{duration, ci.mean, ci.halfwidth, ci.n};
  };

  DurationProfile profile;
  profile.entries.resize(durations.size());
  if (threads <= 1) {
    for (size_t d = 0; d < durations.size(); ++d) profile.entries[d] = profile_one(d);
  } else {
    std::vector<std::future<DurationProfileEntry>> jobs;
    for (size_t d = 0; d < durations.size(); ++d) {
      jobs.push_back(std::async(std::launch::async, profile_one, d));
    }
    for (size_t d = 0; d < durations.size(); ++d) profile.entries[d] = jobs[d].get();
  }
  return profile;
}

// Principle 1: minimize start/end similarity. Principle 2: never exceed the
// cap. When the global minimizer lies beyond the cap, the largest grid entry
// at or below the cap wins. Ties go to the shorter duration.
double select_duration(const DurationProfile& profile, double cap_s) {
  if (profile.entries.empty()) throw Error("empty duration profile");
  const auto& e = profile.entries;
  int largest_capped = -1;
  for (int i = 0; i < static_cast<int>(e.size()); ++i) {
    if (e[i].duration_s <= cap_s + kGridTolerance) largest_capped = i;
  }
  if (largest_capped < 0) {
    throw Error("no profile entry at or below the " + std::to_string(cap_s) + " s cap");
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(e.size()); ++i) {
    if (e[i].mean_similarity < e[best].mean_similarity) best = i;
  }
  if (e[best].duration_s <= cap_s + kGridTolerance) return e[best].duration_s;
  return e[largest_capped].duration_s;
}

void write_profile_csv(std::ostream& out, const DurationProfile& profile) {
  const auto precision = out.precision(10);
  out << "duration_s,mean,ci_halfwidth,n\n";
  for (const auto& e : profile.entries) {
    out << e.duration_s << ',' << e.mean_similarity << ',' << e.ci_halfwidth << ',' << e.samples
        << '\n';
  }
  out.precision(precision);
}

}  // namespace bpm
