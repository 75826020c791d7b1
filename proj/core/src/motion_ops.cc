#include "bpm/motion_ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bpm/error.h"
#include "bpm/kinematics.h"

namespace bpm {
namespace {

// Residual yaw / height below these is treated as already normalized, which
// keeps canonicalize() an exact fixed point.
constexpr double kYawEpsilon = 1e-9;
constexpr double kHeightEpsilon = 1e-12;

double min_joint_height(const MotionSequence& motion) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& frame : motion.frames) {
    for (const auto& p : forward_kinematics(frame, motion.skeleton)) {
      lowest = std::min(lowest, p.y());
    }
  }
  return lowest;
}

}  // namespace

MotionSequence canonicalize(const MotionSequence& motion) {
  motion.validate();
  MotionSequence out = motion;

  const JointPositions first = forward_kinematics(motion.frames.front(), motion.skeleton);
  const double yaw = facing_yaw(first);
  const Eigen::Vector3d origin(first[kPelvis].x(), 0.0, first[kPelvis].z());

  const bool rotate = std::abs(yaw) > kYawEpsilon;
  const Eigen::Quaterniond to_front = yaw_rotation(-yaw);
  for (auto& frame : out.frames) {
    frame.root_position -= origin;
    if (rotate) {
      frame.root_position = to_front * frame.root_position;
      frame.root_orientation = (to_front * frame.root_orientation).normalized();
    }
  }

  const double floor = min_joint_height(out);
  if (std::abs(floor) > kHeightEpsilon) {
    for (auto& frame : out.frames) frame.root_position.y() -= floor;
  }
  return out;
}

bool is_canonical(const MotionSequence& motion, double tolerance) {
  const JointPositions first = forward_kinematics(motion.frames.front(), motion.skeleton);
  const Eigen::Vector3d facing = facing_direction(first);
  return std::abs(first[kPelvis].x()) <= tolerance && std::abs(first[kPelvis].z()) <= tolerance &&
         (facing - Eigen::Vector3d::UnitZ()).norm() <= tolerance &&
         std::abs(min_joint_height(motion)) <= tolerance;
}

MotionSequence resample(const MotionSequence& motion, double target_fps) {
  if (!(target_fps > 0.0) || !std::isfinite(target_fps)) {
    throw Error("target fps must be positive");
  }
  motion.validate();
  MotionSequence out;
  out.id = motion.id;
  out.fps = target_fps;
  out.skeleton = motion.skeleton;

  const int n = motion.frame_count();
  const int n_out = std::max(1, static_cast<int>(std::lround(n * target_fps / motion.fps)));
  out.frames.reserve(n_out);
  for (int i = 0; i < n_out; ++i) {
    const double source = std::min<double>(i * motion.fps / target_fps, n - 1);
    const int i0 = static_cast<int>(std::floor(source));
    const double t = source - i0;
    if (t == 0.0 || i0 + 1 >= n) {
      out.frames.push_back(motion.frames[i0]);
      continue;
    }
    const PoseFrame& a = motion.frames[i0];
    const PoseFrame& b = motion.frames[i0 + 1];
    PoseFrame f;
    f.root_position = (1.0 - t) * a.root_position + t * b.root_position;
    f.root_orientation = slerp_shortest(a.root_orientation, b.root_orientation, t);
    for (int k = 0; k < kNumBodyJoints; ++k) {
      f.joint_rotations[k] = slerp_shortest(a.joint_rotations[k], b.joint_rotations[k], t);
    }
    out.frames.push_back(f);
  }
  return out;
}

MotionSequence crop_frames(const MotionSequence& motion, int start, int end) {
  if (start < 0 || end > motion.frame_count() || start >= end) {
    throw Error("crop range [" + std::to_string(start) + ", " + std::to_string(end) +
                ") is invalid for " + std::to_string(motion.frame_count()) + " frames");
  }
  MotionSequence out;
  out.id = motion.id;
  out.fps = motion.fps;
  out.skeleton = motion.skeleton;
  out.frames.assign(motion.frames.begin() + start, motion.frames.begin() + end);
  return out;
}

MotionSequence random_crop_to_duration(const MotionSequence& motion, double max_seconds,
                                       uint64_t seed) {
  const int max_frames = static_cast<int>(std::lround(max_seconds * motion.fps));
  if (max_frames <= 0) throw Error("crop duration must cover at least one frame");
  if (motion.frame_count() <= max_frames) return motion;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, motion.frame_count() - max_frames);
  const int start = pick(rng);
  return crop_frames(motion, start, start + max_frames);
}

}  // namespace bpm
