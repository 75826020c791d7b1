#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "bpm/motion.h"

namespace bpm {

// Channel blocks of the 263-dimensional per-frame feature vector, in storage
// order.
struct FeatureLayout {
  static constexpr int kRootAngularVelocity = 0;  // 1: yaw change, rad/frame
  static constexpr int kRootLinearVelocity = 1;   // 2: (x, z) in the facing frame, m/frame
  static constexpr int kRootHeight = 3;           // 1
  static constexpr int kJointPositions = 4;       // 63: joints 1..21, root-XZ-relative, facing frame
  static constexpr int kJointRotations = 67;      // 126: joints 1..21, 6D (first two matrix columns)
  static constexpr int kJointVelocities = 193;    // 66: all joints, facing frame, m/frame
  static constexpr int kFootContacts = 259;       // 4: left ankle, left foot, right ankle, right foot
  static constexpr int kWidth = 263;

  struct Block {
    const char* name;
    int offset;
    int width;
  };
  static const std::vector<Block>& blocks();
};

using FeatureFrame = Eigen::Matrix<double, FeatureLayout::kWidth, 1>;

struct FeatureSequence {
  std::vector<FeatureFrame> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
};

struct FootContactThresholds {
  double max_speed = 0.002;  // m/frame
  double max_height = 0.05;  // m
};

// Requires a canonical 20 fps motion. Velocities are forward differences; the
// last frame repeats the previous one, and a single frame has zero velocity.
FeatureSequence encode_features(const MotionSequence& motion,
                                const FootContactThresholds& contact = {});

// Integrates the root channels into a trajectory starting at the origin
// facing +Z and rebuilds poses from the rotation block. The root orientation
// is fitted to the hip/spine positions.
MotionSequence decode_features(const FeatureSequence& features, const Skeleton& skeleton,
                               const std::string& id = "decoded");

// World-space joint positions carried by the position block, without going
// through the rotation channels.
std::vector<JointPositions> feature_positions(const FeatureSequence& features);

// Builds a FeatureSequence from flat row-major data; throws on a length that
// is not a multiple of 263.
FeatureSequence features_from_flat(const std::vector<float>& values);

}  // namespace bpm
