#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace bpm {

inline constexpr int kNumJoints = 22;
inline constexpr int kNumBodyJoints = kNumJoints - 1;

// Joint indices of the standard 22-joint body template.
enum JointId : int {
  kPelvis = 0,
  kLeftHip,
  kRightHip,
  kSpine1,
  kLeftKnee,
  kRightKnee,
  kSpine2,
  kLeftAnkle,
  kRightAnkle,
  kSpine3,
  kLeftFoot,
  kRightFoot,
  kNeck,
  kLeftCollar,
  kRightCollar,
  kHead,
  kLeftShoulder,
  kRightShoulder,
  kLeftElbow,
  kRightElbow,
  kLeftWrist,
  kRightWrist,
};

// Left/right counterpart of a joint; central joints map to themselves.
int mirror_joint(int joint);

using JointPositions = std::array<Eigen::Vector3d, kNumJoints>;

// Kinematic tree with rest-pose bone vectors. Offsets are in meters and
// expressed in the parent frame; the body faces +Z with +X on its left and
// +Y up.
struct Skeleton {
  std::vector<std::string> joint_names;
  std::vector<int> parents;  // -1 marks the root
  std::vector<Eigen::Vector3d> offsets;

  // The 22-joint template every motion is re-targeted to. Left/right
  // symmetric: offset(mirror(j)) == offset(j) with X negated.
  static Skeleton standard();

  // Throws bpm::Error when the tree, the joint count or an offset is invalid.
  void validate() const;

  int size() const { return static_cast<int>(parents.size()); }

  friend bool operator==(const Skeleton&, const Skeleton&) = default;
};

// One skeletal pose. joint_rotations[k] is the local rotation of joint k + 1
// relative to its parent.
struct PoseFrame {
  Eigen::Vector3d root_position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond root_orientation = Eigen::Quaterniond::Identity();
  std::array<Eigen::Quaterniond, kNumBodyJoints> joint_rotations = identity_rotations();

  const Eigen::Quaterniond& local_rotation(int joint) const {
    return joint == kPelvis ? root_orientation : joint_rotations[joint - 1];
  }
  Eigen::Quaterniond& local_rotation(int joint) {
    return joint == kPelvis ? root_orientation : joint_rotations[joint - 1];
  }

  void validate() const;

  static std::array<Eigen::Quaterniond, kNumBodyJoints> identity_rotations();
};

bool operator==(const PoseFrame& a, const PoseFrame& b);

struct MotionSequence {
  std::string id;
  double fps = 20.0;
  std::vector<PoseFrame> frames;
  Skeleton skeleton = Skeleton::standard();

  int frame_count() const { return static_cast<int>(frames.size()); }
  double duration_s() const { return frames.size() / fps; }

  void validate() const;

  friend bool operator==(const MotionSequence&, const MotionSequence&) = default;
};

// Reflects a pose through the body's sagittal (YZ) plane and swaps left and
// right joints.
PoseFrame mirror_pose(const PoseFrame& pose);

}  // namespace bpm
