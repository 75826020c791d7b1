#include "bpm/motion.h"

#include <cmath>

#include "bpm/error.h"

namespace bpm {
namespace {

constexpr double kUnitTolerance = 1e-6;

bool finite(const Eigen::Quaterniond& q) { return q.coeffs().allFinite(); }

void check_rotation(const Eigen::Quaterniond& q, const char* what, int index) {
  if (!finite(q) || std::abs(q.norm() - 1.0) > kUnitTolerance) {
    throw Error(std::string(what) + " " + std::to_string(index) +
                " is not a finite unit quaternion");
  }
}

}  // namespace

int mirror_joint(int joint) {
  static constexpr std::array<int, kNumJoints> kMirror = {
      kPelvis,        kRightHip,     kLeftHip,       kSpine1,        kRightKnee,
      kLeftKnee,      kSpine2,       kRightAnkle,    kLeftAnkle,     kSpine3,
      kRightFoot,     kLeftFoot,     kNeck,          kRightCollar,   kLeftCollar,
      kHead,          kRightShoulder, kLeftShoulder, kRightElbow,    kLeftElbow,
      kRightWrist,    kLeftWrist};
  return kMirror.at(joint);
}

Skeleton Skeleton::standard() {
  Skeleton s;
  s.joint_names = {"pelvis",       "left_hip",      "right_hip",      "spine1",
                   "left_knee",    "right_knee",    "spine2",         "left_ankle",
                   "right_ankle",  "spine3",        "left_foot",      "right_foot",
                   "neck",         "left_collar",   "right_collar",   "head",
                   "left_shoulder", "right_shoulder", "left_elbow",   "right_elbow",
                   "left_wrist",   "right_wrist"};
  s.parents = {-1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14, 16, 17, 18, 19};
  s.offsets = {
      {0.0, 0.0, 0.0},       // pelvis
      {0.06, -0.09, 0.0},    // left_hip
      {-0.06, -0.09, 0.0},   // right_hip
      {0.0, 0.11, 0.0},      // spine1
      {0.0, -0.38, 0.0},     // left_knee
      {0.0, -0.38, 0.0},     // right_knee
      {0.0, 0.13, 0.0},      // spine2
      {0.0, -0.40, 0.0},     // left_ankle
      {0.0, -0.40, 0.0},     // right_ankle
      {0.0, 0.06, 0.0},      // spine3
      {0.0, -0.045, 0.11},   // left_foot
      {0.0, -0.045, 0.11},   // right_foot
      {0.0, 0.21, 0.0},      // neck
      {0.07, 0.12, 0.0},     // left_collar
      {-0.07, 0.12, 0.0},    // right_collar
      {0.0, 0.09, 0.03},     // head
      {0.11, 0.03, 0.0},     // left_shoulder
      {-0.11, 0.03, 0.0},    // right_shoulder
      {0.26, 0.0, 0.0},      // left_elbow
      {-0.26, 0.0, 0.0},     // right_elbow
      {0.25, 0.0, 0.0},      // left_wrist
      {-0.25, 0.0, 0.0},     // right_wrist
  };
  return s;
}

void Skeleton::validate() const {
  if (parents.size() != static_cast<size_t>(kNumJoints) ||
      offsets.size() != parents.size() || joint_names.size() != parents.size()) {
    throw Error("skeleton must have exactly " + std::to_string(kNumJoints) + " joints");
  }
  int roots = 0;
  for (int j = 0; j < size(); ++j) {
    if (parents[j] < 0) {
      ++roots;
      if (j != 0) throw Error("skeleton root must be joint 0");
    } else if (parents[j] >= j) {
      throw Error("joint " + std::to_string(j) + " is not topologically ordered");
    }
    if (!offsets[j].allFinite()) {
      throw Error("offset of joint " + std::to_string(j) + " is not finite");
    }
    if (j > 0 && offsets[j].norm() <= 0.0) {
      throw Error("offset of joint " + std::to_string(j) + " has zero length");
    }
  }
  if (roots != 1) throw Error("skeleton must have exactly one root");
}

std::array<Eigen::Quaterniond, kNumBodyJoints> PoseFrame::identity_rotations() {
  std::array<Eigen::Quaterniond, kNumBodyJoints> out;
  out.fill(Eigen::Quaterniond::Identity());
  return out;
}

void PoseFrame::validate() const {
  if (!root_position.allFinite()) throw Error("root position is not finite");
  check_rotation(root_orientation, "root orientation", 0);
  for (int k = 0; k < kNumBodyJoints; ++k) {
    check_rotation(joint_rotations[k], "rotation of joint", k + 1);
  }
}

bool operator==(const PoseFrame& a, const PoseFrame& b) {
  if (a.root_position != b.root_position) return false;
  if (a.root_orientation.coeffs() != b.root_orientation.coeffs()) return false;
  for (int k = 0; k < kNumBodyJoints; ++k) {
    if (a.joint_rotations[k].coeffs() != b.joint_rotations[k].coeffs()) return false;
  }
  return true;
}

void MotionSequence::validate() const {
  if (!(fps > 0.0) || !std::isfinite(fps)) throw Error("fps must be positive");
  if (frames.empty()) throw Error("motion '" + id + "' has no frames");
  skeleton.validate();
  for (const auto& f : frames) f.validate();
}

namespace {

// Reflection through the YZ plane maps a rotation quaternion (w, x, y, z) to
// (w, x, -y, -z).
Eigen::Quaterniond mirror_rotation(const Eigen::Quaterniond& q) {
  return Eigen::Quaterniond(q.w(), q.x(), -q.y(), -q.z());
}

}  // namespace

PoseFrame mirror_pose(const PoseFrame& pose) {
  PoseFrame out;
  out.root_position = pose.root_position;
  out.root_position.x() = -out.root_position.x();
  out.root_orientation = mirror_rotation(pose.root_orientation);
  for (int j = 1; j < kNumJoints; ++j) {
    out.local_rotation(mirror_joint(j)) = mirror_rotation(pose.local_rotation(j));
  }
  return out;
}

}  // namespace bpm
