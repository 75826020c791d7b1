#include "bpm/kinematics.h"

#include <cmath>
#include <numbers>

#include "bpm/error.h"

namespace bpm {

GlobalRotations global_rotations(const PoseFrame& pose, const Skeleton& skeleton) {
  GlobalRotations global;
  global[0] = pose.root_orientation;
  for (int j = 1; j < kNumJoints; ++j) {
    global[j] = global[skeleton.parents[j]] * pose.local_rotation(j);
  }
  return global;
}

JointPositions forward_kinematics(const PoseFrame& pose, const Skeleton& skeleton) {
  const GlobalRotations global = global_rotations(pose, skeleton);
  JointPositions positions;
  positions[0] = pose.root_position;
  for (int j = 1; j < kNumJoints; ++j) {
    const int parent = skeleton.parents[j];
    positions[j] = positions[parent] + global[parent] * skeleton.offsets[j];
  }
  return positions;
}

Eigen::Vector3d facing_direction(const JointPositions& positions) {
  const Eigen::Vector3d across = positions[kLeftHip] - positions[kRightHip];
  Eigen::Vector3d forward = across.cross(Eigen::Vector3d::UnitY());
  forward.y() = 0.0;
  const double length = forward.norm();
  if (!(length > 1e-12)) throw Error("degenerate orientation");
  return forward / length;
}

double facing_yaw(const JointPositions& positions) {
  const Eigen::Vector3d f = facing_direction(positions);
  return std::atan2(f.x(), f.z());
}

Eigen::Quaterniond yaw_rotation(double radians) {
  return Eigen::Quaterniond(Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitY()));
}

double wrap_angle(double radians) {
  constexpr double kPi = std::numbers::pi;
  double a = std::remainder(radians, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Eigen::Quaterniond slerp_shortest(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b,
                                  double t) {
  Eigen::Quaterniond end = b;
  double cos_theta = a.dot(b);
  if (cos_theta < 0.0) {
    end.coeffs() = -end.coeffs();
    cos_theta = -cos_theta;
  }
  Eigen::Vector4d mixed;
  if (cos_theta > 1.0 - 1e-12) {
    mixed = (1.0 - t) * a.coeffs() + t * end.coeffs();
  } else {
    const double theta = std::acos(std::min(1.0, cos_theta));
    const double s = std::sin(theta);
    mixed = (std::sin((1.0 - t) * theta) / s) * a.coeffs() +
            (std::sin(t * theta) / s) * end.coeffs();
  }
  Eigen::Quaterniond out;
  out.coeffs() = mixed.normalized();
  return out;
}

}  // namespace bpm
