#pragma once

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "bpm/motion.h"

namespace bpm {

using GlobalRotations = std::array<Eigen::Quaterniond, kNumJoints>;

// World-space joint positions. The root lands on pose.root_position and every
// child sits at parent + parent_global_rotation * offset.
JointPositions forward_kinematics(const PoseFrame& pose, const Skeleton& skeleton);

GlobalRotations global_rotations(const PoseFrame& pose, const Skeleton& skeleton);

// Horizontal unit vector the body faces: normalize(cross(left_hip -
// right_hip, +Y)). Throws "degenerate orientation" when the hip axis is
// vertical.
Eigen::Vector3d facing_direction(const JointPositions& positions);

// Heading angle in radians, positive from +Z towards +X (a left turn).
double facing_yaw(const JointPositions& positions);

Eigen::Quaterniond yaw_rotation(double radians);

// Wraps an angle in radians into (-pi, pi].
double wrap_angle(double radians);

// Shortest-arc spherical interpolation; the result is unit-norm.
Eigen::Quaterniond slerp_shortest(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b,
                                  double t);

}  // namespace bpm
