#include "bpm/features.h"

#include <cmath>

#include <Eigen/SVD>

#include "bpm/error.h"
#include "bpm/kinematics.h"
#include "bpm/motion_ops.h"

namespace bpm {
namespace {

using L = FeatureLayout;

constexpr std::array<int, 4> kContactJoints = {kLeftAnkle, kLeftFoot, kRightAnkle, kRightFoot};

Eigen::Matrix<double, 6, 1> to_6d(const Eigen::Quaterniond& q) {
  const Eigen::Matrix3d m = q.toRotationMatrix();
  Eigen::Matrix<double, 6, 1> out;
  out << m.col(0), m.col(1);
  return out;
}

Eigen::Quaterniond from_6d(const Eigen::Ref<const Eigen::Matrix<double, 6, 1>>& v) {
  const Eigen::Vector3d a = v.head<3>();
  const Eigen::Vector3d b = v.tail<3>();
  if (a.norm() < 1e-9) return Eigen::Quaterniond::Identity();
  const Eigen::Vector3d x = a.normalized();
  Eigen::Vector3d y = b - x.dot(b) * x;
  if (y.norm() < 1e-9) return Eigen::Quaterniond::Identity();
  y.normalize();
  Eigen::Matrix3d m;
  m << x, y, x.cross(y);
  return Eigen::Quaterniond(m).normalized();
}

// Rotation R minimizing sum |R a_i - b_i|^2.
Eigen::Quaterniond fit_rotation(const std::vector<Eigen::Vector3d>& from,
                                const std::vector<Eigen::Vector3d>& to) {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (size_t i = 0; i < from.size(); ++i) h += from[i] * to[i].transpose();
  if (h.norm() < 1e-12) return Eigen::Quaterniond::Identity();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0 ? -1.0 : 1.0;
  const Eigen::Matrix3d r = svd.matrixV() * d * svd.matrixU().transpose();
  return Eigen::Quaterniond(r).normalized();
}

}  // namespace

const std::vector<FeatureLayout::Block>& FeatureLayout::blocks() {
  static const std::vector<Block> kBlocks = {
      {"root_angular_velocity", kRootAngularVelocity, 1},
      {"root_linear_velocity", kRootLinearVelocity, 2},
      {"root_height", kRootHeight, 1},
      {"joint_positions", kJointPositions, 63},
      {"joint_rotations_6d", kJointRotations, 126},
      {"joint_velocities", kJointVelocities, 66},
      {"foot_contacts", kFootContacts, 4},
  };
  return kBlocks;
}

FeatureSequence encode_features(const MotionSequence& motion, const FootContactThresholds& contact) {
  motion.validate();
  if (std::abs(motion.fps - 20.0) > 1e-9) {
    throw Error("feature encoding requires 20 fps input, got " + std::to_string(motion.fps));
  }
  if (!is_canonical(motion)) throw Error("feature encoding requires a canonical motion");

  const int n = motion.frame_count();
  std::vector<JointPositions> positions(n);
  std::vector<double> yaw(n);
  for (int t = 0; t < n; ++t) {
    positions[t] = forward_kinematics(motion.frames[t], motion.skeleton);
    yaw[t] = facing_yaw(positions[t]);
  }

  FeatureSequence out;
  out.frames.resize(n);
  for (int t = 0; t < n; ++t) {
    FeatureFrame& f = out.frames[t];
    f.setZero();
    const Eigen::Quaterniond to_local = yaw_rotation(-yaw[t]);
    const Eigen::Vector3d root = positions[t][kPelvis];
    const Eigen::Vector3d root_xz(root.x(), 0.0, root.z());

    // Velocity source pair: (t, t+1), or (n-2, n-1) on the last frame.
    const int a = (t + 1 < n) ? t : t - 1;
    const bool has_motion = n > 1;

    if (has_motion) {
      const Eigen::Quaterniond velocity_frame = yaw_rotation(-yaw[a]);
      f[L::kRootAngularVelocity] = wrap_angle(yaw[a + 1] - yaw[a]);
      const Eigen::Vector3d v =
          velocity_frame * (positions[a + 1][kPelvis] - positions[a][kPelvis]);
      f[L::kRootLinearVelocity] = v.x();
      f[L::kRootLinearVelocity + 1] = v.z();
      for (int j = 0; j < kNumJoints; ++j) {
        f.segment<3>(L::kJointVelocities + 3 * j) =
            velocity_frame * (positions[a + 1][j] - positions[a][j]);
      }
    }
    f[L::kRootHeight] = root.y();
    for (int j = 1; j < kNumJoints; ++j) {
      f.segment<3>(L::kJointPositions + 3 * (j - 1)) = to_local * (positions[t][j] - root_xz);
      f.segment<6>(L::kJointRotations + 6 * (j - 1)) =
          to_6d(motion.frames[t].local_rotation(j));
    }
    for (int c = 0; c < 4; ++c) {
      const int j = kContactJoints[c];
      const double speed =
          has_motion ? (positions[a + 1][j] - positions[a][j]).norm() : 0.0;
      const bool touching = speed < contact.max_speed && positions[t][j].y() < contact.max_height;
      f[L::kFootContacts + c] = touching ? 1.0 : 0.0;
    }
  }
  return out;
}

std::vector<JointPositions> feature_positions(const FeatureSequence& features) {
  std::vector<JointPositions> out;
  out.reserve(features.frames.size());
  double yaw = 0.0;
  Eigen::Vector3d root_xz = Eigen::Vector3d::Zero();
  for (const auto& f : features.frames) {
    if (!f.allFinite()) throw Error("feature frame contains non-finite values");
    const Eigen::Quaterniond to_world = yaw_rotation(yaw);
    JointPositions p;
    p[kPelvis] = root_xz + Eigen::Vector3d(0.0, f[L::kRootHeight], 0.0);
    for (int j = 1; j < kNumJoints; ++j) {
      p[j] = to_world * Eigen::Vector3d(f.segment<3>(L::kJointPositions + 3 * (j - 1))) + root_xz;
    }
    out.push_back(p);
    const Eigen::Vector3d v(f[L::kRootLinearVelocity], 0.0, f[L::kRootLinearVelocity + 1]);
    root_xz += to_world * v;
    yaw += f[L::kRootAngularVelocity];
  }
  return out;
}

MotionSequence decode_features(const FeatureSequence& features, const Skeleton& skeleton,
                               const std::string& id) {
  skeleton.validate();
  if (features.frames.empty()) throw Error("cannot decode an empty feature sequence");
  const std::vector<JointPositions> positions = feature_positions(features);

  const std::vector<Eigen::Vector3d> rest = {skeleton.offsets[kLeftHip],
                                             skeleton.offsets[kRightHip],
                                             skeleton.offsets[kSpine1]};
  MotionSequence out;
  out.id = id;
  out.fps = 20.0;
  out.skeleton = skeleton;
  out.frames.reserve(features.frames.size());
  for (size_t t = 0; t < features.frames.size(); ++t) {
    const FeatureFrame& f = features.frames[t];
    const JointPositions& p = positions[t];
    PoseFrame pose;
    pose.root_position = p[kPelvis];
    pose.root_orientation = fit_rotation(
        rest, {p[kLeftHip] - p[kPelvis], p[kRightHip] - p[kPelvis], p[kSpine1] - p[kPelvis]});
    for (int j = 1; j < kNumJoints; ++j) {
      pose.local_rotation(j) = from_6d(f.segment<6>(L::kJointRotations + 6 * (j - 1)));
    }
    out.frames.push_back(pose);
  }
  return out;
}

FeatureSequence features_from_flat(const std::vector<float>& values) {
  if (values.size() % L::kWidth != 0) {
    throw Error("feature payload length " + std::to_string(values.size()) +
                " is not a multiple of " + std::to_string(L::kWidth));
  }
  FeatureSequence out;
  out.frames.resize(values.size() / L::kWidth);
  for (size_t t = 0; t < out.frames.size(); ++t) {
    for (int c = 0; c < L::kWidth; ++c) out.frames[t][c] = values[t * L::kWidth + c];
  }
  return out;
}

}  // namespace bpm
