#include "bpm/fixtures.h"

#include <cmath>
#include <numbers>

#include "bpm/motion_ops.h"

namespace bpm::fixtures {
namespace {

constexpr double kFps = 20.0;
constexpr double kPi = std::numbers::pi;
constexpr double kStandingHeight = 0.915;

MotionSequence make(const std::string& id, int frames) {
  MotionSequence m;
  m.id = id;
  m.fps = kFps;
  m.frames.resize(std::max(frames, 1));
  for (auto& f : m.frames) f.root_position = {0.0, kStandingHeight, 0.0};
  return m;
}

// 0 -> 1 -> 0 bump over the normalized time u in [0, 1].
double bump(double u) { return 0.5 - 0.5 * std::cos(2.0 * kPi * u); }

double unit(int t, int frames) { return frames > 1 ? static_cast<double>(t) / (frames - 1) : 0.0; }

Eigen::Vector3d random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::Vector3d axis;
  do {
    axis = {normal(rng), normal(rng), normal(rng)};
  } while (axis.norm() < 1e-6);
  return axis.normalized();
}

}  // namespace

Eigen::Quaterniond axis_angle_deg(const Eigen::Vector3d& axis, double degrees) {
  return Eigen::Quaterniond(Eigen::AngleAxisd(degrees * kPi / 180.0, axis.normalized()));
}

MotionSequence standing(int frames, const std::string& id) {
  return canonicalize(make(id, frames));
}

MotionSequence forward_walk(int frames, double speed, const std::string& id) {
  MotionSequence m = make(id, frames);
  const double step_hz = 1.0;
  for (int t = 0; t < m.frame_count(); ++t) {
    PoseFrame& f = m.frames[t];
    f.root_position.z() = speed * t / kFps;
    const double swing = 25.0 * std::sin(2.0 * kPi * step_hz * t / kFps);
    f.local_rotation(kLeftHip) = axis_angle_deg(Eigen::Vector3d::UnitX(), -swing);
    f.local_rotation(kRightHip) = axis_angle_deg(Eigen::Vector3d::UnitX(), swing);
    f.local_rotation(kLeftShoulder) = axis_angle_deg(Eigen::Vector3d::UnitZ(), -70.0);
    f.local_rotation(kRightShoulder) = axis_angle_deg(Eigen::Vector3d::UnitZ(), 70.0);
  }
  return canonicalize(m);
}

MotionSequence wave_right_hand(int frames, const std::string& id) {
  MotionSequence m = make(id, frames);
  for (int t = 0; t < m.frame_count(); ++t) {
    PoseFrame& f = m.frames[t];
    const double raise = 60.0 * std::min(1.0, 4.0 * unit(t, frames));
    f.local_rotation(kRightShoulder) = axis_angle_deg(Eigen::Vector3d::UnitZ(), -raise);
    const double swing = 35.0 + 35.0 * std::sin(2.0 * kPi * 1.5 * t / kFps);
    f.local_rotation(kRightElbow) = axis_angle_deg(Eigen::Vector3d::UnitZ(), -swing);
    f.local_rotation(kLeftShoulder) = axis_angle_deg(Eigen::Vector3d::UnitZ(), -70.0);
  }
  return canonicalize(m);
}

MotionSequence turn_in_place(int frames, double total_degrees, const std::string& id) {
  MotionSequence m = make(id, frames);
  for (int t = 0; t < m.frame_count(); ++t) {
    m.frames[t].root_orientation =
        axis_angle_deg(Eigen::Vector3d::UnitY(), total_degrees * unit(t, frames));
  }
  return canonicalize(m);
}

MotionSequence spine_twist(int frames, double period_s, const std::string& id) {
  MotionSequence m = make(id, frames);
  for (int t = 0; t < m.frame_count(); ++t) {
    const double phase = 2.0 * kPi * t / (period_s * kFps);
    m.frames[t].local_rotation(kSpine1) =
        Eigen::Quaterniond(Eigen::AngleAxisd(phase, Eigen::Vector3d::UnitY()));
  }
  return canonicalize(m);
}

MotionSequence random_motion(int frames, uint64_t seed, double amplitude_deg,
                             const std::string& id) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  MotionSequence m = make(id, frames);

  struct Channel {
    Eigen::Vector3d axis;
    double amplitude, hz, phase;
  };
  std::array<Channel, kNumJoints> channels;
  for (auto& c : channels) {
    c.axis = random_axis(rng);
    c.amplitude = amplitude_deg * (0.3 + 0.7 * uniform(rng));
    c.hz = 0.2 + 1.3 * uniform(rng);
    c.phase = 2.0 * kPi * uniform(rng);
  }
  const double yaw_rate = 40.0 * (uniform(rng) - 0.5);
  const Eigen::Vector3d drift(0.6 * (uniform(rng) - 0.5), 0.0, 0.8 * uniform(rng));
  const double initial_yaw = 360.0 * uniform(rng);

  for (int t = 0; t < m.frame_count(); ++t) {
    PoseFrame& f = m.frames[t];
    const double seconds = t / kFps;
    f.root_position += drift * seconds;
    // Root gets yaw plus a small tilt so the facing axis stays well defined.
    const Channel& r = channels[0];
    f.root_orientation =
        axis_angle_deg(Eigen::Vector3d::UnitY(), initial_yaw + yaw_rate * seconds) *
        axis_angle_deg(r.axis, 0.25 * r.amplitude * std::sin(2.0 * kPi * r.hz * seconds + r.phase));
    for (int j = 1; j < kNumJoints; ++j) {
      const Channel& c = channels[j];
      f.local_rotation(j) =
          axis_angle_deg(c.axis, c.amplitude * std::sin(2.0 * kPi * c.hz * seconds + c.phase));
    }
  }
  return canonicalize(m);
}

PoseFrame random_pose(std::mt19937_64& rng, double amplitude_deg) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  PoseFrame f;
  f.root_position = {4.0 * (uniform(rng) - 0.5), 0.7 + 0.3 * uniform(rng), 4.0 * (uniform(rng) - 0.5)};
  f.root_orientation = axis_angle_deg(Eigen::Vector3d::UnitY(), 360.0 * uniform(rng)) *
                       axis_angle_deg(random_axis(rng), 0.3 * amplitude_deg * uniform(rng));
  for (auto& q : f.joint_rotations) q = axis_angle_deg(random_axis(rng), amplitude_deg * uniform(rng));
  return f;
}

std::vector<Fixture> bundled() {
  std::vector<Fixture> out;
  out.push_back({"a person stands still", standing(60, "fx000")});
  out.push_back({"a person walks forward", forward_walk(100, 1.0, "fx001")});
  out.push_back({"a person waves with the right hand", wave_right_hand(80, "fx002")});
  out.push_back({"a person turns to the left", turn_in_place(80, 90.0, "fx003")});
  out.push_back({"a person turns to the right", turn_in_place(80, -90.0, "fx004")});

  {
    MotionSequence m = make("fx005", 90);
    for (int t = 0; t < m.frame_count(); ++t) {
      const double a = 70.0 * bump(unit(t, m.frame_count()));
      const double rad = a * kPi / 180.0;
      PoseFrame& f = m.frames[t];
      f.root_position.y() = kStandingHeight - 0.78 * (1.0 - std::cos(rad));
      for (int hip : {kLeftHip, kRightHip}) {
        f.local_rotation(hip) = axis_angle_deg(Eigen::Vector3d::UnitX(), -a);
      }
      for (int knee : {kLeftKnee, kRightKnee}) {
        f.local_rotation(knee) = axis_angle_deg(Eigen::Vector3d::UnitX(), 2.0 * a);
      }
      for (int ankle : {kLeftAnkle, kRightAnkle}) {
        f.local_rotation(ankle) = axis_angle_deg(Eigen::Vector3d::UnitX(), -a);
      }
    }
    out.push_back({"a person squats down and stands up", canonicalize(m)});
  }
  {
    MotionSequence m = make("fx006", 80);
    for (int t = 0; t < m.frame_count(); ++t) {
      const double a = 80.0 * bump(unit(t, m.frame_count()));
      m.frames[t].local_rotation(kLeftShoulder) = axis_angle_deg(Eigen::Vector3d::UnitZ(), a - 70.0);
      m.frames[t].local_rotation(kRightShoulder) = axis_angle_deg(Eigen::Vector3d::UnitZ(), 70.0 - a);
    }
    out.push_back({"a person raises both arms", canonicalize(m)});
  }
  {
    MotionSequence m = make("fx007", 70);
    for (int t = 0; t < m.frame_count(); ++t) {
      const double a = 60.0 * bump(unit(t, m.frame_count()));
      m.frames[t].local_rotation(kRightHip) = axis_angle_deg(Eigen::Vector3d::UnitX(), -a);
    }
    out.push_back({"a person kicks with the right leg", canonicalize(m)});
  }
  out.push_back({"a person twists the upper body", spine_twist(100, 1.2, "fx008")});
  out.push_back({"a person moves around randomly", random_motion(120, 9, 30.0, "fx009")});
  return out;
}

}  // namespace bpm::fixtures
