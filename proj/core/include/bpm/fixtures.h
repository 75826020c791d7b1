#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bpm/motion.h"

// Procedural motions used by the tests, the benchmarks and `bpm fixtures`.
// Every generator returns a canonical 20 fps motion on the standard skeleton.
namespace bpm::fixtures {

Eigen::Quaterniond axis_angle_deg(const Eigen::Vector3d& axis, double degrees);

MotionSequence standing(int frames, const std::string& id = "standing");

// Root advances along +Z at `speed` m/s with a symmetric leg swing.
MotionSequence forward_walk(int frames, double speed = 1.0, const std::string& id = "walk");

// Right forearm swings side to side with the upper arm raised.
MotionSequence wave_right_hand(int frames, const std::string& id = "wave");

// Root yaw ramps linearly to `total_degrees` (positive = left).
MotionSequence turn_in_place(int frames, double total_degrees, const std::string& id = "turn");

// Uniform upper-body twist about the vertical spine axis with period
// `period_s`; the pose-descriptor similarity between two frames depends only
// on their phase difference.
MotionSequence spine_twist(int frames, double period_s, const std::string& id = "twist");

// Smoothly varying random joint angles bounded by `amplitude_deg`.
MotionSequence random_motion(int frames, uint64_t seed, double amplitude_deg = 30.0,
                             const std::string& id = "random");

// Independent random pose: every joint gets a random rotation of at most
// `amplitude_deg`, plus random root yaw and position.
PoseFrame random_pose(std::mt19937_64& rng, double amplitude_deg = 40.0);

struct Fixture {
  std::string coarse_text;
  MotionSequence motion;
};

// Ten motions with coarse captions: the bundled fixture set.
std::vector<Fixture> bundled();

}  // namespace bpm::fixtures
