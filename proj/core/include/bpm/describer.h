#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "bpm/lexicon.h"
#include "bpm/motion.h"
#include "bpm/segmenter.h"

namespace bpm {

using lexicon::BodyPart;
using lexicon::Direction;
using lexicon::Magnitude;
using lexicon::MovementCode;
using lexicon::MovementKind;

// Start-to-end change of every tracked part. Vectors use the body axes
// x = left, y = up, z = forward.
struct DeltaSet {
  DeltaSet();

  // Root: pelvis translation in the start pose's facing frame. Head: head
  // relative to neck. Hands (wrists) and legs (ankles): position minus the
  // root's ground point, each pose in its own facing frame. Zero elsewhere.
  std::array<Eigen::Vector3d, lexicon::kBodyPartCount> translation;
  // Root: heading change. Torso: change of the shoulder heading relative to
  // the hips. Both positive to the left, in (-180, 180].
  // Elbows and knees: flexion change, positive = more bent.
  std::array<double, lexicon::kBodyPartCount> angle_deg;
  // Trunk (pelvis to neck) tilt change in the facing frame.
  double lean_forward_deg = 0.0;
  double lean_left_deg = 0.0;

  const Eigen::Vector3d& operator[](BodyPart p) const { return translation[static_cast<int>(p)]; }
  Eigen::Vector3d& operator[](BodyPart p) { return translation[static_cast<int>(p)]; }
  double angle(BodyPart p) const { return angle_deg[static_cast<int>(p)]; }
  double& angle(BodyPart p) { return angle_deg[static_cast<int>(p)]; }
};

struct ThresholdBand {
  double epsilon = 0.0;
  double lambda = 0.0;
};

// Magnitude buckets per channel: below epsilon the movement is dropped,
// below lambda it is "slight".
struct ThresholdTable {
  ThresholdBand translate{0.05, 0.15};  // meters
  ThresholdBand hinge{15.0, 45.0};      // degrees
  ThresholdBand yaw{10.0, 30.0};        // degrees
  ThresholdBand lean{10.0, 30.0};       // degrees

  // Throws bpm::Error unless 0 < epsilon < lambda on every channel.
  void validate() const;

  // {"translate": {"epsilon": 0.05, "lambda": 0.15}, "hinge": {...},
  //  "yaw": {...}, "lean": {...}}. Missing channels keep their defaults.
  static ThresholdTable from_json(const nlohmann::json& j);
  static ThresholdTable load(const std::string& path);
  nlohmann::json to_json() const;
};

// Share of the largest axis in |largest| + |second| below which a translation
// is reported along both axes.
inline constexpr double kDominanceRatio = 0.6;

DeltaSet body_part_deltas(const PoseFrame& start, const PoseFrame& end, const Skeleton& skeleton);

// Codes in part order (root yaw, root lean, root translation, torso, head,
// hands, legs, elbows, knees).
std::vector<MovementCode> classify_deltas(const DeltaSet& deltas, const ThresholdTable& thresholds);

// One sentence per code (or per merged left/right pair). Sentence order: root
// (turn, lean, step), torso, head, legs, knees, hands, elbows. Inside a
// left/right group the sentences are ordered by their side-neutral text so
// that mirroring the input swaps "left" and "right" and nothing else. Both
// sides with the same code merge into one plural sentence; mirror-image codes
// merge into one plural "apart"/"together" sentence.
std::string render_bpmsd(const std::vector<MovementCode>& codes);

std::string describe_snippet(const Snippet& snippet, const Skeleton& skeleton,
                             const ThresholdTable& thresholds = {});

// BPMSD of every snippet of the motion.
std::vector<std::string> describe_motion(const MotionSequence& motion, double snippet_duration_s,
                                         const ThresholdTable& thresholds = {});

}  // namespace bpm
