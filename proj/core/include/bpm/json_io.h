#pragma once

#include <nlohmann/json.hpp>

#include "bpm/features.h"
#include "bpm/motion.h"

namespace bpm {

nlohmann::json skeleton_to_json(const Skeleton& skeleton);
Skeleton skeleton_from_json(const nlohmann::json& j);

// {"id", "fps", "frames": [{"root_position": [x,y,z], "root_orientation":
// [w,x,y,z], "joint_rotations": [[w,x,y,z] x 21]}]}; "skeleton" is optional
// on input and defaults to the standard template.
nlohmann::json motion_to_json(const MotionSequence& motion, bool with_skeleton = false);
MotionSequence motion_from_json(const nlohmann::json& j);

nlohmann::json positions_to_json(const std::vector<JointPositions>& positions);
nlohmann::json features_to_json(const FeatureSequence& features);

}  // namespace bpm
