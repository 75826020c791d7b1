#include "bpm/json_io.h"

#include "bpm/error.h"

namespace bpm {
namespace {

using nlohmann::json;

json quat_json(const Eigen::Quaterniond& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

json vec_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec_from(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ParseError(path, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Eigen::Quaterniond quat_from(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) throw ParseError(path, "expected a w-x-y-z quaternion");
  return Eigen::Quaterniond(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                            j[3].get<double>());
}

}  // namespace

json skeleton_to_json(const Skeleton& skeleton) {
  json offsets = json::array();
  for (const auto& o : skeleton.offsets) offsets.push_back(vec_json(o));
  return {{"joint_names", skeleton.joint_names},
          {"parents", skeleton.parents},
          {"offsets", offsets}};
}

Skeleton skeleton_from_json(const json& j) {
  try {
    Skeleton s;
    s.joint_names = j.at("joint_names").get<std::vector<std::string>>();
    s.parents = j.at("parents").get<std::vector<int>>();
    const json& offsets = j.at("offsets");
    for (size_t i = 0; i < offsets.size(); ++i) {
      s.offsets.push_back(vec_from(offsets[i], "skeleton.offsets[" + std::to_string(i) + "]"));
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ParseError("skeleton", e.what());
  }
}

json motion_to_json(const MotionSequence& motion, bool with_skeleton) {
  json frames = json::array();
  for (const auto& f : motion.frames) {
    json rotations = json::array();
    for (const auto& q : f.joint_rotations) rotations.push_back(quat_json(q));
    frames.push_back({{"root_position", vec_json(f.root_position)},
                      {"root_orientation", quat_json(f.root_orientation)},
                      {"joint_rotations", rotations}});
  }
  json out = {{"id", motion.id}, {"fps", motion.fps}, {"frames", frames}};
  if (with_skeleton) out["skeleton"] = skeleton_to_json(motion.skeleton);
  return out;
}

MotionSequence motion_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("motion", "expected an object");
  try {
    MotionSequence m;
    m.id = j.value("id", std::string("motion"));
    m.fps = j.at("fps").get<double>();
    if (j.contains("skeleton")) m.skeleton = skeleton_from_json(j.at("skeleton"));
    const json& frames = j.at("frames");
    if (!frames.is_array()) throw ParseError("motion.frames", "expected an array");
    for (size_t t = 0; t < frames.size(); ++t) {
      const std::string path = "motion.frames[" + std::to_string(t) + "]";
      const json& f = frames[t];
      PoseFrame pose;
      pose.root_position = vec_from(f.at("root_position"), path + ".root_position");
      pose.root_orientation = quat_from(f.at("root_orientation"), path + ".root_orientation");
      const json& rotations = f.at("joint_rotations");
      if (!rotations.is_array() || rotations.size() != kNumBodyJoints) {
        throw ParseError(path + ".joint_rotations",
                         "expected " + std::to_string(kNumBodyJoints) + " quaternions");
      }
      for (int k = 0; k < kNumBodyJoints; ++k) {
        pose.joint_rotations[k] =
            quat_from(rotations[k], path + ".joint_rotations[" + std::to_string(k) + "]");
      }
      m.frames.push_back(pose);
    }
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw ParseError("motion", e.what());
  }
}

json positions_to_json(const std::vector<JointPositions>& positions) {
  json out = json::array();
  for (const auto& frame : positions) {
    json joints = json::array();
    for (const auto& p : frame) joints.push_back(vec_json(p));
    out.push_back(joints);
  }
  return out;
}

json features_to_json(const FeatureSequence& features) {
  json out = json::array();
  for (const auto& f : features.frames) out.push_back(std::vector<double>(f.data(), f.data() + f.size()));
  return out;
}

}  // namespace bpm
