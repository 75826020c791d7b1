#include "bpm/describer.h"

#include <algorithm>
#include <cmath>
#include <optional>

#include <nlohmann/json.hpp>

#include "bpm/error.h"
#include "bpm/kinematics.h"
#include "bpm/motion_io.h"

namespace bpm {
namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

// Everything measured on one pose.
struct PoseGeometry {
  Eigen::Vector3d root;
  Eigen::Quaterniond to_local;  // world -> facing frame
  double yaw = 0.0;
  JointPositions p;

  Eigen::Vector3d grounded(int joint) const {
    return to_local * (p[joint] - Eigen::Vector3d(root.x(), 0.0, root.z()));
  }
};

PoseGeometry measure(const PoseFrame& pose, const Skeleton& skeleton) {
  PoseGeometry g;
  g.p = forward_kinematics(pose, skeleton);
  g.root = g.p[kPelvis];
  g.yaw = facing_yaw(g.p);
  g.to_local = yaw_rotation(-g.yaw);
  return g;
}

double flexion_deg(const JointPositions& p, int a, int b, int c) {
  const Eigen::Vector3d upper = p[b] - p[a];
  const Eigen::Vector3d lower = p[c] - p[b];
  const double cosine = std::clamp(upper.dot(lower) / (upper.norm() * lower.norm()), -1.0, 1.0);
  return std::acos(cosine) * kRadToDeg;
}

// Shoulder heading relative to the hip heading, in radians.
double shoulder_twist(const PoseGeometry& g) {
  const Eigen::Vector3d axis = g.p[kLeftShoulder] - g.p[kRightShoulder];
  const Eigen::Vector3d f = axis.cross(Eigen::Vector3d::UnitY());
  if (std::hypot(f.x(), f.z()) < 1e-12) return 0.0;
  return wrap_angle(std::atan2(f.x(), f.z()) - g.yaw);
}

double wrap_deg(double radians) {
  // wrap_angle keeps pi itself, so +180 stays +180.
  return wrap_angle(radians) * kRadToDeg;
}

void check_band(const ThresholdBand& b, const char* name) {
  if (!(std::isfinite(b.epsilon) && std::isfinite(b.lambda) && b.epsilon > 0.0 &&
        b.epsilon < b.lambda)) {
    throw Error(std::string("threshold table: channel '") + name +
                "' needs 0 < epsilon < lambda");
  }
}

std::optional<Magnitude> bucket(double m, const ThresholdBand& b) {
  if (m < b.epsilon) return std::nullopt;
  return m < b.lambda ? Magnitude::kSlight : Magnitude::kPlain;
}

Direction axis_direction(int axis, double value) {
  switch (axis) {
    case 0: return value > 0 ? Direction::kLeft : Direction::kRight;
    case 1: return value > 0 ? Direction::kUp : Direction::kDown;
    default: return value > 0 ? Direction::kForward : Direction::kBack;
  }
}

std::optional<MovementCode> classify_translation(BodyPart part, const Eigen::Vector3d& v,
                                                 const ThresholdBand& band) {
  const auto mag = bucket(v.norm(), band);
  if (!mag) return std::nullopt;
  // Axes by decreasing magnitude; exact ties resolve as vertical, sagittal,
  // lateral, which is the same for a pose and its mirror.
  std::array<int, 3> order = {1, 2, 0};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(v[a]) > std::abs(v[b]); });
  const double top = std::abs(v[order[0]]);
  const double second = std::abs(v[order[1]]);
  MovementCode code{part, MovementKind::kTranslate, axis_direction(order[0], v[order[0]]), *mag,
                    std::nullopt};
  if (top / (top + second) < kDominanceRatio) {
    code.secondary = axis_direction(order[1], v[order[1]]);
  }
  return code;
}

std::optional<MovementCode> classify_angle(BodyPart part, MovementKind kind, double deg,
                                           const ThresholdBand& band, Direction positive,
                                           Direction negative) {
  const auto mag = bucket(std::abs(deg), band);
  if (!mag) return std::nullopt;
  return MovementCode{part, kind, deg > 0 ? positive : negative, *mag, std::nullopt};
}

// ---- rendering ----

bool is_lateral(Direction d) { return d == Direction::kLeft || d == Direction::kRight; }
bool is_vertical(Direction d) { return d == Direction::kUp || d == Direction::kDown; }

bool has_lateral(const MovementCode& c) {
  return is_lateral(c.direction) || (c.secondary && is_lateral(*c.secondary));
}

// Horizontal phrase. `lateral` replaces "to the left/right" when a mirrored
// pair is rendered as one sentence ("apart" / "together").
std::string horizontal(Direction d, const std::string& lateral) {
  switch (d) {
    case Direction::kForward: return "forward";
    case Direction::kBack: return "back";
    case Direction::kLeft: return lateral.empty() ? "to the left" : lateral;
    case Direction::kRight: return lateral.empty() ? "to the right" : lateral;
    default: throw Error("not a horizontal direction");
  }
}

std::string root_translation(const MovementCode& c) {
  auto vertical = [](Direction d, bool capital) {
    const std::string s = d == Direction::kUp ? "rise up" : "crouch down";
    return capital ? char(std::toupper(s[0])) + s.substr(1) : s;
  };
  if (!c.secondary) {
    if (is_vertical(c.direction)) return vertical(c.direction, true);
    return "Step " + horizontal(c.direction, "");
  }
  const Direction s = *c.secondary;
  if (is_vertical(c.direction)) return vertical(c.direction, true) + " and step " + horizontal(s, "");
  if (is_vertical(s)) return "Step " + horizontal(c.direction, "") + " and " + vertical(s, false);
  return "Step " + horizontal(c.direction, "") + " and " + horizontal(s, "");
}

std::string limb_translation(const MovementCode& c, const std::string& noun, bool plural,
                             const std::string& lateral) {
  const std::string object = plural ? "them" : "it";
  auto vertical_verb = [](Direction d) { return d == Direction::kUp ? "raise" : "lower"; };
  auto capital = [](std::string s) {
    s[0] = static_cast<char>(std::toupper(s[0]));
    return s;
  };
  if (!c.secondary) {
    if (is_vertical(c.direction)) return capital(vertical_verb(c.direction)) + " your " + noun;
    return "Move your " + noun + " " + horizontal(c.direction, lateral);
  }
  const Direction s = *c.secondary;
  if (is_vertical(c.direction)) {
    return capital(vertical_verb(c.direction)) + " your " + noun + " and move " + object + " " +
           horizontal(s, lateral);
  }
  if (is_vertical(s)) {
    return "Move your " + noun + " " + horizontal(c.direction, lateral) + " and " +
           vertical_verb(s) + " " + object;
  }
  return "Move your " + noun + " " + horizontal(c.direction, lateral) + " and " +
         horizontal(s, lateral);
}

std::string side_of(BodyPart p) {
  switch (p) {
    case BodyPart::kLeftHand:
    case BodyPart::kLeftLeg:
    case BodyPart::kLeftElbow:
    case BodyPart::kLeftKnee: return "left";
    default: return "right";
  }
}

std::string base_noun(BodyPart p) {
  switch (p) {
    case BodyPart::kHead: return "head";
    case BodyPart::kLeftHand:
    case BodyPart::kRightHand: return "hand";
    case BodyPart::kLeftLeg:
    case BodyPart::kRightLeg: return "leg";
    case BodyPart::kLeftElbow:
    case BodyPart::kRightElbow: return "elbow";
    case BodyPart::kLeftKnee:
    case BodyPart::kRightKnee: return "knee";
    default: return "";
  }
}

bool is_sided(BodyPart p) { return p != BodyPart::kRoot && p != BodyPart::kTorso && p != BodyPart::kHead; }

// Sentence without the final period. `plural` renders the pair noun,
// `lateral` is set for mirror-image pairs.
std::string sentence(const MovementCode& c, bool plural, const std::string& lateral) {
  std::string s;
  switch (c.kind) {
    case MovementKind::kYaw: {
      const std::string side = c.direction == Direction::kTurnLeft ? "left" : "right";
      s = c.part == BodyPart::kRoot ? "Turn to the " + side
                                    : "Turn your upper body to the " + side;
      break;
    }
    case MovementKind::kLean:
      switch (c.direction) {
        case Direction::kLeanLeft: s = "Lean to the left"; break;
        case Direction::kLeanRight: s = "Lean to the right"; break;
        case Direction::kLeanForward: s = "Lean forward"; break;
        default: s = "Lean back"; break;
      }
      break;
    case MovementKind::kHinge: {
      const std::string noun = plural ? base_noun(c.part) + "s" : side_of(c.part) + " " + base_noun(c.part);
      s = (c.direction == Direction::kBend ? "Bend your " : "Straighten your ") + noun;
      break;
    }
    case MovementKind::kTranslate:
      if (c.part == BodyPart::kRoot) {
        s = root_translation(c);
      } else {
        std::string noun = base_noun(c.part);
        if (plural) noun += "s";
        else if (is_sided(c.part)) noun = side_of(c.part) + " " + noun;
        s = limb_translation(c, noun, plural, lateral);
      }
      break;
  }
  if (c.magnitude == Magnitude::kSlight) s += " slightly";
  return s + ".";
}

int render_group(const MovementCode& c) {
  switch (c.part) {
    case BodyPart::kRoot:
      return c.kind == MovementKind::kYaw ? 0 : c.kind == MovementKind::kLean ? 1 : 2;
    case BodyPart::kTorso: return 3;
    case BodyPart::kHead: return 4;
    case BodyPart::kLeftLeg:
    case BodyPart::kRightLeg: return 5;
    case BodyPart::kLeftKnee:
    case BodyPart::kRightKnee: return 6;
    case BodyPart::kLeftHand:
    case BodyPart::kRightHand: return 7;
    case BodyPart::kLeftElbow:
    case BodyPart::kRightElbow: return 8;
  }
  return 9;
}

// Sort key that a left/right swap leaves unchanged.
std::string side_neutral(const std::string& text) {
  std::string a = lexicon::swap_sides(text);
  return std::min(a, text) + "|" + std::max(a, text);
}

bool same_except_side(const MovementCode& a, const MovementCode& b) {
  return a.kind == b.kind && a.direction == b.direction && a.magnitude == b.magnitude &&
         a.secondary == b.secondary;
}

}  // namespace

DeltaSet::DeltaSet() {
  translation.fill(Eigen::Vector3d::Zero());
  angle_deg.fill(0.0);
}

void ThresholdTable::validate() const {
  check_band(translate, "translate");
  check_band(hinge, "hinge");
  check_band(yaw, "yaw");
  check_band(lean, "lean");
}

ThresholdTable ThresholdTable::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("threshold table must be a JSON object");
  ThresholdTable t;
  auto read = [&](const char* key, ThresholdBand& band) {
    if (!j.contains(key)) return;
    const auto& b = j.at(key);
    if (!b.is_object() || !b.contains("epsilon") || !b.contains("lambda") ||
        !b.at("epsilon").is_number() || !b.at("lambda").is_number()) {
      throw Error(std::string("threshold table: '") + key + "' needs numeric epsilon and lambda");
    }
    band = {b.at("epsilon").get<double>(), b.at("lambda").get<double>()};
  };
  for (const auto& [key, value] : j.items()) {
    if (key != "translate" && key != "hinge" && key != "yaw" && key != "lean") {
      throw Error("threshold table: unknown channel '" + key + "'");
    }
  }
  read("translate", t.translate);
  read("hinge", t.hinge);
  read("yaw", t.yaw);
  read("lean", t.lean);
  t.validate();
  return t;
}

ThresholdTable ThresholdTable::load(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path, e.what());
  }
  return from_json(j);
}

nlohmann::json ThresholdTable::to_json() const {
  auto band = [](const ThresholdBand& b) {
    return nlohmann::json{{"epsilon", b.epsilon}, {"lambda", b.lambda}};
  };
  return {{"translate", band(translate)},
          {"hinge", band(hinge)},
          {"yaw", band(yaw)},
          {"lean", band(lean)}};
}

DeltaSet body_part_deltas(const PoseFrame& start, const PoseFrame& end, const Skeleton& skeleton) {
  skeleton.validate();
  const PoseGeometry a = measure(start, skeleton);
  const PoseGeometry b = measure(end, skeleton);
  DeltaSet d;

  d[BodyPart::kRoot] = a.to_local * (b.root - a.root);
  d.angle(BodyPart::kRoot) = wrap_deg(b.yaw - a.yaw);
  d.angle(BodyPart::kTorso) = wrap_deg(shoulder_twist(b) - shoulder_twist(a));

  const Eigen::Vector3d trunk_a = a.to_local * (a.p[kNeck] - a.p[kPelvis]);
  const Eigen::Vector3d trunk_b = b.to_local * (b.p[kNeck] - b.p[kPelvis]);
  d.lean_forward_deg =
      (std::atan2(trunk_b.z(), trunk_b.y()) - std::atan2(trunk_a.z(), trunk_a.y())) * kRadToDeg;
  d.lean_left_deg =
      (std::atan2(trunk_b.x(), trunk_b.y()) - std::atan2(trunk_a.x(), trunk_a.y())) * kRadToDeg;

  d[BodyPart::kHead] = b.to_local * (b.p[kHead] - b.p[kNeck]) - a.to_local * (a.p[kHead] - a.p[kNeck]);
  d[BodyPart::kLeftHand] = b.grounded(kLeftWrist) - a.grounded(kLeftWrist);
  d[BodyPart::kRightHand] = b.grounded(kRightWrist) - a.grounded(kRightWrist);
  d[BodyPart::kLeftLeg] = b.grounded(kLeftAnkle) - a.grounded(kLeftAnkle);
  d[BodyPart::kRightLeg] = b.grounded(kRightAnkle) - a.grounded(kRightAnkle);

  auto flex = [&](BodyPart part, int j0, int j1, int j2) {
    d.angle(part) = flexion_deg(b.p, j0, j1, j2) - flexion_deg(a.p, j0, j1, j2);
  };
  flex(BodyPart::kLeftElbow, kLeftShoulder, kLeftElbow, kLeftWrist);
  flex(BodyPart::kRightElbow, kRightShoulder, kRightElbow, kRightWrist);
  flex(BodyPart::kLeftKnee, kLeftHip, kLeftKnee, kLeftAnkle);
  flex(BodyPart::kRightKnee, kRightHip, kRightKnee, kRightAnkle);
  return d;
}

std::vector<MovementCode> classify_deltas(const DeltaSet& deltas, const ThresholdTable& thresholds) {
  thresholds.validate();
  std::vector<MovementCode> codes;
  auto push = [&](std::optional<MovementCode> c) {
    if (c) codes.push_back(*c);
  };

  push(classify_angle(BodyPart::kRoot, MovementKind::kYaw, deltas.angle(BodyPart::kRoot),
                      thresholds.yaw, Direction::kTurnLeft, Direction::kTurnRight));
  {
    const double f = deltas.lean_forward_deg;
    const double l = deltas.lean_left_deg;
    if (const auto mag = bucket(std::hypot(f, l), thresholds.lean)) {
      const Direction dir = std::abs(f) >= std::abs(l)
                                ? (f > 0 ? Direction::kLeanForward : Direction::kLeanBack)
                                : (l > 0 ? Direction::kLeanLeft : Direction::kLeanRight);
      codes.push_back({BodyPart::kRoot, MovementKind::kLean, dir, *mag, std::nullopt});
    }
  }
  push(classify_translation(BodyPart::kRoot, deltas[BodyPart::kRoot], thresholds.translate));
  push(classify_angle(BodyPart::kTorso, MovementKind::kYaw, deltas.angle(BodyPart::kTorso),
                      thresholds.yaw, Direction::kTurnLeft, Direction::kTurnRight));
  for (BodyPart p : {BodyPart::kHead, BodyPart::kLeftHand, BodyPart::kRightHand,
                     BodyPart::kLeftLeg, BodyPart::kRightLeg}) {
    push(classify_translation(p, deltas[p], thresholds.translate));
  }
  for (BodyPart p : {BodyPart::kLeftElbow, BodyPart::kRightElbow, BodyPart::kLeftKnee,
                     BodyPart::kRightKnee}) {
    push(classify_angle(p, MovementKind::kHinge, deltas.angle(p), thresholds.hinge,
                        Direction::kBend, Direction::kStraighten));
  }
  return codes;
}

std::string render_bpmsd(const std::vector<MovementCode>& codes) {
  // Collect codes per render group; a group holds at most one code per side.
  std::array<std::vector<MovementCode>, 9> groups;
  for (const auto& c : codes) groups[render_group(c)].push_back(c);

  std::string out;
  auto emit = [&](const std::string& s) {
    if (!out.empty()) out += ' ';
    out += s;
  };
  for (auto& group : groups) {
    if (group.empty()) continue;
    if (group.size() == 2 && is_sided(group[0].part) && group[0].part == lexicon::mirror(group[1].part)) {
      const MovementCode& left =
          side_of(group[0].part) == "left" ? group[0] : group[1];
      const MovementCode& right = &left == &group[0] ? group[1] : group[0];
      if (same_except_side(left, right)) {
        emit(sentence(left, true, ""));
        continue;
      }
      if (has_lateral(left) && same_except_side(lexicon::mirror(left), right)) {
        // Left side moving left means the pair spreads.
        const bool outward = left.direction == Direction::kLeft ||
                             (left.secondary && *left.secondary == Direction::kLeft);
        emit(sentence(left, true, outward ? "apart" : "together"));
        continue;
      }
    }
    std::vector<std::pair<std::string, std::string>> keyed;
    for (const auto& c : group) {
      const std::string s = sentence(c, false, "");
      keyed.emplace_back(side_neutral(s), s);
    }
    std::sort(keyed.begin(), keyed.end());
    for (const auto& [key, s] : keyed) emit(s);
  }
  return out;
}

std::string describe_snippet(const Snippet& snippet, const Skeleton& skeleton,
                             const ThresholdTable& thresholds) {
  return render_bpmsd(
      classify_deltas(body_part_deltas(snippet.start_pose, snippet.end_pose, skeleton), thresholds));
}

std::vector<std::string> describe_motion(const MotionSequence& motion, double snippet_duration_s,
                                         const ThresholdTable& thresholds) {
  std::vector<std::string> texts;
  for (const auto& s : segment(motion, snippet_duration_s)) {
    texts.push_back(describe_snippet(s, motion.skeleton, thresholds));
  }
  return texts;
}

}  // namespace bpm
