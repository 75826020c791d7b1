#include "bpm/lexicon.h"

#include <algorithm>
#include <cctype>
#include <map>

namespace bpm::lexicon {
namespace {

struct VerbForms {
  std::string base;
  std::string third;
  std::string ing;
  std::string past;
};

// Base verbs generated by the describer come first; the rest cover the
// phrasing that shows up in hand-written and LLM paragraphs.
const std::vector<VerbForms>& verb_table() {
  static const std::vector<VerbForms> table = {
      {"move", "moves", "moving", "moved"},
      {"raise", "raises", "raising", "raised"},
      {"lower", "lowers", "lowering", "lowered"},
      {"bend", "bends", "bending", "bent"},
      {"straighten", "straightens", "straightening", "straightened"},
      {"turn", "turns", "turning", "turned"},
      {"lean", "leans", "leaning", "leaned"},
      {"step", "steps", "stepping", "stepped"},
      {"rise", "rises", "rising", "rose"},
      {"crouch", "crouches", "crouching", "crouched"},
      {"bring", "brings", "bringing", "brought"},
      {"keep", "keeps", "keeping", "kept"},
      {"return", "returns", "returning", "returned"},
      {"lift", "lifts", "lifting", "lifted"},
      {"extend", "extends", "extending", "extended"},
      {"rotate", "rotates", "rotating", "rotated"},
      {"twist", "twists", "twisting", "twisted"},
      {"spread", "spreads", "spreading", "spread"},
      {"put", "puts", "putting", "put"},
      {"swing", "swings", "swinging", "swung"},
      {"kick", "kicks", "kicking", "kicked"},
      {"stretch", "stretches", "stretching", "stretched"},
      {"tilt", "tilts", "tilting", "tilted"},
      {"shift", "shifts", "shifting", "shifted"},
  };
  return table;
}

const std::map<std::string, std::string, std::less<>>& part_stems() {
  static const std::map<std::string, std::string, std::less<>> stems = [] {
    std::map<std::string, std::string, std::less<>> m;
    for (const char* noun : {"head", "neck", "shoulder", "arm", "forearm", "elbow", "wrist", "hand",
                             "finger", "chest", "torso", "waist", "hip", "thigh", "leg", "knee",
                             "shin", "ankle", "heel", "toe"}) {
      m[noun] = noun;
      m[std::string(noun) + "s"] = noun;
    }
    m["foot"] = "foot";
    m["feet"] = "foot";
    m["upper body"] = "upper body";
    return m;
  }();
  return stems;
}

const std::map<std::string, std::string, std::less<>>& verb_stems() {
  static const std::map<std::string, std::string, std::less<>> stems = [] {
    std::map<std::string, std::string, std::less<>> m;
    for (const auto& v : verb_table()) {
      for (const auto* form : {&v.base, &v.third, &v.ing, &v.past}) m[*form] = v.base;
    }
    return m;
  }();
  return stems;
}

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::string_view to_string(BodyPart part) {
  switch (part) {
    case BodyPart::kRoot: return "root";
    case BodyPart::kTorso: return "torso";
    case BodyPart::kHead: return "head";
    case BodyPart::kLeftHand: return "left_hand";
    case BodyPart::kRightHand: return "right_hand";
    case BodyPart::kLeftLeg: return "left_leg";
    case BodyPart::kRightLeg: return "right_leg";
    case BodyPart::kLeftElbow: return "left_elbow";
    case BodyPart::kRightElbow: return "right_elbow";
    case BodyPart::kLeftKnee: return "left_knee";
    case BodyPart::kRightKnee: return "right_knee";
  }
  return "?";
}

std::string_view to_string(MovementKind kind) {
  switch (kind) {
    case MovementKind::kTranslate: return "translate";
    case MovementKind::kHinge: return "hinge";
    case MovementKind::kYaw: return "yaw";
    case MovementKind::kLean: return "lean";
  }
  return "?";
}

std::string_view to_string(Direction direction) {
  switch (direction) {
    case Direction::kUp: return "up";
    case Direction::kDown: return "down";
    case Direction::kForward: return "forward";
    case Direction::kBack: return "back";
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
    case Direction::kBend: return "bend";
    case Direction::kStraighten: return "straighten";
    case Direction::kTurnLeft: return "turn-left";
    case Direction::kTurnRight: return "turn-right";
    case Direction::kLeanLeft: return "lean-left";
    case Direction::kLeanRight: return "lean-right";
    case Direction::kLeanForward: return "lean-forward";
    case Direction::kLeanBack: return "lean-back";
  }
  return "?";
}

std::string_view to_string(Magnitude magnitude) {
  return magnitude == Magnitude::kSlight ? "slight" : "plain";
}

namespace {

int translation_axis(Direction d) {
  switch (d) {
    case Direction::kLeft:
    case Direction::kRight: return 0;
    case Direction::kUp:
    case Direction::kDown: return 1;
    case Direction::kForward:
    case Direction::kBack: return 2;
    default: return -1;
  }
}

}  // namespace

bool is_compatible(const MovementCode& code) {
  const BodyPart p = code.part;
  const Direction d = code.direction;
  const bool turn = d == Direction::kTurnLeft || d == Direction::kTurnRight;
  const bool lean = d == Direction::kLeanLeft || d == Direction::kLeanRight ||
                    d == Direction::kLeanForward || d == Direction::kLeanBack;
  const bool hinge = d == Direction::kBend || d == Direction::kStraighten;
  const bool hinge_part = p == BodyPart::kLeftElbow || p == BodyPart::kRightElbow ||
                          p == BodyPart::kLeftKnee || p == BodyPart::kRightKnee;

  if (code.secondary) {
    if (code.kind != MovementKind::kTranslate) return false;
    const int a = translation_axis(d);
    const int b = translation_axis(*code.secondary);
    if (a < 0 || b < 0 || a == b) return false;
  }
  switch (code.kind) {
    case MovementKind::kTranslate:
      return translation_axis(d) >= 0 && p != BodyPart::kTorso && !hinge_part;
    case MovementKind::kHinge:
      return hinge && hinge_part;
    case MovementKind::kYaw:
      return turn && (p == BodyPart::kRoot || p == BodyPart::kTorso);
    case MovementKind::kLean:
      return lean && p == BodyPart::kRoot;
  }
  return false;
}

BodyPart mirror(BodyPart part) {
  switch (part) {
    case BodyPart::kLeftHand: return BodyPart::kRightHand;
    case BodyPart::kRightHand: return BodyPart::kLeftHand;
    case BodyPart::kLeftLeg: return BodyPart::kRightLeg;
    case BodyPart::kRightLeg: return BodyPart::kLeftLeg;
    case BodyPart::kLeftElbow: return BodyPart::kRightElbow;
    case BodyPart::kRightElbow: return BodyPart::kLeftElbow;
    case BodyPart::kLeftKnee: return BodyPart::kRightKnee;
    case BodyPart::kRightKnee: return BodyPart::kLeftKnee;
    default: return part;
  }
}

Direction mirror(Direction direction) {
  switch (direction) {
    case Direction::kLeft: return Direction::kRight;
    case Direction::kRight: return Direction::kLeft;
    case Direction::kTurnLeft: return Direction::kTurnRight;
    case Direction::kTurnRight: return Direction::kTurnLeft;
    case Direction::kLeanLeft: return Direction::kLeanRight;
    case Direction::kLeanRight: return Direction::kLeanLeft;
    default: return direction;
  }
}

MovementCode mirror(const MovementCode& code) {
  MovementCode m = code;
  m.part = mirror(code.part);
  m.direction = mirror(code.direction);
  if (code.secondary) m.secondary = mirror(*code.secondary);
  return m;
}

std::string swap_sides(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    if (!is_letter(text[i])) {
      out += text[i++];
      continue;
    }
    size_t j = i;
    while (j < text.size() && is_letter(text[j])) ++j;
    const std::string_view word = text.substr(i, j - i);
    if (word == "left") out += "right";
    else if (word == "right") out += "left";
    else if (word == "Left") out += "Right";
    else if (word == "Right") out += "Left";
    else out += word;
    i = j;
  }
  return out;
}

const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v = [] {
    std::vector<std::string> out;
    for (const auto& f : verb_table()) out.push_back(f.base);
    return out;
  }();
  return v;
}

bool is_verb(std::string_view lower_word) {
  const auto& t = verb_table();
  return std::any_of(t.begin(), t.end(), [&](const VerbForms& f) { return f.base == lower_word; });
}

std::string third_person(std::string_view base) {
  for (const auto& f : verb_table()) {
    if (f.base == base) return f.third;
  }
  return std::string(base) + "s";
}

std::optional<std::string> body_part_stem(std::string_view lower_term) {
  const auto& m = part_stems();
  const auto it = m.find(lower_term);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> verb_stem(std::string_view lower_word) {
  const auto& m = verb_stems();
  const auto it = m.find(lower_word);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::vector<ContentWord> content_words(std::string_view text) {
  std::vector<std::string> words;
  size_t i = 0;
  while (i < text.size()) {
    if (!is_letter(text[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && is_letter(text[j])) ++j;
    std::string w(text.substr(i, j - i));
    std::transform(w.begin(), w.end(), w.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    words.push_back(std::move(w));
    i = j;
  }

  std::vector<ContentWord> out;
  for (size_t k = 0; k < words.size(); ++k) {
    if (words[k] == "upper" && k + 1 < words.size() && words[k + 1] == "body") {
      out.push_back({"upper body", "upper body", true});
      ++k;
      continue;
    }
    if (auto s = body_part_stem(words[k])) {
      out.push_back({words[k], *s, true});
    } else if (auto v = verb_stem(words[k])) {
      out.push_back({words[k], *v, false});
    }
  }
  return out;
}

}  // namespace bpm::lexicon
