#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Closed vocabulary shared by the describer (rendering), the descriptive
// rewriter and the paragraph validator.
namespace bpm::lexicon {

enum class BodyPart {
  kRoot,
  kTorso,
  kHead,
  kLeftHand,
  kRightHand,
  kLeftLeg,
  kRightLeg,
  kLeftElbow,
  kRightElbow,
  kLeftKnee,
  kRightKnee,
};
inline constexpr int kBodyPartCount = 11;

enum class MovementKind { kTranslate, kHinge, kYaw, kLean };

enum class Direction {
  kUp,
  kDown,
  kForward,
  kBack,
  kLeft,
  kRight,
  kBend,
  kStraighten,
  kTurnLeft,
  kTurnRight,
  kLeanLeft,
  kLeanRight,
  kLeanForward,
  kLeanBack,
};

enum class Magnitude { kSlight, kPlain };

struct MovementCode {
  BodyPart part;
  MovementKind kind;
  Direction direction;
  Magnitude magnitude = Magnitude::kPlain;
  // Second axis of a diagonal translation ("forward and to the left").
  std::optional<Direction> secondary;

  friend bool operator==(const MovementCode&, const MovementCode&) = default;
};

std::string_view to_string(BodyPart part);
std::string_view to_string(MovementKind kind);
std::string_view to_string(Direction direction);
std::string_view to_string(Magnitude magnitude);

// Compatibility table:
//   kRoot  : translate {up, down, forward, back, left, right}, yaw {turn-*},
//            lean {lean-*}
//   kTorso : yaw {turn-*}
//   kHead, hands, legs : translate {up, down, forward, back, left, right}
//   elbows, knees      : hinge {bend, straighten}
// A secondary direction is allowed only on translations and must lie on a
// different axis than the primary one.
bool is_compatible(const MovementCode& code);

BodyPart mirror(BodyPart part);
Direction mirror(Direction direction);
MovementCode mirror(const MovementCode& code);

// Swaps the words "left" and "right" (whole words only).
std::string swap_sides(std::string_view text);

// Verbs the rewriter can conjugate. Lower-case base forms.
const std::vector<std::string>& verbs();
bool is_verb(std::string_view lower_word);
std::string third_person(std::string_view base);

// Normalizes a lower-case word (or the bigram "upper body") to its lexicon
// stem: "hands" -> "hand", "feet" -> "foot", "raises" -> "raise". Returns
// nothing for words outside the lexicon.
std::optional<std::string> body_part_stem(std::string_view lower_term);
std::optional<std::string> verb_stem(std::string_view lower_word);

struct ContentWord {
  std::string surface;  // as written, lower case
  std::string stem;
  bool is_body_part;
};

// Lexicon content words of a text in reading order. "upper body" is read as
// one term.
std::vector<ContentWord> content_words(std::string_view text);

}  // namespace bpm::lexicon
