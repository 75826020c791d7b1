#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bpm/motion.h"
#include "bpm/segmenter.h"

namespace bpm {

// Per-snippet descriptions of one motion; "" marks a snippet without
// significant movement.
struct BpmsdList {
  std::string motion_id;
  std::vector<std::string> texts;

  friend bool operator==(const BpmsdList&, const BpmsdList&) = default;
};

struct Bpmp {
  std::string motion_id;
  std::string text;
  int variant = 0;
};

struct ValidationReport {
  double coverage = 1.0;
  std::vector<int> missing_snippets;
  std::vector<std::string> extra_parts;
  // False when some input sentence is outside the describer lexicon; the
  // coverage figure is then only advisory.
  bool lexicon_inputs = true;

  bool passes(double min_coverage) const {
    return coverage >= min_coverage && extra_parts.empty();
  }
};

inline constexpr std::string_view kMotionlessToken = "<Motionless>";
inline constexpr std::string_view kSeparator = " <SEP> ";

// "<Motionless> <SEP> Move your right leg forward slightly. <SEP> ..."
std::string assemble_template(const std::vector<std::string>& texts);
std::vector<std::string> parse_template(std::string_view assembled);

// The organizing prompt; "[BPMSDs]" marks the input slot.
inline constexpr std::string_view kParagraphPromptVersion = "v1";
inline constexpr std::string_view kPromptSlot = "[BPMSDs]";
std::string_view paragraph_prompt_template();

// Non-empty entries numbered in order, one "N. text" per line.
std::string numbered_items(const std::vector<std::string>& texts);

// Throws "nothing to organize" when every entry is empty.
std::string build_paragraph_prompt(const std::vector<std::string>& texts);

// Sentences of a description, each keeping its final period.
std::vector<std::string> split_sentences(std::string_view text);

struct Pronouns {
  std::string subject = "he";
  std::string possessive = "his";
};

// "Lower your left leg." + "The person" -> "The person lowers his left leg."
// Only sentences of the describer grammar are accepted: a lexicon verb in
// base form first, a final period.
std::string imperative_to_descriptive(std::string_view sentence, std::string_view subject,
                                      const Pronouns& pronouns = {});

// Predicate part of the rewrite: "lowers his left leg" (no subject, no
// period).
std::string descriptive_predicate(std::string_view sentence, const Pronouns& pronouns = {});

struct FallbackOptions {
  std::vector<std::string> subjects = {"The person", "The individual"};
  Pronouns pronouns;
};

// Deterministic paragraph: one clause per non-empty entry, linked with
// "Initially," / "Then," / "Afterward," / "Next," / "Subsequently," and a
// closing "Finally,".
Bpmp fallback_paragraph(const BpmsdList& texts, uint64_t seed, const FallbackOptions& options = {});

// Paragraph for a motion whose snippets are all motionless: "The person
// stays still." with the subject chosen as in fallback_paragraph.
Bpmp motionless_paragraph(const std::string& motion_id, uint64_t seed, const FallbackOptions& options = {});

ValidationReport validate_paragraph(std::string_view paragraph, const std::vector<std::string>& texts);

struct AugmentedClip {
  MotionSequence motion;
  std::vector<std::string> texts;
  int first_snippet = 0;
  int end_snippet = 0;  // exclusive
};

// Clip covering snippets [first, end) of the motion with the matching texts.
AugmentedClip crop_snippets(const MotionSequence& motion, const std::vector<std::string>& texts,
                            double snippet_duration_s, int first, int end);

// Random contiguous run of snippets. A single-snippet motion comes back
// unchanged.
AugmentedClip temporal_augment(const MotionSequence& motion, const std::vector<std::string>& texts,
                               double snippet_duration_s, std::mt19937_64& rng);

}  // namespace bpm
