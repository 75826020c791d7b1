#include "bpm/text_assembly.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "bpm/error.h"
#include "bpm/lexicon.h"
#include "bpm/motion_ops.h"
#include "bpm/random.h"

namespace bpm {
namespace {

std::string trim(std::string_view s) {
  size_t a = 0;
  size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// "a", "a and b", "a, b, and c"
std::string join_clauses(const std::vector<std::string>& clauses) {
  if (clauses.size() <= 2) return join(clauses, " and ");
  std::string out;
  for (size_t i = 0; i + 1 < clauses.size(); ++i) out += clauses[i] + ", ";
  return out + "and " + clauses.back();
}

const std::vector<std::string>& middle_connectives() {
  static const std::vector<std::string> c = {"Then,", "Afterward,", "Next,", "Subsequently,"};
  return c;
}

std::vector<std::string> non_empty(const std::vector<std::string>& texts) {
  std::vector<std::string> out;
  for (const auto& t : texts) {
    if (!trim(t).empty()) out.push_back(t);
  }
  return out;
}

}  // namespace

std::string assemble_template(const std::vector<std::string>& texts) {
  std::string out;
  for (size_t i = 0; i < texts.size(); ++i) {
    if (i) out += kSeparator;
    out += texts[i].empty() ? std::string(kMotionlessToken) : texts[i];
  }
  return out;
}

std::vector<std::string> parse_template(std::string_view assembled) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    const size_t next = assembled.find(kSeparator, pos);
    const std::string_view piece = assembled.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    out.push_back(piece == kMotionlessToken ? std::string() : std::string(piece));
    if (next == std::string_view::npos) break;
    pos = next + kSeparator.size();
  }
  return out;
}

std::string numbered_items(const std::vector<std::string>& texts) {
  std::string out;
  int n = 0;
  for (const auto& t : non_empty(texts)) {
    if (n) out += '\n';
    out += std::to_string(++n) + ". " + trim(t);
  }
  return out;
}

std::string build_paragraph_prompt(const std::vector<std::string>& texts) {
  if (non_empty(texts).empty()) throw Error("nothing to organize");
  std::string prompt(paragraph_prompt_template());
  const size_t slot = prompt.find(kPromptSlot);
  prompt.replace(slot, kPromptSlot.size(), numbered_items(texts));
  return prompt;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '.') continue;
    if (i + 1 == text.size() || text[i + 1] == ' ') {
      std::string s = trim(text.substr(start, i + 1 - start));
      if (!s.empty()) out.push_back(std::move(s));
      start = i + 1;
    }
  }
  std::string rest = trim(text.substr(std::min(start, text.size())));
  if (!rest.empty()) out.push_back(std::move(rest));
  return out;
}

std::string descriptive_predicate(std::string_view sentence, const Pronouns& pronouns) {
  const std::string s = trim(sentence);
  auto reject = [&](const std::string& why) {
    return Error("not a lexicon sentence (" + why + "): \"" + s + "\"");
  };
  if (s.size() < 2 || s.back() != '.') throw reject("missing final period");
  if (s.find('.') != s.size() - 1) throw reject("more than one sentence");
  std::vector<std::string> words = split_words(std::string_view(s).substr(0, s.size() - 1));
  if (words.empty()) throw reject("empty");
  if (!std::isupper(static_cast<unsigned char>(words[0][0])) || !lexicon::is_verb(lower(words[0]))) {
    throw reject("does not start with a lexicon verb");
  }
  words[0] = lexicon::third_person(lower(words[0]));
  for (size_t i = 1; i < words.size(); ++i) {
    if (words[i] == "your") {
      words[i] = pronouns.possessive;
    } else if (words[i - 1] == "and" && lexicon::is_verb(words[i])) {
      words[i] = lexicon::third_person(words[i]);
    }
  }
  return join(words, " ");
}

std::string imperative_to_descriptive(std::string_view sentence, std::string_view subject,
                                      const Pronouns& pronouns) {
  return std::string(subject) + " " + descriptive_predicate(sentence, pronouns) + ".";
}

Bpmp fallback_paragraph(const BpmsdList& texts, uint64_t seed, const FallbackOptions& options) {
  const std::vector<std::string> items = non_empty(texts.texts);
  if (items.empty()) throw Error("nothing to organize");
  if (options.subjects.empty()) throw Error("fallback paragraph needs at least one subject");

  std::string subject = options.subjects[mix_seed(seed) % options.subjects.size()];
  subject[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(subject[0])));

  std::vector<std::string> sentences;
  for (size_t i = 0; i < items.size(); ++i) {
    std::vector<std::string> clauses;
    for (const auto& s : split_sentences(items[i])) {
      clauses.push_back(descriptive_predicate(s, options.pronouns));
    }
    std::string connective;
    if (i == 0) connective = "Initially,";
    else if (i + 1 == items.size()) connective = "Finally,";
    else connective = middle_connectives()[(i - 1) % middle_connectives().size()];
    sentences.push_back(connective + " " + (i == 0 ? subject : options.pronouns.subject) + " " +
                        join_clauses(clauses) + ".");
  }
  return {texts.motion_id, join(sentences, " "), 0};
}

Bpmp motionless_paragraph(const std::string& motion_id, uint64_t seed, const FallbackOptions& options) {
  if (options.subjects.empty()) throw Error("fallback paragraph needs at least one subject");
  return {motion_id, options.subjects[mix_seed(seed) % options.subjects.size()] + " stays still.", 0};
}

ValidationReport validate_paragraph(std::string_view paragraph, const std::vector<std::string>& texts) {
  ValidationReport report;
  std::set<std::string> paragraph_stems;
  for (const auto& w : lexicon::content_words(paragraph)) paragraph_stems.insert(w.stem);

  std::set<std::string> input_parts;
  int non_empty_count = 0;
  int covered = 0;
  for (size_t i = 0; i < texts.size(); ++i) {
    if (trim(texts[i]).empty()) continue;
    ++non_empty_count;
    bool ok = true;
    for (const auto& w : lexicon::content_words(texts[i])) {
      if (w.is_body_part) input_parts.insert(w.stem);
      if (!paragraph_stems.count(w.stem)) ok = false;
    }
    for (const auto& s : split_sentences(texts[i])) {
      try {
        descriptive_predicate(s);
      } catch (const Error&) {
        report.lexicon_inputs = false;
      }
    }
    if (ok) ++covered;
    else report.missing_snippets.push_back(static_cast<int>(i));
  }
  report.coverage = non_empty_count == 0 ? 1.0 : static_cast<double>(covered) / non_empty_count;

  std::set<std::string> seen;
  for (const auto& w : lexicon::content_words(paragraph)) {
    if (w.is_body_part && !input_parts.count(w.stem) && seen.insert(w.surface).second) {
      report.extra_parts.push_back(w.surface);
    }
  }
  return report;
}

AugmentedClip crop_snippets(const MotionSequence& motion, const std::vector<std::string>& texts,
                            double snippet_duration_s, int first, int end) {
  const int step = snippet_step(snippet_duration_s, motion.fps);
  const int n = snippet_count(motion.frame_count(), step);
  if (static_cast<int>(texts.size()) != n) {
    throw Error("motion '" + motion.id + "' has " + std::to_string(n) + " snippets but " +
                std::to_string(texts.size()) + " descriptions");
  }
  if (first < 0 || end > n || first >= end) {
    throw Error("snippet range [" + std::to_string(first) + ", " + std::to_string(end) +
                ") is invalid for " + std::to_string(n) + " snippets");
  }
  AugmentedClip clip;
  clip.motion = crop_frames(motion, first * step, std::min(end * step, motion.frame_count()));
  clip.texts.assign(texts.begin() + first, texts.begin() + end);
  clip.first_snippet = first;
  clip.end_snippet = end;
  return clip;
}

AugmentedClip temporal_augment(const MotionSequence& motion, const std::vector<std::string>& texts,
                               double snippet_duration_s, std::mt19937_64& rng) {
  const int n = snippet_count(motion.frame_count(), snippet_step(snippet_duration_s, motion.fps));
  if (n <= 1) return crop_snippets(motion, texts, snippet_duration_s, 0, n);
  const int first = std::uniform_int_distribution<int>(0, n - 1)(rng);
  const int end = std::uniform_int_distribution<int>(first + 1, n)(rng);
  return crop_snippets(motion, texts, snippet_duration_s, first, end);
}

}  // namespace bpm
