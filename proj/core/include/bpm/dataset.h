#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace bpm {

struct AnnotationRecord {
  std::string motion_id;
  std::vector<std::string> bpmsd;
  std::vector<std::string> bpmp;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

// Motion id -> list of strings: the layout of both annotation files.
using StringListMap = std::map<std::string, std::vector<std::string>>;

// Pretty-printed UTF-8 JSON object, keys sorted, empty strings kept.
std::string serialize_string_lists(const StringListMap& lists);

// Throws ParseError whose path() is the offending key, e.g. "000314" or
// "000314[2]" ("" for a malformed document).
StringListMap deserialize_string_lists(std::string_view bytes);

std::string serialize_bpmsd(const std::vector<AnnotationRecord>& records);
std::string serialize_bpmp(const std::vector<AnnotationRecord>& records);

// Joins the two files by motion id. Ids present in only one file get an
// empty list for the other. Records come back sorted by id.
std::vector<AnnotationRecord> deserialize_annotations(std::string_view bpmsd_bytes,
                                                      std::string_view bpmp_bytes);

// <dir>/<split>.bpmsd.json and <dir>/<split>.bpmp.json. A missing BPMP file
// reads as no paragraphs.
void write_annotations(const std::filesystem::path& dir, const std::string& split,
                       const std::vector<AnnotationRecord>& records);
std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& dir,
                                               const std::string& split);

struct SplitRatios {
  double train = 0.80;
  double val = 0.05;
  double test = 0.15;
};

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

// Seeded shuffle, then a prefix partition with train = round(r_train * n),
// val = round(r_val * n) and the rest in test. Needs >= 3 distinct ids.
DatasetSplit split_dataset(std::vector<std::string> ids, uint64_t seed, const SplitRatios& ratios = {});

// train.txt / val.txt / test.txt, one id per line. Reading also accepts
// published id lists.
void write_split(const std::filesystem::path& dir, const DatasetSplit& split);
DatasetSplit read_split(const std::filesystem::path& dir);

struct CorpusEntry {
  std::string sentence;
  int frequency = 0;
  std::vector<std::string> parts;  // body-part terms as written, lower case
};

struct Corpus {
  std::vector<CorpusEntry> entries;  // sorted by sentence
};

Corpus build_corpus(const std::vector<AnnotationRecord>& records);

struct Suggestion {
  std::string sentence;
  double score = 0.0;
  int frequency = 0;
};

// Token-overlap ranking: score = |query tokens in sentence| / |query tokens|,
// then frequency, then the sentence text. Zero-score sentences are dropped
// unless `include_zero_scores`.
std::vector<Suggestion> suggest_sentences(const Corpus& corpus, std::string_view query, int k,
                                          bool include_zero_scores = false);

// Lower-case tokens after whitespace split and stripping of edge punctuation.
std::vector<std::string> word_tokens(std::string_view text);

struct TextStats {
  long texts = 0;
  long words = 0;
  double average = 0.0;
  double median = 0.0;
  std::vector<std::pair<std::string, long>> frequency;  // count desc, then word
};

// Word statistics over non-empty BPMSD texts and over BPMP paragraphs.
struct DatasetStats {
  TextStats bpmsd;
  TextStats bpmp;
};

DatasetStats dataset_stats(const std::vector<AnnotationRecord>& records);

nlohmann::json stats_to_json(const DatasetStats& stats, int top_n = 100);
// Columns: population,word,count.
void write_frequency_csv(std::ostream& out, const DatasetStats& stats, int top_n = 100);

}  // namespace bpm
