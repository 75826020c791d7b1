#include "bpm/dataset.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bpm/error.h"
#include "bpm/lexicon.h"
#include "bpm/motion_io.h"
#include "bpm/text_assembly.h"

namespace bpm {
namespace {

using nlohmann::json;

StringListMap bpmsd_map(const std::vector<AnnotationRecord>& records) {
  StringListMap m;
  for (const auto& r : records) {
    if (!m.emplace(r.motion_id, r.bpmsd).second) throw Error("duplicate motion id '" + r.motion_id + "'");
  }
  return m;
}

StringListMap bpmp_map(const std::vector<AnnotationRecord>& records) {
  StringListMap m;
  for (const auto& r : records) {
    for (const auto& p : r.bpmp) {
      if (p.empty()) throw Error("motion '" + r.motion_id + "' has an empty paragraph");
    }
    if (!m.emplace(r.motion_id, r.bpmp).second) throw Error("duplicate motion id '" + r.motion_id + "'");
  }
  return m;
}

TextStats text_stats(const std::vector<std::string>& texts) {
  TextStats s;
  std::vector<long> lengths;
  std::map<std::string, long> freq;
  for (const auto& t : texts) {
    const auto words = word_tokens(t);
    lengths.push_back(static_cast<long>(words.size()));
    for (const auto& w : words) ++freq[w];
  }
  s.texts = static_cast<long>(lengths.size());
  s.words = std::accumulate(lengths.begin(), lengths.end(), 0L);
  if (!lengths.empty()) {
    s.average = static_cast<double>(s.words) / s.texts;
    std::sort(lengths.begin(), lengths.end());
    const size_t n = lengths.size();
    s.median = n % 2 ? lengths[n / 2] : 0.5 * (lengths[n / 2 - 1] + lengths[n / 2]);
  }
  s.frequency.assign(freq.begin(), freq.end());
  std::stable_sort(s.frequency.begin(), s.frequency.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return s;
}

json text_stats_json(const TextStats& s, int top_n) {
  json top = json::array();
  for (size_t i = 0; i < s.frequency.size() && static_cast<int>(i) < top_n; ++i) {
    top.push_back({{"word", s.frequency[i].first}, {"count", s.frequency[i].second}});
  }
  return {{"texts", s.texts},   {"words", s.words},           {"average_words", s.average},
          {"median_words", s.median}, {"top_words", top}};
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

std::string serialize_string_lists(const StringListMap& lists) {
  json j = json::object();
  for (const auto& [id, values] : lists) j[id] = values;
  return j.dump(2, ' ', false) + "\n";
}

StringListMap deserialize_string_lists(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("", "expected an object keyed by motion id");
  StringListMap out;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_array()) throw ParseError(key, "expected a list of strings");
    std::vector<std::string> list;
    for (size_t i = 0; i < value.size(); ++i) {
      if (!value[i].is_string()) {
        throw ParseError(key + "[" + std::to_string(i) + "]", "expected a string");
      }
      list.push_back(value[i].get<std::string>());
    }
    out.emplace(key, std::move(list));
  }
  return out;
}

std::string serialize_bpmsd(const std::vector<AnnotationRecord>& records) {
  return serialize_string_lists(bpmsd_map(records));
}

std::string serialize_bpmp(const std::vector<AnnotationRecord>& records) {
  return serialize_string_lists(bpmp_map(records));
}

std::vector<AnnotationRecord> deserialize_annotations(std::string_view bpmsd_bytes,
                                                      std::string_view bpmp_bytes) {
  const StringListMap a = deserialize_string_lists(bpmsd_bytes);
  const StringListMap b = bpmp_bytes.empty() ? StringListMap{} : deserialize_string_lists(bpmp_bytes);
  std::map<std::string, AnnotationRecord> joined;
  for (const auto& [id, list] : a) {
    joined[id].motion_id = id;
    joined[id].bpmsd = list;
  }
  for (const auto& [id, list] : b) {
    for (size_t i = 0; i < list.size(); ++i) {
      if (list[i].empty()) throw ParseError(id + "[" + std::to_string(i) + "]", "empty paragraph");
    }
    joined[id].motion_id = id;
    joined[id].bpmp = list;
  }
  std::vector<AnnotationRecord> out;
  for (auto& [id, r] : joined) out.push_back(std::move(r));
  return out;
}

void write_annotations(const std::filesystem::path& dir, const std::string& split,
                       const std::vector<AnnotationRecord>& records) {
  write_file(dir / (split + ".bpmsd.json"), serialize_bpmsd(records));
  write_file(dir / (split + ".bpmp.json"), serialize_bpmp(records));
}

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& dir,
                                               const std::string& split) {
  const auto bpmsd_path = dir / (split + ".bpmsd.json");
  const auto bpmp_path = dir / (split + ".bpmp.json");
  const std::string bpmp = std::filesystem::exists(bpmp_path) ? read_file(bpmp_path) : std::string();
  try {
    return deserialize_annotations(read_file(bpmsd_path), bpmp);
  } catch (const ParseError& e) {
    throw ParseError(e.path(), dir.string() + "/" + split + ": " + e.what());
  }
}

DatasetSplit split_dataset(std::vector<std::string> ids, uint64_t seed, const SplitRatios& ratios) {
  if (!(ratios.train > 0 && ratios.val > 0 && ratios.test > 0) ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw Error("split ratios must be positive and sum to 1");
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw Error("duplicate ids in split input");
  if (ids.size() < 3) throw Error("need at least 3 ids to split, got " + std::to_string(ids.size()));

  // Sorting first makes the result independent of the input order.
  std::mt19937_64 rng(seed);
  for (size_t i = ids.size() - 1; i > 0; --i) {
    std::swap(ids[i], ids[std::uniform_int_distribution<size_t>(0, i)(rng)]);
  }
  const double n = static_cast<double>(ids.size());
  const size_t n_train = static_cast<size_t>(std::lround(ratios.train * n));
  const size_t n_train_clamped = std::min(n_train, ids.size());
  const size_t n_val = std::min(static_cast<size_t>(std::lround(ratios.val * n)), ids.size() - n_train_clamped);
  DatasetSplit s;
  s.train.assign(ids.begin(), ids.begin() + n_train_clamped);
  s.val.assign(ids.begin() + n_train_clamped, ids.begin() + n_train_clamped + n_val);
  s.test.assign(ids.begin() + n_train_clamped + n_val, ids.end());
  return s;
}

void write_split(const std::filesystem::path& dir, const DatasetSplit& split) {
  auto lines = [](const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) s += id + "\n";
    return s;
  };
  write_file(dir / "train.txt", lines(split.train));
  write_file(dir / "val.txt", lines(split.val));
  write_file(dir / "test.txt", lines(split.test));
}

DatasetSplit read_split(const std::filesystem::path& dir) {
  DatasetSplit s{read_lines(dir / "train.txt"), read_lines(dir / "val.txt"), read_lines(dir / "test.txt")};
  std::set<std::string> seen;
  for (const auto* part : {&s.train, &s.val, &s.test}) {
    for (const auto& id : *part) {
      if (!seen.insert(id).second) throw ParseError(id, "id appears in more than one split list");
    }
  }
  return s;
}

Corpus build_corpus(const std::vector<AnnotationRecord>& records) {
  std::map<std::string, int> counts;
  for (const auto& r : records) {
    for (const auto& text : r.bpmsd) {
      for (const auto& s : split_sentences(text)) ++counts[s];
    }
  }
  Corpus c;
  for (const auto& [sentence, n] : counts) {
    CorpusEntry e{sentence, n, {}};
    for (const auto& w : lexicon::content_words(sentence)) {
      if (w.is_body_part && std::find(e.parts.begin(), e.parts.end(), w.surface) == e.parts.end()) {
        e.parts.push_back(w.surface);
      }
    }
    c.entries.push_back(std::move(e));
  }
  return c;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) {
    size_t a = 0;
    size_t b = w.size();
    while (a < b && std::ispunct(static_cast<unsigned char>(w[a]))) ++a;
    while (b > a && std::ispunct(static_cast<unsigned char>(w[b - 1]))) --b;
    if (a == b) continue;
    std::string t = w.substr(a, b - a);
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Suggestion> suggest_sentences(const Corpus& corpus, std::string_view query, int k,
                                          bool include_zero_scores) {
  if (k < 1) throw Error("k must be >= 1");
  const auto q = word_tokens(query);
  const std::set<std::string> query_tokens(q.begin(), q.end());
  if (query_tokens.empty()) throw Error("empty query");

  std::vector<Suggestion> ranked;
  for (const auto& e : corpus.entries) {
    const auto t = word_tokens(e.sentence);
    const std::set<std::string> tokens(t.begin(), t.end());
    int hits = 0;
    for (const auto& w : query_tokens) hits += tokens.count(w) ? 1 : 0;
    const double score = static_cast<double>(hits) / query_tokens.size();
    if (score > 0.0 || include_zero_scores) ranked.push_back({e.sentence, score, e.frequency});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Suggestion& a, const Suggestion& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.sentence < b.sentence;
  });
  if (static_cast<int>(ranked.size()) > k) ranked.resize(k);
  return ranked;
}

DatasetStats dataset_stats(const std::vector<AnnotationRecord>& records) {
  std::vector<std::string> snippets;
  std::vector<std::string> paragraphs;
  for (const auto& r : records) {
    for (const auto& t : r.bpmsd) {
      if (!t.empty()) snippets.push_back(t);
    }
    paragraphs.insert(paragraphs.end(), r.bpmp.begin(), r.bpmp.end());
  }
  return {text_stats(snippets), text_stats(paragraphs)};
}

json stats_to_json(const DatasetStats& stats, int top_n) {
  return {{"bpmsd", text_stats_json(stats.bpmsd, top_n)}, {"bpmp", text_stats_json(stats.bpmp, top_n)}};
}

void write_frequency_csv(std::ostream& out, const DatasetStats& stats, int top_n) {
  out << "population,word,count\n";
  for (const auto& [name, s] : {std::pair<const char*, const TextStats*>{"bpmsd", &stats.bpmsd},
                                {"bpmp", &stats.bpmp}}) {
    for (size_t i = 0; i < s->frequency.size() && static_cast<int>(i) < top_n; ++i) {
      const std::string& w = s->frequency[i].first;
      const bool quote = w.find_first_of(",\"") != std::string::npos;
      std::string cell = w;
      if (quote) {
        cell.clear();
        for (char c : w) cell += c == '"' ? std::string("\"\"") : std::string(1, c);
        cell = '"' + cell + '"';
      }
      out << name << ',' << cell << ',' << s->frequency[i].second << '\n';
    }
  }
}

}  // namespace bpm
