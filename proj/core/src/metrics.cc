#include "bpm/metrics.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "bpm/error.h"
#include "bpm/random.h"
#include "bpm/summary.h"

namespace bpm::metrics {
namespace {

// Eigenvalues below the solver's noise floor are treated as zero; otherwise
// their square roots add up over rank-deficient covariances.
Eigen::VectorXd clipped_eigenvalues(const Eigen::VectorXd& values) {
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(values.size()) *
                       std::max(values.cwiseAbs().maxCoeff(), 0.0);
  return values.unaryExpr([floor](double v) { return v <= floor ? 0.0 : v; });
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const Eigen::VectorXd roots = clipped_eigenvalues(es.eigenvalues()).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
}

void check_paired(const Embeddings& a, const Embeddings& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error("paired embeddings differ in shape: " + std::to_string(a.rows()) + "x" +
                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                std::to_string(b.cols()));
  }
}

double row_distance(const Embeddings& a, Eigen::Index i, const Embeddings& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).norm();
}

template <typename T>
std::vector<T> run_seeded(const std::function<T(uint64_t)>& fn, int repetitions, uint64_t seed,
                          int threads) {
  std::vector<T> out(repetitions);
  if (threads <= 1) {
    for (int r = 0; r < repetitions; ++r) out[r] = fn(derive_seed(seed, r));
    return out;
  }
  // At most `threads` repetitions in flight.
  for (int begin = 0; begin < repetitions; begin += threads) {
    std::vector<std::future<T>> jobs;
    const int end = std::min(repetitions, begin + threads);
    for (int r = begin; r < end; ++r) {
      jobs.push_back(std::async(std::launch::async, fn, derive_seed(seed, r)));
    }
    for (int r = begin; r < end; ++r) out[r] = jobs[r - begin].get();
  }
  return out;
}

MetricCell summarize(const std::vector<double>& values) {
  const MeanCi ci = mean_ci95(values);
  return {ci.mean, ci.halfwidth, ci.n};
}

}  // namespace

GaussianStats gaussian_fit(const Embeddings& x) {
  if (x.rows() < 2) throw Error("gaussian fit needs at least 2 samples, got " + std::to_string(x.rows()));
  GaussianStats g;
  g.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - g.mean.transpose();
  g.covariance = centered.transpose() * centered / static_cast<double>(x.rows() - 1);
  return g;
}

double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  if (a.mean.size() != b.mean.size() || a.covariance.rows() != b.covariance.rows()) {
    throw Error("frechet distance: dimension mismatch (" + std::to_string(a.mean.size()) + " vs " +
                std::to_string(b.mean.size()) + ")");
  }
  // tr sqrt(A^1/2 B A^1/2) is the nuclear norm of A^1/2 B^1/2. Taking singular
  // values avoids squaring the condition number, which matters for the
  // rank-deficient covariances of small clip pools.
  const Eigen::MatrixXd cross = psd_sqrt(a.covariance) * psd_sqrt(b.covariance);
  const double tr_cross = Eigen::BDCSVD<Eigen::MatrixXd>(cross).singularValues().sum();
  const double d = (a.mean - b.mean).squaredNorm() + a.covariance.trace() + b.covariance.trace() -
                   2.0 * tr_cross;
  return std::max(d, 0.0);
}

double fid(const Embeddings& a, const Embeddings& b) {
  return frechet_distance(gaussian_fit(a), gaussian_fit(b));
}

std::vector<int> clip_starts(int frame_count, int clip_len, int stride) {
  if (clip_len <= 0 || stride <= 0) throw Error("clip length and stride must be positive");
  std::vector<int> starts;
  for (int s = 0; s + clip_len <= frame_count; s += stride) starts.push_back(s);
  return starts;
}

std::vector<Eigen::MatrixXd> extract_eval_clips(const FeatureSequence& features, int clip_len, int stride) {
  std::vector<Eigen::MatrixXd> clips;
  for (int s : clip_starts(features.frame_count(), clip_len, stride)) {
    Eigen::MatrixXd clip(clip_len, FeatureLayout::kWidth);
    for (int t = 0; t < clip_len; ++t) clip.row(t) = features.frames[s + t].transpose();
    clips.push_back(std::move(clip));
  }
  return clips;
}

Eigen::VectorXd mean_pool_embedder(const Eigen::MatrixXd& clip) {
  return clip.colwise().mean().transpose();
}

Eigen::VectorXd flatten_embedder(const Eigen::MatrixXd& clip) {
  Eigen::VectorXd v(clip.size());
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < clip.rows(); ++r) {
    for (Eigen::Index c = 0; c < clip.cols(); ++c) v[k++] = clip(r, c);
  }
  return v;
}

double fid_clips(const std::vector<FeatureSequence>& generated, const std::vector<FeatureSequence>& reference,
                 const ClipEmbedder& embed, int clip_len, int stride) {
  auto pool = [&](const std::vector<FeatureSequence>& seqs, const char* name) {
    std::vector<Eigen::VectorXd> rows;
    for (const auto& s : seqs) {
      for (const auto& clip : extract_eval_clips(s, clip_len, stride)) rows.push_back(embed(clip));
    }
    if (rows.size() < 2) {
      throw Error(std::string("FID_c: ") + name + " pool yields " + std::to_string(rows.size()) +
                  " clips, need at least 2");
    }
    Embeddings m(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i].transpose();
    return m;
  };
  return fid(pool(generated, "generated"), pool(reference, "reference"));
}

RPrecision r_precision(const Embeddings& text, const Embeddings& motion, int pool_size, uint64_t seed) {
  check_paired(text, motion);
  const Eigen::Index n = text.rows();
  if (pool_size < 3) throw Error("R-precision pool size must be >= 3");
  if (n < pool_size) {
    throw Error("R-precision needs at least " + std::to_string(pool_size) + " pairs, got " + std::to_string(n));
  }
  std::vector<int> hits(3, 0);
  std::vector<Eigen::Index> others(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<uint64_t>(i)));
    // Partial Fisher-Yates over the other indices.
    for (Eigen::Index j = 0, k = 0; j < n; ++j) {
      if (j != i) others[k++] = j;
    }
    for (int k = 0; k < pool_size - 1; ++k) {
      std::uniform_int_distribution<Eigen::Index> pick(k, n - 2);
      std::swap(others[k], others[pick(rng)]);
    }
    std::uniform_real_distribution<double> key(0.0, 1.0);
    const double d_match = row_distance(text, i, motion, i);
    const double key_match = key(rng);
    int rank = 1;
    for (int k = 0; k < pool_size - 1; ++k) {
      const double d = row_distance(text, i, motion, others[k]);
      const double kk = key(rng);
      if (d < d_match || (d == d_match && kk < key_match)) ++rank;
    }
    for (int t = 0; t < 3; ++t) hits[t] += rank <= t + 1;
  }
  return {static_cast<double>(hits[0]) / n, static_cast<double>(hits[1]) / n,
          static_cast<double>(hits[2]) / n};
}

double mm_dist(const Embeddings& text, const Embeddings& motion) {
  check_paired(text, motion);
  if (text.rows() == 0) throw Error("MM-Dist needs at least one pair");
  return (text - motion).rowwise().norm().mean();
}

double diversity(const Embeddings& x, int n_pairs, uint64_t seed, bool with_replacement) {
  if (n_pairs < 1) throw Error("diversity needs n_pairs >= 1");
  const Eigen::Index n = x.rows();
  std::mt19937_64 rng(seed);
  double total = 0.0;
  if (with_replacement) {
    if (n < 1) throw Error("diversity needs at least one sample");
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    for (int k = 0; k < n_pairs; ++k) {
      const Eigen::Index a = pick(rng);
      const Eigen::Index b = pick(rng);
      total += row_distance(x, a, x, b);
    }
  } else {
    if (n < 2 * static_cast<Eigen::Index>(n_pairs)) {
      throw Error("diversity without replacement needs " + std::to_string(2 * n_pairs) +
                  " samples, got " + std::to_string(n));
    }
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (Eigen::Index k = 0; k < 2 * n_pairs; ++k) {
      std::uniform_int_distribution<Eigen::Index> pick(k, n - 1);
      std::swap(order[k], order[pick(rng)]);
    }
    for (int k = 0; k < n_pairs; ++k) total += row_distance(x, order[2 * k], x, order[2 * k + 1]);
  }
  return total / n_pairs;
}

double multimodality(const std::vector<Embeddings>& groups, int n_pairs, uint64_t seed) {
  if (groups.empty()) throw Error("multimodality needs at least one group");
  if (n_pairs < 0) throw Error("multimodality n_pairs must be >= 0");
  double total = 0.0;
  for (size_t g = 0; g < groups.size(); ++g) {
    const Embeddings& x = groups[g];
    if (x.rows() < 2) throw Error("multimodality group " + std::to_string(g) + " has fewer than 2 samples");
    double sum = 0.0;
    long count = 0;
    if (n_pairs == 0) {
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < x.rows(); ++j, ++count) sum += row_distance(x, i, x, j);
      }
    } else {
      std::mt19937_64 rng(derive_seed(seed, g));
      std::uniform_int_distribution<Eigen::Index> first(0, x.rows() - 1);
      std::uniform_int_distribution<Eigen::Index> other(0, x.rows() - 2);
      for (; count < n_pairs; ++count) {
        const Eigen::Index a = first(rng);
        Eigen::Index b = other(rng);
        if (b >= a) ++b;
        sum += row_distance(x, a, x, b);
      }
    }
    total += sum / count;
  }
  return total / groups.size();
}

MetricCell repeat_with_ci(const std::function<double(uint64_t)>& metric, int repetitions, uint64_t seed,
                          int threads) {
  if (repetitions < 2) throw Error("repeat_with_ci needs at least 2 repetitions");
  return summarize(run_seeded<double>(metric, repetitions, seed, threads));
}

const std::vector<std::string>& metric_columns() {
  static const std::vector<std::string> c = {"R-Top1", "R-Top2",    "R-Top3",   "FID",
                                             "MM-Dist", "Diversity", "MModality"};
  return c;
}

std::map<std::string, MetricCell> evaluate_repeated(const std::function<EvalSample(uint64_t)>& sample,
                                                    int repetitions, uint64_t seed,
                                                    const EvalOptions& options, int threads) {
  if (repetitions < 2) throw Error("evaluation needs at least 2 repetitions");
  using Row = std::vector<double>;
  const std::function<Row(uint64_t)> one = [&](uint64_t s) {
    const EvalSample x = sample(s);
    const RPrecision r = r_precision(x.text, x.motion, options.pool_size, derive_seed(s, 1));
    Row row = {r.top1, r.top2, r.top3, fid(x.motion, x.reference), mm_dist(x.text, x.motion),
               diversity(x.motion, options.diversity_pairs, derive_seed(s, 2),
                         options.diversity_with_replacement)};
    row.push_back(x.mm_groups.empty() ? std::nan("")
                                      : multimodality(x.mm_groups, options.mm_pairs, derive_seed(s, 3)));
    return row;
  };
  const std::vector<Row> rows = run_seeded<Row>(one, repetitions, seed, threads);
  std::map<std::string, MetricCell> out;
  for (size_t c = 0; c < metric_columns().size(); ++c) {
    std::vector<double> values;
    for (const auto& r : rows) values.push_back(r[c]);
    if (std::isnan(values[0])) continue;
    out[metric_columns()[c]] = summarize(values);
  }
  return out;
}

std::string format_cell(const MetricCell& cell, int precision) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << cell.mean << "^{±" << cell.halfwidth << "}";
  return s.str();
}

std::string format_table(const MetricReport& report, int precision) {
  std::vector<std::vector<std::string>> grid;
  grid.push_back({"Method"});
  grid[0].insert(grid[0].end(), report.columns.begin(), report.columns.end());
  for (const auto& [method, cells] : report.rows) {
    std::vector<std::string> line = {method};
    for (const auto& c : report.columns) {
      const auto it = cells.find(c);
      line.push_back(it == cells.end() ? "-" : format_cell(it->second, precision));
    }
    grid.push_back(std::move(line));
  }
  // Width in code points so the two-byte "±" does not skew alignment.
  auto width = [](const std::string& s) {
    return std::count_if(s.begin(), s.end(), [](char ch) { return (static_cast<unsigned char>(ch) & 0xC0) != 0x80; });
  };
  std::vector<long> widths(grid[0].size(), 0);
  for (const auto& line : grid) {
    for (size_t i = 0; i < line.size(); ++i) widths[i] = std::max<long>(widths[i], width(line[i]));
  }
  std::string out;
  for (const auto& line : grid) {
    std::string text;
    for (size_t i = 0; i < line.size(); ++i) {
      if (i) text += "  ";
      text += line[i];
      if (i + 1 < line.size()) text += std::string(widths[i] - width(line[i]), ' ');
    }
    out += text + "\n";
  }
  return out;
}

nlohmann::json report_to_json(const MetricReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [method, cells] : report.rows) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [name, cell] : cells) {
      m[name] = {{"mean", cell.mean}, {"ci95_halfwidth", cell.halfwidth}, {"repetitions", cell.repetitions}};
    }
    rows.push_back({{"method", method}, {"metrics", m}});
  }
  return {{"columns", report.columns}, {"rows", rows}};
}

}  // namespace bpm::metrics
