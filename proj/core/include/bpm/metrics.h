#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "bpm/features.h"

// Evaluation metrics over embedding matrices (one row per sample). The
// evaluator networks that produce the embeddings are external inputs.
namespace bpm::metrics {

using Embeddings = Eigen::MatrixXd;

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Sample mean and unbiased covariance. Needs >= 2 rows.
GaussianStats gaussian_fit(const Embeddings& x);

// |mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a^1/2 S_b S_a^1/2)^1/2). The inner
// root comes from the eigenvalues of the symmetrized product, negative ones
// clipped to zero; rounding below zero is returned as 0.
double frechet_distance(const GaussianStats& a, const GaussianStats& b);

double fid(const Embeddings& a, const Embeddings& b);

// Start frames of clip_len-frame clips taken every `stride` frames.
std::vector<int> clip_starts(int frame_count, int clip_len = 40, int stride = 10);

// Each clip is clip_len x channels.
std::vector<Eigen::MatrixXd> extract_eval_clips(const FeatureSequence& features, int clip_len = 40,
                                                int stride = 10);

using ClipEmbedder = std::function<Eigen::VectorXd(const Eigen::MatrixXd& clip)>;

// Per-channel mean over the clip's frames. Desk-scale stand-in for a learned
// motion encoder.
Eigen::VectorXd mean_pool_embedder(const Eigen::MatrixXd& clip);
// Row-major flattening of the whole clip.
Eigen::VectorXd flatten_embedder(const Eigen::MatrixXd& clip);

// FID over all 40-frame clips of both pools.
double fid_clips(const std::vector<FeatureSequence>& generated,
                 const std::vector<FeatureSequence>& reference,
                 const ClipEmbedder& embed = mean_pool_embedder, int clip_len = 40, int stride = 10);

struct RPrecision {
  double top1 = 0.0;
  double top2 = 0.0;
  double top3 = 0.0;
};

// For every query i the pool holds motion i plus pool_size - 1 distinct
// seeded mismatches, ranked by Euclidean distance to text i. Equal distances
// are ordered by a seeded random key.
RPrecision r_precision(const Embeddings& text, const Embeddings& motion, int pool_size = 32,
                       uint64_t seed = 0);

double mm_dist(const Embeddings& text, const Embeddings& motion);

// Mean distance over n_pairs random pairs. Without replacement the pairs are
// disjoint and need 2 * n_pairs rows.
double diversity(const Embeddings& x, int n_pairs = 300, uint64_t seed = 0,
                 bool with_replacement = false);

// Mean over groups of the mean within-group pair distance. n_pairs = 0 uses
// every pair; otherwise n_pairs seeded pairs of distinct rows per group.
double multimodality(const std::vector<Embeddings>& groups, int n_pairs = 0, uint64_t seed = 0);

struct MetricCell {
  double mean = 0.0;
  double halfwidth = 0.0;
  int repetitions = 0;
};

// Runs `metric` with seeds derived from `seed`, one per repetition, and
// summarizes the values. Results do not depend on `threads`.
MetricCell repeat_with_ci(const std::function<double(uint64_t)>& metric, int repetitions = 20,
                          uint64_t seed = 0, int threads = 1);

// One repetition's inputs: matched text / motion embeddings, reference
// motion embeddings, and per-text groups of repeated generations.
struct EvalSample {
  Embeddings text;
  Embeddings motion;
  Embeddings reference;
  std::vector<Embeddings> mm_groups;
};

struct EvalOptions {
  int pool_size = 32;
  int diversity_pairs = 300;
  bool diversity_with_replacement = false;
  int mm_pairs = 0;
};

// Column names in report order.
const std::vector<std::string>& metric_columns();

std::map<std::string, MetricCell> evaluate_repeated(const std::function<EvalSample(uint64_t)>& sample,
                                                    int repetitions = 20, uint64_t seed = 0,
                                                    const EvalOptions& options = {}, int threads = 1);

struct MetricReport {
  std::vector<std::string> columns = metric_columns();
  std::vector<std::pair<std::string, std::map<std::string, MetricCell>>> rows;
};

// "0.091^{±0.004}"
std::string format_cell(const MetricCell& cell, int precision = 3);
// Aligned text table, one row per method.
std::string format_table(const MetricReport& report, int precision = 3);
nlohmann::json report_to_json(const MetricReport& report);

}  // namespace bpm::metrics
