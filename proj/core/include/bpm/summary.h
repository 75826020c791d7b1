#pragma once

#include <span>

namespace bpm {

struct MeanCi {
  double mean = 0.0;
  double halfwidth = 0.0;  // 1.96 * std / sqrt(n), population std
  int n = 0;
};

// Mean with a normal-approximation 95% interval. The standard deviation is the
// population one (divide by n), the convention of the usual text-to-motion
// evaluation scripts.
MeanCi mean_ci95(std::span<const double> values);

}  // namespace bpm
