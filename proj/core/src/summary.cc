#include "bpm/summary.h"

#include <cmath>

namespace bpm {

MeanCi mean_ci95(std::span<const double> values) {
  MeanCi out;
  out.n = static_cast<int>(values.size());
  if (values.empty()) return out;
  // Accumulate deviations from the first value so constant input yields that
  // exact value and a zero interval.
  const double pivot = values.front();
  double shifted = 0.0;
  for (double v : values) shifted += v - pivot;
  out.mean = pivot + shifted / values.size();
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  const double sd = std::sqrt(sq / values.size());
  out.halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
  return out;
}

}  // namespace bpm
