#ifndef METACOMP_STATS_HPP
#define METACOMP_STATS_HPP

// Rank statistics for comparing final objective values across configurations.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace metacomp {

/// Linear-interpolation quantile (Hyndman-Fan type 7), p in [0, 1].
inline double quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p must lie in [0, 1]");
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

inline double median(const std::vector<double>& xs) { return quantile(xs, 0.5); }

struct Summary {
  std::size_t n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr() const { return q3 - q1; }
};

inline Summary summarize(const std::vector<double>& xs) {
  return {xs.size(), median(xs), quantile(xs, 0.25), quantile(xs, 0.75)};
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
inline std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

struct MannWhitney {
  double u = 0.0;  // U of the first sample: pairs a > b, ties counting one half
  double z = 0.0;
  double p = 1.0;  // two-sided, normal approximation, tie-corrected, no continuity correction
};

inline MannWhitney mann_whitney(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney: both samples must be nonempty");
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = average_ranks(pooled);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  const double rank_sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);

  MannWhitney out;
  out.u = rank_sum - na * (na + 1.0) / 2.0;

  std::vector<double> sorted(pooled);
  std::sort(sorted.begin(), sorted.end());
  double ties = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  const double variance = na * nb / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
  if (variance <= 0.0) return out;  // every value tied: no evidence either way
  out.z = (out.u - na * nb / 2.0) / std::sqrt(variance);
  out.p = std::min(1.0, std::erfc(std::fabs(out.z) / std::sqrt(2.0)));
  return out;
}

}  // namespace metacomp

#endif  // METACOMP_STATS_HPP
