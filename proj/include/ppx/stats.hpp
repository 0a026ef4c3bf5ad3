#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ppx {

// A Monte-Carlo value with its standard error and seed provenance.
// `degenerate` marks exact-zero/exhausted-event outcomes (e.g. no block
// exceeded the threshold in any replicate, or -log(0) in the direct
// extremal-index estimator) so callers can tell "estimated 0" from
// "nothing ever happened".
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  long long reps = 0;
  std::uint64_t seed = 0;
  bool degenerate = false;
};

// Mean and stderr (sd/sqrt(reps)) of one column of per-path statistics.
// Summation is sequential in path order, so results do not depend on the
// thread count used to fill the column.
inline Estimate mean_estimate(std::span<const double> per_path, std::uint64_t seed) {
  if (per_path.size() < 1) throw std::invalid_argument("mean_estimate: empty sample");
  const auto n = static_cast<double>(per_path.size());
  double sum = 0.0;
  for (double v : per_path) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : per_path) ss += (v - mean) * (v - mean);
  const double sd = per_path.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return Estimate{mean, sd / std::sqrt(n), static_cast<long long>(per_path.size()), seed};
}

inline double sample_covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("sample_covariance: need two equal columns, size >= 2");
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / (n - 1.0);
}

inline double poisson_pmf(long long k, double lambda) {
  if (k < 0) return 0.0;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-lambda + static_cast<double>(k) * std::log(lambda) -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

// Total-variation distance between an empirical pmf given as counts over
// {0,1,...} and a reference pmf; reference mass beyond the count range is
// added in full.
inline double tv_distance(std::span<const long long> counts, std::span<const double> pmf) {
  long long total = 0;
  for (long long c : counts) total += c;
  if (total <= 0) throw std::invalid_argument("tv_distance: empty counts");
  double tv = 0.0;
  const std::size_t upto = std::max(counts.size(), pmf.size());
  double ref_seen = 0.0;
  for (std::size_t k = 0; k < upto; ++k) {
    const double emp = k < counts.size() ? static_cast<double>(counts[k]) / total : 0.0;
    const double ref = k < pmf.size() ? pmf[k] : 0.0;
    ref_seen += ref;
    tv += std::abs(emp - ref);
  }
  tv += std::max(0.0, 1.0 - ref_seen);  // reference tail never observed
  return 0.5 * tv;
}

// Kolmogorov distance sup_x |F_hat(x) - F(x)| for a sample against a CDF.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

}  // namespace ppx
