#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "ppx/models.hpp"

namespace ppx {

enum class ThresholdMethod { kAnalytic, kEmpirical };

struct ThresholdPlan {
  double tau = 1.0;
  long long n = 0;
  double u_n = 0.0;
  ThresholdMethod method = ThresholdMethod::kAnalytic;
};

// Solves n * P(X_1 > u) = tau by inverting the closed-form marginal tail.
inline ThresholdPlan threshold_analytic(const ModelSpec& model, long long n, double tau) {
  model.validate();
  if (n < 1) throw std::invalid_argument("threshold_analytic: n must be >= 1");
  if (!(tau > 0.0) || tau >= static_cast<double>(n))
    throw std::domain_error("threshold_analytic: need 0 < tau < n");

  const double s = tau / static_cast<double>(n);  // target tail probability
  const double inv_alpha = 1.0 / model.alpha;
  double u = 0.0;
  switch (model.family) {
    case Family::kIid:
    case Family::kArmax:
      if (model.base_tail == BaseTail::kFrechet) {
        u = std::pow(-std::log1p(-s), -inv_alpha);
      } else {
        u = std::pow(s, -inv_alpha);
      }
      break;
    case Family::kMovingMax: {
      const double w = static_cast<double>(model.window_m);
      if (model.base_tail == BaseTail::kFrechet) {
        u = std::pow(-std::log1p(-s) / w, -inv_alpha);
      } else {
        // 1 - (1 - u^-alpha)^w = s
        u = std::pow(-std::expm1(std::log1p(-s) / w), -inv_alpha);
      }
      break;
    }
  }
  return ThresholdPlan{tau, n, u, ThresholdMethod::kAnalytic};
}

// Same equation solved by bracketed bisection on the monotone tail; the
// closed forms above are cross-checked against this in the test suite.
inline double threshold_by_root(const ModelSpec& model, long long n, double tau,
                                double rel_tol = 1e-12) {
  model.validate();
  if (!(tau > 0.0) || tau >= static_cast<double>(n))
    throw std::domain_error("threshold_by_root: need 0 < tau < n");
  const double s = tau / static_cast<double>(n);
  double lo = base_quantile(model, 0.5);
  double hi = lo;
  while (marginal_tail(model, hi) > s) hi *= 2.0;   // tail decreasing in u
  while (marginal_tail(model, lo) < s) lo *= 0.5;
  for (int it = 0; it < 400 && (hi - lo) > rel_tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (marginal_tail(model, mid) > s)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// a_n with n P(|X_1| > a_n) = 1; implemented models are positive-valued.
inline double scaling_a_n(const ModelSpec& model, long long n) {
  if (n < 2) throw std::invalid_argument("scaling_a_n: n must be >= 2");
  return threshold_analytic(model, n, 1.0).u_n;
}

// Empirical (1 - tau/n)-quantile: the smallest sample value with at most
// floor(|sample| * tau / n) strict exceedances. For a sample of length n this
// is the smallest order statistic exceeded by at most floor(tau) points.
inline ThresholdPlan threshold_empirical(std::span<const double> sample, long long n,
                                         double tau) {
  if (n < 1) throw std::invalid_argument("threshold_empirical: n must be >= 1");
  if (!(tau > 0.0)) throw std::domain_error("threshold_empirical: tau must be > 0");
  const double len = static_cast<double>(sample.size());
  if (len < static_cast<double>(n) / tau)
    throw std::invalid_argument("threshold_empirical: sample shorter than n/tau");

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back())
    throw std::invalid_argument("threshold_empirical: degenerate (constant) sample");

  const auto allowed =
      static_cast<std::size_t>(std::floor(len * tau / static_cast<double>(n)));
  // exceedances(sorted[i]) is nonincreasing in i; find the first index meeting
  // the budget.
  std::size_t lo = 0, hi = sorted.size() - 1;
  auto exceedances = [&](std::size_t i) {
    return sorted.size() -
           static_cast<std::size_t>(
               std::upper_bound(sorted.begin(), sorted.end(), sorted[i]) - sorted.begin());
  };
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (exceedances(mid) <= allowed)
      hi = mid;
    else
      lo = mid + 1;
  }
  return ThresholdPlan{tau, n, sorted[lo], ThresholdMethod::kEmpirical};
}

}  // namespace ppx
