#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ppx/models.hpp"
#include "ppx/pointproc.hpp"
#include "ppx/quadrature.hpp"

namespace ppx {

// Closed-form description of the limit point process under the a_n
// normalization n P(X_1 > a_n) -> 1.
//
// iid        : Poisson with mean measure x^-alpha beyond x (theta = 1).
// moving max : clusters of exactly m coincident points; cluster centers form
//              a Poisson process with theta * x^-alpha centers beyond x,
//              theta = 1/m. A single large base variable is the max of all m
//              windows containing it, so the m cluster points are equal.
// armax      : theta = 1 - phi; cluster sizes are geometric, not coincident,
//              so only the extremal index is certified here.
struct LimitOracle {
  ModelSpec model;
  double theta = 1.0;
  int cluster_size = 1;
  double tail_index = 1.0;

  // Intensity of cluster centers beyond x.
  double center_intensity_above(double x) const {
    return theta * std::pow(x, -tail_index);
  }
};

inline double theta_exact(const ModelSpec& model) {
  model.validate();
  switch (model.family) {
    case Family::kIid: return 1.0;
    case Family::kMovingMax: return 1.0 / static_cast<double>(model.window_m);
    case Family::kArmax: return 1.0 - model.armax_phi;
  }
  throw std::invalid_argument("theta_exact: unknown family");
}

inline LimitOracle limit_oracle(const ModelSpec& model) {
  model.validate();
  LimitOracle o;
  o.model = model;
  o.theta = theta_exact(model);
  o.cluster_size = model.family == Family::kMovingMax ? model.window_m : 1;
  o.tail_index = model.alpha;
  return o;
}

namespace detail {

inline void require_coincident_family(const ModelSpec& model, const char* who) {
  if (model.family == Family::kArmax)
    throw std::invalid_argument(std::string(who) +
                                ": ARMAX cluster law is not coincident; only theta is certified");
  if (model.base_tail != BaseTail::kFrechet)
    throw std::invalid_argument(std::string(who) + ": oracle requires a Frechet base");
}

}  // namespace detail

// lambda(M_x) = theta * x^-alpha: canonical-measure mass of patterns with a
// point of modulus beyond x.
inline double limit_lambda_mx(const ModelSpec& model, double x) {
  detail::require_coincident_family(model, "limit_lambda_mx");
  if (!(x > 0.0)) throw std::domain_error("limit_lambda_mx: x must be > 0");
  const auto o = limit_oracle(model);
  return o.center_intensity_above(x);
}

// lambda(M cap M_x) for one-sided constraints B_i = (y_i, inf]: the limit
// cluster m*delta_u lies in M iff u > max_i y_i and every k_i <= m.
inline double limit_lambda_cluster(const ModelSpec& model, const ClusterEvent& event, double x) {
  detail::require_coincident_family(model, "limit_lambda_cluster");
  if (!(x > 0.0)) throw std::domain_error("limit_lambda_cluster: x must be > 0");
  const auto o = limit_oracle(model);
  double cut = x;
  for (const auto& c : event.constraints()) {
    if (!c.set.is_one_sided_upper())
      throw std::invalid_argument(
          "limit_lambda_cluster: only one-sided sets (y,inf] are supported");
    if (c.min_count > o.cluster_size) return 0.0;
    cut = std::max(cut, c.set.lower_endpoint());
  }
  return o.center_intensity_above(cut);
}

// Laplace functional of the limit:
//   exp{ -int_0^inf (1 - e^{-m f(y)}) theta alpha y^{-alpha-1} dy }.
// Integrated per linear segment of f after the change of variables y = 1/t.
inline double limit_laplace(const ModelSpec& model, const TestFunction& f,
                            double abs_tol = 1e-8) {
  detail::require_coincident_family(model, "limit_laplace");
  const auto o = limit_oracle(model);
  const double m = static_cast<double>(o.cluster_size);
  const double alpha = o.tail_index;

  const auto& xs = f.breakpoints_x();
  double integral = 0.0;
  int live_segments = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (xs[i + 1] > 0.0 && (f.breakpoints_y()[i] > 0.0 || f.breakpoints_y()[i + 1] > 0.0))
      ++live_segments;
  if (live_segments == 0) return 1.0;
  const double seg_tol = abs_tol / live_segments;

  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double lo = std::max(xs[i], 0.0), hi = xs[i + 1];
    if (!(hi > 0.0) || (f.breakpoints_y()[i] == 0.0 && f.breakpoints_y()[i + 1] == 0.0))
      continue;
    // t = 1/y maps [lo, hi] to [1/hi, 1/lo]
    const auto integrand = [&](double t) {
      const double y = 1.0 / t;
      return -std::expm1(-m * f(y)) * o.theta * alpha * std::pow(t, alpha - 1.0);
    };
    integral += adaptive_simpson(integrand, 1.0 / hi, 1.0 / lo, seg_tol);
  }
  return std::exp(-integral);
}

// Law of the limit count N((x, inf]): Poisson(x^-alpha) for iid, and m*K with
// K ~ Poisson(x^-alpha / m) for moving maxima. Returned as a pmf over
// {0,1,...} truncated once the accumulated mass is within mass_tol of 1.
inline std::vector<double> limit_count_law(const ModelSpec& model, const ObservableSet& set,
                                           double mass_tol = 1e-14) {
  detail::require_coincident_family(model, "limit_count_law");
  if (!set.is_one_sided_upper())
    throw std::invalid_argument("limit_count_law: set must be of the form (x, inf]");
  const double x = set.lower_endpoint();
  const auto o = limit_oracle(model);
  const int m = o.cluster_size;
  const double lambda = std::pow(x, -o.tail_index) / static_cast<double>(m);

  std::vector<double> pmf;
  double mass = 0.0;
  for (long long k = 0; mass < 1.0 - mass_tol; ++k) {
    const double p = poisson_pmf(k, lambda);
    pmf.resize(static_cast<std::size_t>(k * m) + 1, 0.0);
    pmf[static_cast<std::size_t>(k * m)] = p;
    mass += p;
    if (k > 400) throw std::runtime_error("limit_count_law: pmf did not accumulate");
  }
  return pmf;
}

// ---------------------------------------------------------------------------
// Exact finite-n probabilities for iid / moving-max rows, via products of the
// base CDF. u is on the unscaled X scale.

enum class ExactEvent { kMaxLeq, kRuns, kBlockTail };

inline double exact_prob(const ModelSpec& model, ExactEvent event, long long k, double u) {
  model.validate();
  if (model.family == Family::kArmax)
    throw std::invalid_argument("exact_prob: iid / moving-max only");
  if (!(u > 0.0)) throw std::domain_error("exact_prob: u must be > 0");
  if (k < 1) throw std::invalid_argument("exact_prob: event parameter must be >= 1");
  const double fy = base_cdf(model, u);
  const double w = static_cast<double>(model.effective_window());
  switch (event) {
    case ExactEvent::kMaxLeq:
      // P(max_{j<=k} X_j <= u) = F_Y^{k+w-1}
      return std::pow(fy, static_cast<double>(k) + w - 1.0);
    case ExactEvent::kRuns:
      // P(max_{j<=k-1} X_j <= u, X_k > u) = F_Y^{k+w-2} (1 - F_Y) for k >= 2;
      // the k = 1 event is the plain marginal exceedance.
      if (k == 1) return marginal_tail(model, u);
      return std::pow(fy, static_cast<double>(k) + w - 2.0) * (1.0 - fy);
    case ExactEvent::kBlockTail:
      // P(max_{j<=k} X_j > u) = 1 - F_Y^{k+w-1}
      return -std::expm1((static_cast<double>(k) + w - 1.0) * std::log(fy));
  }
  throw std::invalid_argument("exact_prob: unknown event");
}

// P(X_1 > u1, X_{1+lag} > u2) by inclusion-exclusion on the shared base
// window; exact for iid / moving-max.
inline double joint_exceed_prob(const ModelSpec& model, long long lag, double u1, double u2) {
  model.validate();
  if (model.family == Family::kArmax)
    throw std::invalid_argument("joint_exceed_prob: iid / moving-max only");
  if (lag < 0) throw std::invalid_argument("joint_exceed_prob: lag must be >= 0");
  const double w = static_cast<double>(model.effective_window());
  const double f1 = base_cdf(model, u1), f2 = base_cdf(model, u2);
  if (lag == 0) return 1.0 - std::pow(std::min(f1, f2), w);
  const double overlap = std::max(0.0, w - static_cast<double>(lag));
  const double both =
      std::pow(f1, w - overlap) * std::pow(f2, w - overlap) * std::pow(std::min(f1, f2), overlap);
  return 1.0 - std::pow(f1, w) - std::pow(f2, w) + both;
}

}  // namespace ppx
