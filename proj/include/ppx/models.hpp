#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppx/rng.hpp"

namespace ppx {

enum class Family { kIid, kMovingMax, kArmax };
enum class BaseTail { kFrechet, kPareto };

// A stationary sequence generator with analytically known marginal tail.
//
// kIid        : X_i i.i.d. with the base marginal.
// kMovingMax  : X_i = max(Y_i, ..., Y_{i+m-1}) over i.i.d. base Y; the
//               marginal CDF is F_Y^m and the extremal index is 1/m.
// kArmax      : X_i = max(phi^{1/alpha} X_{i-1}, (1-phi)^{1/alpha} Z_i) with
//               Frechet(alpha) innovations Z; the stationary marginal is
//               Frechet(alpha) and the extremal index is 1-phi. Pareto base
//               is rejected (no marginal-preserving recursion).
struct ModelSpec {
  Family family = Family::kIid;
  BaseTail base_tail = BaseTail::kFrechet;
  double alpha = 1.0;        // tail index of the base marginal, > 0
  int window_m = 1;          // kMovingMax window, >= 1
  double armax_phi = 0.5;    // kArmax dependence parameter, in (0,1)

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("ModelSpec: alpha must be > 0");
    if (family == Family::kMovingMax && window_m < 1)
      throw std::invalid_argument("ModelSpec: window_m must be >= 1");
    if (family == Family::kArmax) {
      if (!(armax_phi > 0.0 && armax_phi < 1.0))
        throw std::invalid_argument("ModelSpec: armax_phi must lie strictly in (0,1)");
      if (base_tail != BaseTail::kFrechet)
        throw std::invalid_argument("ModelSpec: ARMAX requires a Frechet base");
    }
  }

  int effective_window() const { return family == Family::kMovingMax ? window_m : 1; }

  static ModelSpec iid_frechet(double alpha = 1.0) {
    ModelSpec m;
    m.family = Family::kIid;
    m.base_tail = BaseTail::kFrechet;
    m.alpha = alpha;
    return m;
  }
  static ModelSpec iid_pareto(double alpha) {
    ModelSpec m;
    m.family = Family::kIid;
    m.base_tail = BaseTail::kPareto;
    m.alpha = alpha;
    return m;
  }
  static ModelSpec moving_max(int window, double alpha = 1.0,
                              BaseTail tail = BaseTail::kFrechet) {
    ModelSpec m;
    m.family = Family::kMovingMax;
    m.base_tail = tail;
    m.alpha = alpha;
    m.window_m = window;
    return m;
  }
  static ModelSpec armax(double phi, double alpha = 1.0) {
    ModelSpec m;
    m.family = Family::kArmax;
    m.base_tail = BaseTail::kFrechet;
    m.alpha = alpha;
    m.armax_phi = phi;
    return m;
  }

  std::string describe() const {
    auto tail = [&] {
      return (base_tail == BaseTail::kFrechet ? "frechet(" : "pareto(") +
             std::to_string(alpha) + ")";
    };
    switch (family) {
      case Family::kIid: return "iid " + tail();
      case Family::kMovingMax: return "moving_max m=" + std::to_string(window_m) + " " + tail();
      case Family::kArmax: return "armax phi=" + std::to_string(armax_phi) + " " + tail();
    }
    return "?";
  }
};

// One generated path. Values are nonzero by construction.
struct Row {
  std::vector<double> values;

  std::size_t length() const { return values.size(); }
};

// ---------------------------------------------------------------------------
// Exact marginals.

// CDF of the base variable Y.
inline double base_cdf(const ModelSpec& model, double t) {
  if (model.base_tail == BaseTail::kFrechet) {
    if (t <= 0.0) return 0.0;
    return std::exp(-std::pow(t, -model.alpha));
  }
  // Pareto on (1, inf)
  if (t <= 1.0) return 0.0;
  return -std::expm1(-model.alpha * std::log(t));
}

// P(Y > t), evaluated without cancellation.
inline double base_tail_prob(const ModelSpec& model, double t) {
  if (model.base_tail == BaseTail::kFrechet) {
    if (t <= 0.0) return 1.0;
    return -std::expm1(-std::pow(t, -model.alpha));
  }
  if (t <= 1.0) return 1.0;
  return std::pow(t, -model.alpha);
}

// Quantile of the base variable, p in (0,1).
inline double base_quantile(const ModelSpec& model, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("base_quantile: p must be in (0,1)");
  if (model.base_tail == BaseTail::kFrechet) return std::pow(-std::log(p), -1.0 / model.alpha);
  return std::pow(1.0 - p, -1.0 / model.alpha);
}

// CDF of the stationary marginal of X_1.
inline double marginal_cdf(const ModelSpec& model, double t) {
  model.validate();
  switch (model.family) {
    case Family::kIid: return base_cdf(model, t);
    case Family::kMovingMax: return std::pow(base_cdf(model, t), model.window_m);
    case Family::kArmax: return base_cdf(model, t);  // stationarity preserves the base marginal
  }
  return 0.0;
}

// Exact P(X_1 > t). Frechet families use expm1/log1p so that thresholds at
// n P(X_1 > u) = tau round-trip to 1e-12 relative.
inline double marginal_tail(const ModelSpec& model, double t) {
  model.validate();
  if (!(t > 0.0)) throw std::domain_error("marginal_tail: t must be > 0");
  switch (model.family) {
    case Family::kIid:
    case Family::kArmax:
      return base_tail_prob(model, t);
    case Family::kMovingMax: {
      const int w = model.window_m;
      if (model.base_tail == BaseTail::kFrechet)
        return -std::expm1(-static_cast<double>(w) * std::pow(t, -model.alpha));
      if (t <= 1.0) return 1.0;
      return -std::expm1(static_cast<double>(w) * std::log1p(-std::pow(t, -model.alpha)));
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Path generation.

namespace detail {

inline double draw_base(SplitMix64& rng, const ModelSpec& model) {
  for (;;) {
    const double u = rng.next_unit();
    double x;
    if (model.base_tail == BaseTail::kFrechet) {
      x = model.alpha == 1.0 ? 1.0 / (-std::log(u))
                             : std::pow(-std::log(u), -1.0 / model.alpha);
    } else {
      x = model.alpha == 1.0 ? 1.0 / u : std::pow(u, -1.0 / model.alpha);
    }
    if (x != 0.0) return x;  // resample on underflow; points live in R\{0}
  }
}

}  // namespace detail

// Streams X_1..X_n for one path, one base uniform per base variable.
// generate_sequence() and every estimator share this mapping, so common
// random numbers across estimators hold exactly.
class PathStream {
 public:
  PathStream(const ModelSpec& model, std::uint64_t stream_seed)
      : model_(model), rng_(stream_seed) {
    model_.validate();
    if (model_.family == Family::kMovingMax) {
      const int w = model_.window_m;
      ring_.assign(static_cast<std::size_t>(w), 0.0);
      for (int i = 0; i < w - 1; ++i)
        ring_[static_cast<std::size_t>(i)] = detail::draw_base(rng_, model_);
      pos_ = static_cast<std::size_t>(w - 1);
    } else if (model_.family == Family::kArmax) {
      armax_state_ = detail::draw_base(rng_, model_);  // stationary start, no burn-in
      c_keep_ = std::pow(model_.armax_phi, 1.0 / model_.alpha);
      c_innov_ = std::pow(1.0 - model_.armax_phi, 1.0 / model_.alpha);
    }
  }

  double next() {
    switch (model_.family) {
      case Family::kIid:
        return detail::draw_base(rng_, model_);
      case Family::kMovingMax: {
        ring_[pos_] = detail::draw_base(rng_, model_);
        pos_ = (pos_ + 1) % ring_.size();
        double m = ring_[0];
        for (std::size_t i = 1; i < ring_.size(); ++i) m = std::max(m, ring_[i]);
        return m;
      }
      case Family::kArmax: {
        const double z = detail::draw_base(rng_, model_);
        armax_state_ = std::max(c_keep_ * armax_state_, c_innov_ * z);
        return armax_state_;
      }
    }
    return 0.0;
  }

 private:
  ModelSpec model_;
  SplitMix64 rng_;
  std::vector<double> ring_;  // last window_m base draws (kMovingMax)
  std::size_t pos_ = 0;
  double armax_state_ = 0.0, c_keep_ = 0.0, c_innov_ = 0.0;
};

// Streams the threshold level of each X_j against a fixed ascending ladder of
// cutoffs: next_level() returns the number of cutoffs strictly below X_j.
// For iid/moving-max models the level is read off the base uniforms directly
// (X_j > c iff some base uniform in the window exceeds F_Y(c)), which is the
// hot path for the large-n estimators; ARMAX falls back to values.
class LevelStream {
 public:
  LevelStream(const ModelSpec& model, std::vector<double> cutoffs, std::uint64_t stream_seed)
      : model_(model), cutoffs_(std::move(cutoffs)), rng_(stream_seed) {
    model_.validate();
    for (std::size_t i = 0; i + 1 < cutoffs_.size(); ++i)
      if (!(cutoffs_[i] < cutoffs_[i + 1]))
        throw std::invalid_argument("LevelStream: cutoffs must be ascending");
    if (model_.family == Family::kArmax) {
      value_stream_.emplace(model_, stream_seed);
      return;
    }
    base_cdf_at_.reserve(cutoffs_.size());
    for (double c : cutoffs_) base_cdf_at_.push_back(base_cdf(model_, c));
    if (model_.family == Family::kMovingMax) {
      const int w = model_.window_m;
      ring_.assign(static_cast<std::size_t>(w), 0);
      for (int i = 0; i < w - 1; ++i) ring_[static_cast<std::size_t>(i)] = draw_level();
      pos_ = static_cast<std::size_t>(w - 1);
    }
  }

  int num_levels() const { return static_cast<int>(cutoffs_.size()); }

  int next_level() {
    if (value_stream_) {
      const double x = value_stream_->next();
      int lvl = 0;
      while (lvl < num_levels() && x > cutoffs_[static_cast<std::size_t>(lvl)]) ++lvl;
      return lvl;
    }
    if (model_.family == Family::kIid) return draw_level();
    ring_[pos_] = draw_level();
    pos_ = (pos_ + 1) % ring_.size();
    int m = ring_[0];
    for (std::size_t i = 1; i < ring_.size(); ++i) m = std::max(m, ring_[i]);
    return m;
  }

 private:
  int draw_level() {
    const double u = rng_.next_unit();
    int lvl = 0;
    while (lvl < num_levels() && u > base_cdf_at_[static_cast<std::size_t>(lvl)]) ++lvl;
    return lvl;
  }

  ModelSpec model_;
  std::vector<double> cutoffs_;
  SplitMix64 rng_;
  std::vector<double> base_cdf_at_;
  std::vector<int> ring_;
  std::size_t pos_ = 0;
  std::optional<PathStream> value_stream_;
};

// Generates a length-n strictly stationary path. Identical (model, n, seed)
// gives bit-identical output.
inline Row generate_sequence(const ModelSpec& model, long long n, std::uint64_t seed) {
  model.validate();
  if (n < 1) throw std::invalid_argument("generate_sequence: n must be >= 1");
  PathStream stream(model, seed);
  Row row;
  row.values.resize(static_cast<std::size_t>(n));
  for (auto& v : row.values) v = stream.next();
  return row;
}

// Elementwise division by a_n > 0.
inline Row scale_row(const Row& row, double a_n) {
  if (!(a_n > 0.0)) throw std::domain_error("scale_row: a_n must be > 0");
  Row out;
  out.values.reserve(row.values.size());
  for (double v : row.values) out.values.push_back(v / a_n);
  return out;
}

}  // namespace ppx
