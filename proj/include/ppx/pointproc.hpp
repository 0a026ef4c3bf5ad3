#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppx/stats.hpp"

namespace ppx {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Observable sets: finite unions of intervals whose closure avoids 0, i.e.
// relatively compact sets in [-inf, inf] \ {0}. Endpoint open/closed flags are
// honored exactly; no epsilon fudging anywhere.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = true;
  bool hi_open = true;

  bool contains(double v) const {
    const bool above = lo_open ? v > lo : v >= lo;
    const bool below = hi_open ? v < hi : v <= hi;
    return above && below;
  }

  // Distance of the closure from 0; 0 if the closure touches/contains 0.
  double gap_to_zero() const {
    if (lo <= 0.0 && hi >= 0.0) return 0.0;
    return hi < 0.0 ? -hi : lo;
  }
};

class ObservableSet {
 public:
  ObservableSet() = default;
  explicit ObservableSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    validate();
  }

  static ObservableSet above(double x, bool open = true) {
    return ObservableSet({Interval{x, kInf, open, false}});
  }
  // [-x,x]^c = [-inf,-x) u (x,inf]
  static ObservableSet modulus_above(double x) {
    return ObservableSet({Interval{-kInf, -x, false, true}, Interval{x, kInf, true, false}});
  }

  const std::vector<Interval>& intervals() const { return intervals_; }

  bool contains(double v) const {
    for (const auto& iv : intervals_)
      if (iv.contains(v)) return true;
    return false;
  }

  // delta > 0: the set is bounded away from 0.
  double gap() const {
    double g = kInf;
    for (const auto& iv : intervals_) g = std::min(g, iv.gap_to_zero());
    return g;
  }

  // Single interval of the form (y, inf] or [y, inf] with y > 0.
  bool is_one_sided_upper() const {
    return intervals_.size() == 1 && intervals_[0].hi == kInf && intervals_[0].lo > 0.0 &&
           std::isfinite(intervals_[0].lo);
  }
  double lower_endpoint() const { return intervals_.front().lo; }

  std::string to_string() const;

 private:
  void validate() {
    if (intervals_.empty()) throw std::invalid_argument("ObservableSet: no intervals");
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& iv : intervals_) {
      if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi ||
          (iv.lo == iv.hi && (iv.lo_open || iv.hi_open)))
        throw std::invalid_argument("ObservableSet: empty or malformed interval");
      if (iv.gap_to_zero() <= 0.0)
        throw std::invalid_argument("ObservableSet: interval closure must avoid 0");
    }
    for (std::size_t i = 0; i + 1 < intervals_.size(); ++i) {
      const auto& a = intervals_[i];
      const auto& b = intervals_[i + 1];
      if (a.hi > b.lo || (a.hi == b.lo && !a.hi_open && !b.lo_open))
        throw std::invalid_argument("ObservableSet: intervals must be disjoint");
    }
  }

  std::vector<Interval> intervals_;
};

// Intersection event {mu(B_i) >= k_i, i = 1..d}.
struct ClusterConstraint {
  ObservableSet set;
  long long min_count = 1;
};

class ClusterEvent {
 public:
  ClusterEvent() = default;
  explicit ClusterEvent(std::vector<ClusterConstraint> constraints)
      : constraints_(std::move(constraints)) {
    if (constraints_.empty()) throw std::invalid_argument("ClusterEvent: empty constraint list");
    for (const auto& c : constraints_)
      if (c.min_count < 1) throw std::invalid_argument("ClusterEvent: every k_i must be >= 1");
  }

  const std::vector<ClusterConstraint>& constraints() const { return constraints_; }
  std::size_t dimension() const { return constraints_.size(); }

  std::string to_string() const;

 private:
  std::vector<ClusterConstraint> constraints_;
};

// ---------------------------------------------------------------------------
// Point patterns: finite counting measures on [-inf,inf] \ {0}.

struct PointPattern {
  std::vector<double> points;  // multiplicity allowed, no zeros

  static PointPattern from(std::vector<double> pts) {
    for (double p : pts)
      if (p == 0.0 || std::isnan(p))
        throw std::invalid_argument("PointPattern: points must be nonzero");
    return PointPattern{std::move(pts)};
  }
};

inline long long count(const PointPattern& pattern, const ObservableSet& set) {
  long long c = 0;
  for (double p : pattern.points)
    if (set.contains(p)) ++c;
  return c;
}

inline double max_modulus(const PointPattern& pattern) {
  double m = 0.0;  // null measure convention
  for (double p : pattern.points) m = std::max(m, std::abs(p));
  return m;
}

inline bool in_cluster_event(const PointPattern& pattern, const ClusterEvent& event) {
  for (const auto& c : event.constraints())
    if (count(pattern, c.set) < c.min_count) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Nonnegative continuous piecewise-linear test functions with compact support
// in [-inf,inf] \ {0}: zero outside the breakpoint range and on a
// neighborhood of 0.

class TestFunction {
 public:
  TestFunction(std::vector<double> xs, std::vector<double> ys, std::string name = "")
      : xs_(std::move(xs)), ys_(std::move(ys)), name_(std::move(name)) {
    validate();
  }

  // Symmetric tent on (a, b), peak height at the midpoint.
  static TestFunction tent(double a, double b, double height = 1.0, std::string name = "") {
    return TestFunction({a, 0.5 * (a + b), b}, {0.0, height, 0.0},
                        name.empty() ? "tent(" + std::to_string(a) + "," + std::to_string(b) + ")"
                                     : std::move(name));
  }

  double operator()(double x) const {
    if (x <= xs_.front() || x >= xs_.back()) {
      // exact zero at and outside the boundary breakpoints
      if (x == xs_.front()) return ys_.front();
      if (x == xs_.back()) return ys_.back();
      return 0.0;
    }
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    const double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    return ys_[i] + t * (ys_[i + 1] - ys_[i]);
  }

  const std::vector<double>& breakpoints_x() const { return xs_; }
  const std::vector<double>& breakpoints_y() const { return ys_; }
  const std::string& name() const { return name_; }

  // Smallest |x| over the closure of {f > 0}.
  double support_gap() const {
    double g = kInf;
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
      if (ys_[i] <= 0.0 && ys_[i + 1] <= 0.0) continue;
      const Interval seg{xs_[i], xs_[i + 1], false, false};
      g = std::min(g, seg.gap_to_zero());
    }
    return g;
  }
  // Support bounds [lo, hi]; points outside cannot contribute to integrals.
  double support_lo() const { return xs_.front(); }
  double support_hi() const { return xs_.back(); }

 private:
  void validate() {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
      throw std::invalid_argument("TestFunction: need >= 2 breakpoints");
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
      if (!(xs_[i] < xs_[i + 1]))
        throw std::invalid_argument("TestFunction: abscissae must be strictly increasing");
    for (double y : ys_) {
      if (!(y >= 0.0)) throw std::invalid_argument("TestFunction: ordinates must be >= 0");
      if (!std::isfinite(y)) throw std::invalid_argument("TestFunction: ordinates must be finite");
    }
    if (ys_.front() != 0.0 || ys_.back() != 0.0)
      throw std::invalid_argument("TestFunction: must vanish at the boundary breakpoints");
    if (!(support_gap() > 0.0))
      throw std::invalid_argument("TestFunction: support must be bounded away from 0");
  }

  std::vector<double> xs_, ys_;
  std::string name_;
};

inline double integrate(const PointPattern& pattern, const TestFunction& f) {
  double s = 0.0;
  for (double p : pattern.points) s += f(p);
  return s;
}

// Sample mean and stderr of exp(-mu(f)) over a collection of patterns.
inline Estimate laplace_empirical(std::span<const PointPattern> patterns,
                                  const TestFunction& f, std::uint64_t seed = 0) {
  if (patterns.size() < 2)
    throw std::invalid_argument("laplace_empirical: need at least 2 patterns");
  std::vector<double> vals;
  vals.reserve(patterns.size());
  for (const auto& p : patterns) vals.push_back(std::exp(-integrate(p, f)));
  return mean_estimate(vals, seed);
}

// The fixed diagnostic family: 12 tents on (s, 2s) with s log-spaced over two
// decades [0.1, 10], on both signs. Ids 0..5 positive, 6..11 negative.
inline std::vector<TestFunction> standard_tents() {
  std::vector<TestFunction> fam;
  fam.reserve(12);
  for (int k = 0; k < 6; ++k) {
    const double s = 0.1 * std::pow(10.0, 0.4 * k);
    fam.push_back(TestFunction::tent(s, 2.0 * s, 1.0, "tent" + std::to_string(k)));
  }
  for (int k = 0; k < 6; ++k) {
    const double s = 0.1 * std::pow(10.0, 0.4 * k);
    fam.push_back(TestFunction({-2.0 * s, -1.5 * s, -s}, {0.0, 1.0, 0.0},
                               "tent" + std::to_string(6 + k)));
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Textual forms. ObservableSet: "(1,inf]" or "[-inf,-2)u(2,inf]".
// ClusterEvent: clauses "set>=k" joined by '&'.

namespace detail {

inline std::string fmt_endpoint(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline std::string strip_ws(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

inline double parse_endpoint(const std::string& tok) {
  if (tok.empty()) throw std::invalid_argument("parse: empty interval endpoint");
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);  // handles "inf"/"-inf"
  if (end != tok.c_str() + tok.size())
    throw std::invalid_argument("parse: bad interval endpoint '" + tok + "'");
  return v;
}

}  // namespace detail

inline std::string ObservableSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (i) out += "u";
    out += iv.lo_open ? '(' : '[';
    out += detail::fmt_endpoint(iv.lo);
    out += ',';
    out += detail::fmt_endpoint(iv.hi);
    out += iv.hi_open ? ')' : ']';
  }
  return out;
}

inline std::string ClusterEvent::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    if (i) out += " & ";
    out += constraints_[i].set.to_string();
    out += ">=";
    out += std::to_string(constraints_[i].min_count);
  }
  return out;
}

inline ObservableSet parse_observable_set(const std::string& text) {
  const std::string s = detail::strip_ws(text);
  if (s.empty()) throw std::invalid_argument("parse_observable_set: empty text");
  std::vector<Interval> ivs;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (!ivs.empty()) {
      if (s[pos] != 'u' && s[pos] != 'U')
        throw std::invalid_argument("parse_observable_set: expected 'u' between intervals");
      ++pos;
    }
    if (pos >= s.size() || (s[pos] != '(' && s[pos] != '['))
      throw std::invalid_argument("parse_observable_set: expected '(' or '['");
    Interval iv;
    iv.lo_open = s[pos] == '(';
    ++pos;
    const auto comma = s.find(',', pos);
    if (comma == std::string::npos)
      throw std::invalid_argument("parse_observable_set: missing ','");
    iv.lo = detail::parse_endpoint(s.substr(pos, comma - pos));
    pos = comma + 1;
    auto close = s.find_first_of(")]", pos);
    if (close == std::string::npos)
      throw std::invalid_argument("parse_observable_set: missing ')' or ']'");
    iv.hi = detail::parse_endpoint(s.substr(pos, close - pos));
    iv.hi_open = s[close] == ')';
    pos = close + 1;
    ivs.push_back(iv);
  }
  return ObservableSet(std::move(ivs));
}

inline ClusterEvent parse_cluster_event(const std::string& text) {
  const std::string s = detail::strip_ws(text);
  if (s.empty()) throw std::invalid_argument("parse_cluster_event: empty text");
  std::vector<ClusterConstraint> cs;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto amp = s.find('&', pos);
    if (amp == std::string::npos) amp = s.size();
    const std::string clause = s.substr(pos, amp - pos);
    const auto ge = clause.find(">=");
    if (ge == std::string::npos)
      throw std::invalid_argument("parse_cluster_event: clause missing '>=': " + clause);
    ClusterConstraint c;
    c.set = parse_observable_set(clause.substr(0, ge));
    const std::string ks = clause.substr(ge + 2);
    char* end = nullptr;
    c.min_count = std::strtoll(ks.c_str(), &end, 10);
    if (end != ks.c_str() + ks.size() || c.min_count < 1)
      throw std::invalid_argument("parse_cluster_event: bad count '" + ks + "'");
    cs.push_back(std::move(c));
    pos = amp + (amp < s.size() ? 1 : 0);
  }
  return ClusterEvent(std::move(cs));
}

}  // namespace ppx
