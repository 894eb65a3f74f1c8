#pragma once

// Distribution estimators on a scalar parameter: the CD type, grid-backed
// curves, and the generic inference operations (confidence curve, quantiles,
// point estimates, intervals, p-values) that work on any of them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cdist/errors.hpp"
#include "cdist/numeric/solve.hpp"

namespace cdist {

using num::kInf;

enum class CdKind { exact, asymptotic, upper, lower, half_corrected };

inline const char* to_string(CdKind k) {
  switch (k) {
    case CdKind::exact: return "exact";
    case CdKind::asymptotic: return "asymptotic";
    case CdKind::upper: return "upper";
    case CdKind::lower: return "lower";
    case CdKind::half_corrected: return "half_corrected";
  }
  return "?";
}

struct Support {
  double lo = -kInf;
  double hi = kInf;
  bool contains(double theta) const { return theta >= lo && theta <= hi; }
};

// Discretized curve over a strictly increasing theta grid.
struct GridCurve {
  enum class Interp { linear, step };

  std::vector<double> thetas;
  std::vector<double> values;
  Interp interp = Interp::linear;

  GridCurve() = default;
  GridCurve(std::vector<double> t, std::vector<double> v,
            Interp ip = Interp::linear)
      : thetas(std::move(t)), values(std::move(v)), interp(ip) {
    if (thetas.size() != values.size() || thetas.size() < 2)
      throw ParameterError("GridCurve: need matching theta/value arrays, size >= 2");
    for (std::size_t i = 1; i < thetas.size(); ++i)
      if (!(thetas[i] > thetas[i - 1]))
        throw ParameterError("GridCurve: thetas must be strictly increasing");
    for (double v2 : values)
      if (!std::isfinite(v2)) throw ParameterError("GridCurve: values must be finite");
  }

  std::size_t size() const { return thetas.size(); }

  // Evaluate with clamping outside the grid; step curves are
  // right-continuous.
  double operator()(double theta) const {
    if (theta <= thetas.front()) return values.front();
    if (theta >= thetas.back()) return values.back();
    auto it = std::upper_bound(thetas.begin(), thetas.end(), theta);
    std::size_t i = static_cast<std::size_t>(it - thetas.begin());
    if (interp == Interp::step) return values[i - 1];
    double t0 = thetas[i - 1], t1 = thetas[i];
    double w = (theta - t0) / (t1 - t0);
    return (1.0 - w) * values[i - 1] + w * values[i];
  }
};

// Pool-adjacent-violators: smallest nondecreasing sequence projection.
inline std::vector<double> isotonic(std::vector<double> v) {
  std::vector<double> level(v.size());
  std::vector<double> weight(v.size());
  std::size_t m = 0;
  for (double x : v) {
    level[m] = x;
    weight[m] = 1.0;
    ++m;
    while (m > 1 && level[m - 2] > level[m - 1]) {
      double w = weight[m - 2] + weight[m - 1];
      level[m - 2] = (weight[m - 2] * level[m - 2] + weight[m - 1] * level[m - 1]) / w;
      weight[m - 2] = w;
      --m;
    }
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t b = 0; b < m; ++b)
    for (int k = 0; k < static_cast<int>(weight[b] + 0.5); ++k)
      out.push_back(level[b]);
  return out;
}

class CD {
 public:
  using Eval = std::function<double(double)>;

  CD(Eval eval, Support support, CdKind kind, bool monotone, Eval density = {})
      : eval_(std::move(eval)),
        density_(std::move(density)),
        support_(support),
        kind_(kind),
        monotone_(monotone) {}

  // H(theta), clamped to [0,1].
  double operator()(double theta) const {
    if (!support_.contains(theta))
      throw DomainError("CD: theta outside the parameter support");
    double v = eval_(theta);
    return std::clamp(v, 0.0, 1.0);
  }

  const Support& support() const { return support_; }
  CdKind kind() const { return kind_; }
  bool monotone() const { return monotone_; }

  bool has_density() const { return static_cast<bool>(density_); }
  double density(double theta) const {
    if (!density_) throw UnsupportedError("CD: no density available");
    if (!support_.contains(theta))
      throw DomainError("CD: theta outside the parameter support");
    return std::fmax(density_(theta), 0.0);
  }

 private:
  Eval eval_;
  Eval density_;
  Support support_;
  CdKind kind_;
  bool monotone_;
};

// CD backed by a grid of H values; density by centered finite differences on
// the same grid. Values are isotonized when the curve is declared monotone.
inline CD cd_from_grid(GridCurve h, CdKind kind, bool monotone = true,
                       Support support = {}) {
  if (monotone) h.values = isotonic(std::move(h.values));
  for (double& v : h.values) v = std::clamp(v, 0.0, 1.0);
  auto density = [h](double theta) {
    const auto& t = h.thetas;
    if (theta < t.front() || theta > t.back()) return 0.0;
    auto it = std::upper_bound(t.begin(), t.end(), theta);
    std::size_t i = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(it - t.begin(), 1), t.size() - 1);
    std::size_t lo = i > 1 ? i - 1 : 0;
    std::size_t hi = i < t.size() - 1 ? i + 1 : t.size() - 1;
    if (hi == lo) return 0.0;
    return std::fmax((h(t[hi]) - h(t[lo])) / (t[hi] - t[lo]), 0.0);
  };
  GridCurve copy = h;
  return CD([copy](double theta) { return copy(theta); }, support, kind,
            monotone, density);
}

struct CInterval {
  double lower = -kInf;
  double upper = kInf;
  double level = 0.0;

  double length() const { return upper - lower; }
  bool contains(double theta) const { return theta >= lower && theta <= upper; }
};

enum class Side { two, lower, upper };
enum class PointEstimator { median, mean, mode };
enum class NullSide { le, ge };

// CV(theta) = 2 min{H, 1-H}.
inline double confidence_curve(const CD& cd, double theta) {
  double h = cd(theta);
  return 2.0 * std::fmin(h, 1.0 - h);
}

// Leftmost theta with H(theta) >= p. The bracket starts at a finite seed and
// doubles outward (up to 60 times) on unbounded supports.
inline double cd_quantile(const CD& cd, double p) {
  if (!cd.monotone())
    throw UnsupportedError("cd_quantile: requires a monotone CD");
  if (!(p > 0.0 && p < 1.0)) throw RangeError("cd_quantile: p outside (0,1)");
  const Support& s = cd.support();
  auto f = [&cd](double theta) { return cd(theta); };
  double lo = std::isfinite(s.lo) ? s.lo : std::fmin(-1.0, s.hi - 2.0);
  double hi = std::isfinite(s.hi) ? s.hi : std::fmax(1.0, s.lo + 2.0);
  if (std::isfinite(s.lo) && !std::isfinite(s.hi)) hi = s.lo + 1.0;
  if (!std::isfinite(s.lo) && std::isfinite(s.hi)) lo = s.hi - 1.0;
  num::Bracket br = num::expand_bracket(f, p, lo, hi, s.lo, s.hi);
  return num::bisect_nondecreasing(f, p, br.lo, br.hi);
}

namespace detail {

// Stieltjes integral of theta dH by trapezoid refinement; theta = tan(u)
// maps unbounded supports onto a finite u range.
inline double mean_from_cdf(const CD& cd, double tol = 1e-8) {
  const Support& s = cd.support();
  const bool finite = std::isfinite(s.lo) && std::isfinite(s.hi);
  double ulo = finite ? s.lo : std::atan(std::fmax(s.lo, -1e12));
  double uhi = finite ? s.hi : std::atan(std::fmin(s.hi, 1e12));
  auto theta_at = [&](double u) {
    if (finite) return u;
    double t = std::tan(u);
    return std::clamp(t, -1e12, 1e12);
  };
  auto stieltjes = [&](int n) {
    double sum = 0.0;
    double du = (uhi - ulo) / n;
    double tprev = theta_at(ulo);
    double hprev = cd(std::clamp(tprev, s.lo, s.hi));
    for (int i = 1; i <= n; ++i) {
      double t = theta_at(ulo + i * du);
      double h = cd(std::clamp(t, s.lo, s.hi));
      sum += 0.5 * (t + tprev) * (h - hprev);
      tprev = t;
      hprev = h;
    }
    return sum;
  };
  int n = 64;
  double prev = stieltjes(n);
  for (int round = 0; round < 14; ++round) {
    n *= 2;
    double cur = stieltjes(n);
    if (std::fabs(cur - prev) < tol * std::fmax(1.0, std::fabs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

// Golden-section refinement of the density maximum after a coarse scan.
inline double mode_from_density(const CD& cd) {
  const Support& s = cd.support();
  double lo = s.lo, hi = s.hi;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    // scan between extreme quantiles instead of the infinite support
    lo = cd_quantile(cd, 1e-6);
    hi = cd_quantile(cd, 1.0 - 1e-6);
  }
  const int n = 2048;
  double best = lo, best_v = -1.0;
  for (int i = 0; i <= n; ++i) {
    double t = lo + (hi - lo) * i / n;
    double v = cd.density(t);
    if (v > best_v) {
      best_v = v;
      best = t;
    }
  }
  double a = std::fmax(lo, best - (hi - lo) / n);
  double b = std::fmin(hi, best + (hi - lo) / n);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d2 = a + gr * (b - a);
  double fc = cd.density(c), fd = cd.density(d2);
  for (int i = 0; i < 120 && (b - a) > 1e-12 * (1.0 + std::fabs(a)); ++i) {
    if (fc > fd) {
      b = d2; d2 = c; fd = fc;
      c = b - gr * (b - a); fc = cd.density(c);
    } else {
      a = c; c = d2; fc = fd;
      d2 = a + gr * (b - a); fd = cd.density(d2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

inline double point_estimate(const CD& cd, PointEstimator which) {
  switch (which) {
    case PointEstimator::median:
      return cd_quantile(cd, 0.5);
    case PointEstimator::mean:
      if (!cd.monotone())
        throw UnsupportedError("point_estimate: mean needs a monotone CD");
      return detail::mean_from_cdf(cd);
    case PointEstimator::mode:
      if (!cd.has_density())
        throw UnsupportedError("point_estimate: mode needs a density");
      return detail::mode_from_density(cd);
  }
  throw UnsupportedError("point_estimate: unknown estimator");
}

inline CInterval interval(const CD& cd, double level, Side side = Side::two) {
  if (!(level > 0.0 && level < 1.0))
    throw RangeError("interval: level outside (0,1)");
  double alpha = 1.0 - level;
  switch (side) {
    case Side::two:
      return {cd_quantile(cd, 0.5 * alpha), cd_quantile(cd, 1.0 - 0.5 * alpha),
              level};
    case Side::lower:
      return {cd_quantile(cd, alpha), kInf, level};
    case Side::upper:
      return {-kInf, cd_quantile(cd, 1.0 - alpha), level};
  }
  throw UnsupportedError("interval: unknown side");
}

// Support of the null hypothesis theta <= b (or >= b).
inline double p_value_one_sided(const CD& cd, double b, NullSide null_side) {
  double h = cd(b);
  return null_side == NullSide::le ? h : 1.0 - h;
}

inline double p_value_two_sided(const CD& cd, double b) {
  return confidence_curve(cd, b);
}

// Level-(level) confidence set {theta : H(theta) <= level} for upper/lower
// curves that need not be monotone, reported as a union of grid intervals.
inline std::vector<std::pair<double, double>> confidence_set(
    const CD& cd, double level, const std::vector<double>& grid) {
  if (!(level > 0.0 && level < 1.0))
    throw RangeError("confidence_set: level outside (0,1)");
  if (grid.size() < 2) throw ParameterError("confidence_set: grid too small");
  std::vector<std::pair<double, double>> out;
  bool in = false;
  double start = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    bool inside = cd(grid[i]) <= level;
    if (inside && !in) {
      start = grid[i];
      in = true;
    } else if (!inside && in) {
      out.emplace_back(start, grid[i - 1]);
      in = false;
    }
  }
  if (in) out.emplace_back(start, grid.back());
  return out;
}

// Empirical CDF of Monte Carlo draws as a grid CD. Step gives the ECDF
// itself; linear interpolates plotting positions i/(M+1) with closing knots
// so the curve spans [0,1].
inline CD cd_from_draws(std::vector<double> draws,
                        GridCurve::Interp interp = GridCurve::Interp::step) {
  const std::size_t m = draws.size();
  if (m < 50)
    throw InsufficientSampleError("cd_from_draws: need at least 50 draws");
  std::sort(draws.begin(), draws.end());
  const double lo = draws.front(), hi = draws.back();
  if (!(hi > lo)) {
    // all draws equal: a unit step at that point
    double c = lo;
    double w = std::fmax(1e-9, 1e-9 * std::fabs(c));
    GridCurve g({c - w, c, c + w}, {0.0, 1.0, 1.0}, GridCurve::Interp::step);
    return cd_from_grid(std::move(g), CdKind::asymptotic, true);
  }
  std::vector<double> t, v;
  t.reserve(m + 2);
  v.reserve(m + 2);
  if (interp == GridCurve::Interp::step) {
    double pad = (hi - lo) / static_cast<double>(m);
    t.push_back(lo - pad);
    v.push_back(0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double p = static_cast<double>(i + 1) / static_cast<double>(m);
      if (!t.empty() && draws[i] == t.back())
        v.back() = p;  // ties share a knot carrying the upper level
      else {
        t.push_back(draws[i]);
        v.push_back(p);
      }
    }
    GridCurve g(std::move(t), std::move(v), GridCurve::Interp::step);
    return cd_from_grid(std::move(g), CdKind::asymptotic, true);
  }
  double pad = (hi - lo) / static_cast<double>(m + 1);
  t.push_back(lo - pad);
  v.push_back(0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double p = static_cast<double>(i + 1) / static_cast<double>(m + 1);
    if (draws[i] == t.back())
      v.back() = p;
    else {
      t.push_back(draws[i]);
      v.push_back(p);
    }
  }
  t.push_back(hi + pad);
  v.push_back(1.0);
  GridCurve g(std::move(t), std::move(v), GridCurve::Interp::linear);
  return cd_from_grid(std::move(g), CdKind::asymptotic, true);
}

}  // namespace cdist
