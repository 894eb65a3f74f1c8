#pragma once

// Fiducial density for the irregular uniform model
//   Y_i = a(theta) + b(theta) U_i,  U_i ~ U(-1,1) iid,
// which requires a'(theta) > |b'(theta)| and b(theta) > 0. The density is
//   r(theta|y) ~ [a' + (c - a)(log b)'] / b^n
// on the feasible set {a - b < y_(1), a + b > y_(n)}, with c = mean(y) for
// the full-data variant and c a weighted combination of the extremes for the
// variant built on the minimal sufficient statistics.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "cdist/cd/cd.hpp"
#include "cdist/errors.hpp"
#include "cdist/gfd/density.hpp"
#include "cdist/numeric/solve.hpp"
#include "cdist/numeric/special.hpp"

namespace cdist::gfd {

struct AffineUniformModel {
  std::function<double(double)> a, a_prime, b, b_prime;
  Support theta_support;  // where a, b are defined
};

// The U(theta, theta^2) family, theta > 1: a = (theta^2+theta)/2,
// b = (theta^2-theta)/2.
inline AffineUniformModel u_theta_squared_model() {
  return {[](double t) { return 0.5 * (t * t + t); },
          [](double t) { return t + 0.5; },
          [](double t) { return 0.5 * (t * t - t); },
          [](double t) { return t - 0.5; },
          Support{1.0 + 1e-9, num::kInf}};
}

enum class IrregularVariant { r1, r2 };

namespace detail {

inline double solve_monotone(const std::function<double(double)>& f, double target,
                             const Support& s, double seed_lo, double seed_hi) {
  num::Bracket br = num::expand_bracket(f, target, seed_lo, seed_hi, s.lo, s.hi);
  return num::bisect_nondecreasing(f, target, br.lo, br.hi);
}

}  // namespace detail

// Normalized fiducial density on the supplied theta grid.
inline GridCurve gfd_uniform_irregular(const AffineUniformModel& model,
                                       const std::vector<double>& y,
                                       IrregularVariant variant,
                                       const std::vector<double>& grid) {
  if (y.empty()) throw InsufficientSampleError("gfd_uniform_irregular: no data");
  if (grid.size() < 3) throw ParameterError("gfd_uniform_irregular: grid too small");
  const double y1 = *std::min_element(y.begin(), y.end());
  const double yn = *std::max_element(y.begin(), y.end());
  const double n = static_cast<double>(y.size());

  double center;  // the value c weighting the (log b)' term
  if (variant == IrregularVariant::r1) {
    double s = 0.0;
    for (double v : y) s += v;
    center = s / n;
  } else {
    // invert E Y_(1) = a - b (n-1)/(n+1) and E Y_(n) = a + b (n-1)/(n+1)
    const double frac = (n - 1.0) / (n + 1.0);
    auto m1 = [&](double t) { return model.a(t) - frac * model.b(t); };
    auto m2 = [&](double t) { return model.a(t) + frac * model.b(t); };
    double t1 = detail::solve_monotone(m1, y1, model.theta_support, grid.front(),
                                       grid.back());
    double t2 = detail::solve_monotone(m2, yn, model.theta_support, grid.front(),
                                       grid.back());
    double w1 = 1.0 / (model.a_prime(t1) - frac * model.b_prime(t1));
    double w2 = 1.0 / (model.a_prime(t2) + frac * model.b_prime(t2));
    if (!(w1 > 0.0) || !(w2 > 0.0))
      throw NumericError("gfd_uniform_irregular: nonpositive statistic weights");
    center = (w1 * y1 + w2 * yn) / (w1 + w2);
  }

  std::vector<double> logs(grid.size(), -num::kInf);
  bool feasible_seen = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = grid[i];
    if (!model.theta_support.contains(t)) continue;
    double a = model.a(t), b = model.b(t);
    double ap = model.a_prime(t), bp = model.b_prime(t);
    if (!(b > 0.0)) continue;
    if (!(ap > std::fabs(bp)))
      throw ParameterError("gfd_uniform_irregular: requires a' > |b'| on the grid");
    if (!(a - b < y1 && a + b > yn)) continue;  // outside the feasible set
    double jac = ap + (center - a) * bp / b;
    if (!(jac > 0.0)) continue;
    logs[i] = std::log(jac) - n * std::log(b);
    feasible_seen = true;
  }
  if (!feasible_seen)
    throw DegenerateError("gfd_uniform_irregular: empty feasible set on the grid");
  double mx = -num::kInf;
  for (double l : logs) mx = std::fmax(mx, l);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = std::exp(logs[i] - mx);
  return normalize_density_grid(grid, std::move(values));
}

// Comparison prior for the U(theta, theta^2) family, theta > 1 (unnormalized).
inline double reference_prior_u_theta(double theta) {
  if (!(theta > 1.0)) throw DomainError("reference_prior_u_theta: needs theta > 1");
  return (2.0 * theta - 1.0) / (theta * (theta - 1.0)) *
         std::exp(num::digamma(2.0 * theta / (2.0 * theta - 1.0)));
}

// Bayes posterior for U(theta, theta^2) under a given prior: proportional to
// prior(theta) / (theta^2 - theta)^n on the feasible set.
inline GridCurve u_theta_squared_posterior(
    const std::vector<double>& y, const std::function<double(double)>& prior,
    const std::vector<double>& grid) {
  if (y.empty()) throw InsufficientSampleError("u_theta_squared_posterior: no data");
  const double y1 = *std::min_element(y.begin(), y.end());
  const double yn = *std::max_element(y.begin(), y.end());
  const double n = static_cast<double>(y.size());
  std::vector<double> logs(grid.size(), -num::kInf);
  bool feasible_seen = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = grid[i];
    if (!(t > 1.0)) continue;
    if (!(t < y1 && t * t > yn)) continue;
    double pr = prior(t);
    if (!(pr > 0.0)) continue;
    logs[i] = std::log(pr) - n * std::log(t * t - t);
    feasible_seen = true;
  }
  if (!feasible_seen)
    throw DegenerateError("u_theta_squared_posterior: empty feasible set");
  double mx = -num::kInf;
  for (double l : logs) mx = std::fmax(mx, l);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = std::exp(logs[i] - mx);
  return normalize_density_grid(std::vector<double>(grid), std::move(values));
}

}  // namespace cdist::gfd
