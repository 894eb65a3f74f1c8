#pragma once

// Distribution catalog: cdf / quantile / density / sampling for the ten
// families the inference layers draw on. All quantiles go through the cdf
// (bracketed bisection with a Newton polish), so cdf(quantile(p)) = p holds
// to ~1e-12 for the continuous kinds. Sampling is inverse-transform with one
// uniform per draw, which keeps streams replayable.
//
// Beta(0,b), Beta(a,0) and Gamma(0,rate) are accepted as declared point
// masses at 0, 1, and 0 respectively; their cdf is a step, their quantile a
// constant, and density() reports the unit mass at the atom.

#include <cmath>
#include <string>
#include <vector>

#include "cdist/errors.hpp"
#include "cdist/numeric/rng.hpp"
#include "cdist/numeric/solve.hpp"
#include "cdist/numeric/special.hpp"

namespace cdist::num {

class Dist {
 public:
  enum class Kind {
    normal,
    student_t,
    chi_square,
    fisher_f,
    beta,
    gamma,
    uniform,
    binomial,
    poisson,
    neg_binomial
  };

  static Dist normal(double mean, double sd) {
    if (!(sd > 0.0)) throw ParameterError("normal: sd must be > 0");
    return Dist(Kind::normal, mean, sd);
  }
  static Dist student_t(double df) {
    if (!(df > 0.0)) throw ParameterError("student_t: df must be > 0");
    return Dist(Kind::student_t, df, 0.0);
  }
  static Dist chi_square(double df) {
    if (!(df > 0.0)) throw ParameterError("chi_square: df must be > 0");
    return Dist(Kind::chi_square, df, 0.0);
  }
  static Dist fisher_f(double df1, double df2) {
    if (!(df1 > 0.0 && df2 > 0.0))
      throw ParameterError("fisher_f: both df must be > 0");
    return Dist(Kind::fisher_f, df1, df2);
  }
  static Dist beta(double a, double b) {
    if (a < 0.0 || b < 0.0 || (a == 0.0 && b == 0.0))
      throw ParameterError("beta: needs a, b >= 0 and not both zero");
    return Dist(Kind::beta, a, b);
  }
  static Dist gamma(double shape, double rate) {
    if (shape < 0.0 || !(rate > 0.0))
      throw ParameterError("gamma: needs shape >= 0 and rate > 0");
    return Dist(Kind::gamma, shape, rate);
  }
  static Dist uniform(double lo, double hi) {
    if (!(lo < hi)) throw ParameterError("uniform: needs lo < hi");
    return Dist(Kind::uniform, lo, hi);
  }
  static Dist binomial(int n, double p) {
    if (n < 1 || !(p >= 0.0 && p <= 1.0))
      throw ParameterError("binomial: needs n >= 1 and p in [0,1]");
    return Dist(Kind::binomial, static_cast<double>(n), p);
  }
  static Dist poisson(double rate) {
    if (!(rate > 0.0)) throw ParameterError("poisson: rate must be > 0");
    return Dist(Kind::poisson, rate, 0.0);
  }
  static Dist neg_binomial(int r, double p) {
    if (r < 1 || !(p > 0.0 && p <= 1.0))
      throw ParameterError("neg_binomial: needs r >= 1 and p in (0,1]");
    return Dist(Kind::neg_binomial, static_cast<double>(r), p);
  }

  Kind kind() const { return kind_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }

  bool discrete() const {
    return kind_ == Kind::binomial || kind_ == Kind::poisson ||
           kind_ == Kind::neg_binomial || point_mass();
  }

  bool point_mass() const {
    if (kind_ == Kind::beta) return p1_ == 0.0 || p2_ == 0.0;
    if (kind_ == Kind::gamma) return p1_ == 0.0;
    return false;
  }

  double point_mass_at() const {
    if (kind_ == Kind::beta) return p1_ == 0.0 ? 0.0 : 1.0;
    return 0.0;  // degenerate gamma
  }

  double support_lo() const {
    switch (kind_) {
      case Kind::normal:
      case Kind::student_t:
        return -kInf;
      case Kind::uniform:
        return p1_;
      case Kind::beta:
        return point_mass() ? point_mass_at() : 0.0;
      case Kind::neg_binomial:
        return p1_;
      default:
        return 0.0;
    }
  }

  double support_hi() const {
    switch (kind_) {
      case Kind::uniform:
        return p2_;
      case Kind::beta:
        return point_mass() ? point_mass_at() : 1.0;
      case Kind::binomial:
        return p1_;
      default:
        return kInf;
    }
  }

  std::string name() const {
    switch (kind_) {
      case Kind::normal: return "normal";
      case Kind::student_t: return "student_t";
      case Kind::chi_square: return "chi_square";
      case Kind::fisher_f: return "fisher_f";
      case Kind::beta: return "beta";
      case Kind::gamma: return "gamma";
      case Kind::uniform: return "uniform";
      case Kind::binomial: return "binomial";
      case Kind::poisson: return "poisson";
      case Kind::neg_binomial: return "neg_binomial";
    }
    return "?";
  }

 private:
  Dist(Kind k, double p1, double p2) : kind_(k), p1_(p1), p2_(p2) {}

  Kind kind_;
  double p1_, p2_;
};

namespace detail {

inline double binomial_log_pmf(double n, double p, int k) {
  if (p == 0.0) return k == 0 ? 0.0 : -kInf;
  if (p == 1.0) return k == static_cast<int>(n) ? 0.0 : -kInf;
  return log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p);
}

inline double poisson_log_pmf(double rate, int k) {
  return k * std::log(rate) - rate - std::lgamma(k + 1.0);
}

inline double neg_binomial_log_pmf(double r, double p, int k) {
  // k = total trials until the r-th success, k >= r
  if (p == 1.0) return k == static_cast<int>(r) ? 0.0 : -kInf;
  return log_choose(k - 1.0, r - 1.0) + r * std::log(p) +
         (k - r) * std::log1p(-p);
}

}  // namespace detail

inline double density(const Dist& d, double x);

inline double cdf(const Dist& d, double x) {
  if (std::isnan(x)) throw DomainError("cdf: x is NaN");
  if (d.point_mass()) return x >= d.point_mass_at() ? 1.0 : 0.0;
  const double a = d.param1(), b = d.param2();
  switch (d.kind()) {
    case Dist::Kind::normal:
      return norm_cdf((x - a) / b);
    case Dist::Kind::student_t: {
      if (x == 0.0) return 0.5;
      double x2 = x * x;
      if (x2 <= a) {
        // central form keeps precision near the median
        double ib = inc_beta(0.5, 0.5 * a, x2 / (a + x2));
        return x > 0.0 ? 0.5 + 0.5 * ib : 0.5 - 0.5 * ib;
      }
      double ib = inc_beta(0.5 * a, 0.5, a / (a + x2));
      return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
    }
    case Dist::Kind::chi_square:
      return x <= 0.0 ? 0.0 : inc_gamma_p(0.5 * a, 0.5 * x);
    case Dist::Kind::fisher_f:
      return x <= 0.0 ? 0.0 : inc_beta(0.5 * a, 0.5 * b, a * x / (a * x + b));
    case Dist::Kind::beta:
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return inc_beta(a, b, x);
    case Dist::Kind::gamma:
      return x <= 0.0 ? 0.0 : inc_gamma_p(a, b * x);
    case Dist::Kind::uniform:
      if (x <= a) return 0.0;
      if (x >= b) return 1.0;
      return (x - a) / (b - a);
    case Dist::Kind::binomial: {
      int k = static_cast<int>(std::floor(x));
      if (k < 0) return 0.0;
      if (k >= static_cast<int>(a)) return 1.0;
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += std::exp(detail::binomial_log_pmf(a, b, j));
      return std::fmin(s, 1.0);
    }
    case Dist::Kind::poisson: {
      int k = static_cast<int>(std::floor(x));
      if (k < 0) return 0.0;
      return inc_gamma_q(k + 1.0, a);
    }
    case Dist::Kind::neg_binomial: {
      int k = static_cast<int>(std::floor(x));
      int r = static_cast<int>(a);
      if (k < r) return 0.0;
      if (b >= 1.0) return 1.0;
      return inc_beta(a, k - a + 1.0, b);
    }
  }
  throw ParameterError("cdf: unknown kind");
}

inline double density(const Dist& d, double x) {
  if (std::isnan(x)) throw DomainError("density: x is NaN");
  if (d.point_mass()) return x == d.point_mass_at() ? 1.0 : 0.0;
  const double a = d.param1(), b = d.param2();
  switch (d.kind()) {
    case Dist::Kind::normal: {
      double z = (x - a) / b;
      return norm_pdf(z) / b;
    }
    case Dist::Kind::student_t:
      return std::exp(std::lgamma(0.5 * (a + 1.0)) - std::lgamma(0.5 * a) -
                      0.5 * std::log(a * kPi) -
                      0.5 * (a + 1.0) * std::log1p(x * x / a));
    case Dist::Kind::chi_square:
      if (x < 0.0) return 0.0;
      if (x == 0.0) return a < 2.0 ? kInf : (a == 2.0 ? 0.5 : 0.0);
      return std::exp((0.5 * a - 1.0) * std::log(x) - 0.5 * x -
                      0.5 * a * std::log(2.0) - std::lgamma(0.5 * a));
    case Dist::Kind::fisher_f: {
      if (x < 0.0) return 0.0;
      if (x == 0.0) return a < 2.0 ? kInf : (a == 2.0 ? 1.0 : 0.0);
      double la = 0.5 * a * std::log(a) + 0.5 * b * std::log(b) +
                  (0.5 * a - 1.0) * std::log(x) -
                  0.5 * (a + b) * std::log(b + a * x) - log_beta(0.5 * a, 0.5 * b);
      return std::exp(la);
    }
    case Dist::Kind::beta:
      if (x < 0.0 || x > 1.0) return 0.0;
      if (x == 0.0) return a < 1.0 ? kInf : (a == 1.0 ? b : 0.0);
      if (x == 1.0) return b < 1.0 ? kInf : (b == 1.0 ? a : 0.0);
      return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                      log_beta(a, b));
    case Dist::Kind::gamma:
      if (x < 0.0) return 0.0;
      if (x == 0.0) return a < 1.0 ? kInf : (a == 1.0 ? b : 0.0);
      return std::exp(a * std::log(b) + (a - 1.0) * std::log(x) - b * x -
                      std::lgamma(a));
    case Dist::Kind::uniform:
      return (x < a || x > b) ? 0.0 : 1.0 / (b - a);
    case Dist::Kind::binomial: {
      int k = static_cast<int>(std::llround(x));
      if (k < 0 || k > static_cast<int>(a)) return 0.0;
      return std::exp(detail::binomial_log_pmf(a, b, k));
    }
    case Dist::Kind::poisson: {
      int k = static_cast<int>(std::llround(x));
      if (k < 0) return 0.0;
      return std::exp(detail::poisson_log_pmf(a, k));
    }
    case Dist::Kind::neg_binomial: {
      int k = static_cast<int>(std::llround(x));
      if (k < static_cast<int>(a)) return 0.0;
      return std::exp(detail::neg_binomial_log_pmf(a, b, k));
    }
  }
  throw ParameterError("density: unknown kind");
}

namespace detail {

// Starting bracket for continuous quantile searches; expand_bracket widens it.
inline Bracket quantile_seed(const Dist& d) {
  const double a = d.param1(), b = d.param2();
  switch (d.kind()) {
    case Dist::Kind::student_t: return {-2.0, 2.0};
    case Dist::Kind::chi_square: return {0.0, a + 2.0};
    case Dist::Kind::fisher_f: return {0.0, 4.0};
    case Dist::Kind::beta: return {0.0, 1.0};
    case Dist::Kind::gamma: return {0.0, (a + 2.0) / b};
    default: return {-1.0, 1.0};
  }
}

inline double discrete_quantile(const Dist& d, double p) {
  int k = static_cast<int>(d.kind() == Dist::Kind::neg_binomial ? d.param1() : 0.0);
  if (p <= 0.0) return k;
  const int hard_cap = 20000000;
  double acc = 0.0;
  for (int i = 0; i < hard_cap; ++i, ++k) {
    double pk = density(d, k);
    acc += pk;
    if (acc >= p) return k;
    if (d.kind() == Dist::Kind::binomial && k >= static_cast<int>(d.param1()))
      return d.param1();
    // p within roundoff of 1: stop once the tail is below double resolution
    if (pk < 1e-300 && acc > 0.5) return k;
  }
  throw NumericError("discrete quantile scan exceeded its cap");
}

}  // namespace detail

inline double quantile(const Dist& d, double p) {
  if (d.point_mass()) {
    if (!(p >= 0.0 && p <= 1.0)) throw RangeError("quantile: p outside [0,1]");
    return d.point_mass_at();
  }
  if (d.discrete()) {
    if (!(p >= 0.0 && p <= 1.0)) throw RangeError("quantile: p outside [0,1]");
    if (p == 1.0 && d.kind() == Dist::Kind::binomial) return d.param1();
    if (p == 1.0) return kInf;
    return detail::discrete_quantile(d, p);
  }
  if (!(p > 0.0 && p < 1.0)) throw RangeError("quantile: p outside (0,1)");
  const double a = d.param1(), b = d.param2();
  switch (d.kind()) {
    case Dist::Kind::normal: return a + b * norm_quantile(p);
    case Dist::Kind::uniform: return a + p * (b - a);
    default: break;
  }
  auto f = [&](double x) { return cdf(d, x); };
  Bracket seed = detail::quantile_seed(d);
  Bracket br = expand_bracket(f, p, seed.lo, seed.hi, d.support_lo(), d.support_hi());
  double x = bisect_nondecreasing(f, p, br.lo, br.hi);
  // Newton polish against the analytic density.
  for (int i = 0; i < 3; ++i) {
    double fx = cdf(d, x) - p;
    double dx = density(d, x);
    if (!(dx > 0.0) || !std::isfinite(dx)) break;
    double step = fx / dx;
    double nx = x - step;
    if (nx <= d.support_lo() || nx >= d.support_hi()) break;
    x = nx;
    if (std::fabs(step) < 1e-14 * (1.0 + std::fabs(x))) break;
  }
  return x;
}

inline double sample_one(const Dist& d, RngStream& rng) {
  double u = rng.next_double();
  if (d.point_mass()) return d.point_mass_at();
  return quantile(d, u);
}

inline std::vector<double> sample(const Dist& d, RngStream& rng, int m) {
  if (m < 1) throw ParameterError("sample: m must be >= 1");
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i) out[i] = sample_one(d, rng);
  return out;
}

}  // namespace cdist::num
