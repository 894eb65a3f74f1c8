#pragma once

// Test-side reference implementations, deliberately independent of the
// library's code paths: quantiles come from plain bisection on quadrature
// cdfs built from hand-written density formulas, and the digamma reference
// is a tail-corrected harmonic series. Slow is fine here.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Fixed-panel composite Simpson with one Richardson refinement loop.
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, int panels = 4096) {
  auto simpson = [&](int n) {
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
  };
  double prev = simpson(panels);
  double cur = simpson(2 * panels);
  for (int round = 0; round < 6 && std::fabs(cur - prev) > 1e-13 * (1.0 + std::fabs(cur));
       ++round) {
    prev = cur;
    panels *= 2;
    cur = simpson(2 * panels);
  }
  return cur;
}

inline double bisect(const std::function<double(double)>& f, double target,
                     double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double std_normal_quantile(double p) {
  return bisect(std_normal_cdf, p, -10.0, 10.0);
}

// Lower gamma integral with the x = t^2 substitution, which removes the
// endpoint singularity whenever shape < 1.
inline double gamma_lower_reg(double a, double x) {
  if (x <= 0.0) return 0.0;
  return integrate(
      [a](double t) {
        return 2.0 * std::pow(t, 2.0 * a - 1.0) * std::exp(-t * t - std::lgamma(a));
      },
      0.0, std::sqrt(x));
}

inline double chi_square_pdf(double df, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp((0.5 * df - 1.0) * std::log(x) - 0.5 * x -
                  0.5 * df * std::log(2.0) - std::lgamma(0.5 * df));
}

inline double chi_square_cdf(double df, double x) {
  if (x <= 0.0) return 0.0;
  return gamma_lower_reg(0.5 * df, 0.5 * x);
}

inline double chi_square_quantile(double df, double p) {
  return bisect([df](double x) { return chi_square_cdf(df, x); }, p, 1e-10,
                df + 60.0 * std::sqrt(2.0 * df) + 60.0);
}

inline double student_t_pdf(double df, double x) {
  return std::exp(std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                  0.5 * std::log(df * M_PI) -
                  0.5 * (df + 1.0) * std::log1p(x * x / df));
}

inline double student_t_cdf(double df, double x) {
  if (x < 0.0) return 1.0 - student_t_cdf(df, -x);
  return 0.5 + integrate([df](double t) { return student_t_pdf(df, t); }, 0.0, x);
}

inline double student_t_quantile(double df, double p) {
  return bisect([df](double x) { return student_t_cdf(df, x); }, p, -400.0, 400.0);
}

inline double fisher_f_pdf(double d1, double d2, double x) {
  if (x <= 0.0) return 0.0;
  double lb = std::lgamma(0.5 * d1) + std::lgamma(0.5 * d2) -
              std::lgamma(0.5 * (d1 + d2));
  return std::exp(0.5 * d1 * std::log(d1) + 0.5 * d2 * std::log(d2) +
                  (0.5 * d1 - 1.0) * std::log(x) -
                  0.5 * (d1 + d2) * std::log(d2 + d1 * x) - lb);
}

inline double fisher_f_cdf(double d1, double d2, double x) {
  if (x <= 0.0) return 0.0;
  return integrate([=](double t) { return fisher_f_pdf(d1, d2, t); }, 1e-12, x);
}

inline double beta_pdf(double a, double b, double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  double lb = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lb);
}

// Beta integral with x = sin^2(u), which removes both endpoint
// singularities for a, b >= 1/2.
inline double beta_cdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lb = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return integrate(
      [=](double u) {
        double s = std::sin(u), c = std::cos(u);
        return 2.0 * std::pow(s, 2.0 * a - 1.0) * std::pow(c, 2.0 * b - 1.0) *
               std::exp(-lb);
      },
      0.0, std::asin(std::sqrt(x)));
}

// Harmonic-series digamma with an integral tail correction.
inline double digamma(double z) {
  const int big_k = 1000000;
  double sum = 0.0;
  for (int k = big_k - 1; k >= 0; --k)
    sum += 1.0 / (k + 1.0) - 1.0 / (k + z);
  double tail = std::log((big_k - 0.5 + z) / (big_k + 0.5));
  return -0.5772156649015328606 + sum + tail;
}

// Two-sided KS distance of a sample against a continuous cdf.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::fmax(d, std::fmax((i + 1) / n - f, f - i / n));
  }
  return d;
}

// KS distance between two samples.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    double fa = static_cast<double>(i) / a.size();
    double fb = static_cast<double>(j) / b.size();
    d = std::fmax(d, std::fabs(fa - fb));
  }
  return d;
}

}  // namespace oracle
