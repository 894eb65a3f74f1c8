#pragma once

// Root bracketing/bisection on monotone functions and adaptive quadrature.
// These back every quantile and normalizer in the library, so they favour
// robustness over iteration counts.

#include <cmath>
#include <functional>
#include <limits>

#include "cdist/errors.hpp"

namespace cdist::num {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Bracket {
  double lo, hi;
};

// Expand [lo, hi] outward by doubling until f(lo) <= target <= f(hi).
// f must be nondecreasing. bound_lo/bound_hi clip the expansion (use
// +-infinity for unbounded supports). Throws after max_doublings.
inline Bracket expand_bracket(const std::function<double(double)>& f,
                              double target, double lo, double hi,
                              double bound_lo = -kInf, double bound_hi = kInf,
                              int max_doublings = 60) {
  double width = hi - lo;
  if (!(width > 0.0)) width = 1.0;
  int n = 0;
  double step = width;
  while (f(lo) > target && lo > bound_lo) {
    if (++n > max_doublings)
      throw NumericError("bracket expansion failed on the lower side");
    hi = lo;
    lo = std::fmax(bound_lo, lo - step);
    step *= 2.0;
  }
  n = 0;
  step = width;
  while (f(hi) < target && hi < bound_hi) {
    if (++n > max_doublings)
      throw NumericError("bracket expansion failed on the upper side");
    lo = hi;
    hi = std::fmin(bound_hi, hi + step);
    step *= 2.0;
  }
  return {lo, hi};
}

// Leftmost x in [lo, hi] with f(x) >= target, for nondecreasing f.
// Converges to the generalized inverse; flat stretches resolve to their
// left endpoint.
inline double bisect_nondecreasing(const std::function<double(double)>& f,
                                   double target, double lo, double hi,
                                   int max_iter = 200) {
  for (int i = 0; i < max_iter; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
    if (f(mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a,
                           double fa, double b, double fb, double m, double fm,
                           double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on a finite interval.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-10, int max_depth = 50) {
  if (!(b > a)) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// Simpson weights on an odd-length uniform grid; trapezoid correction on the
// final panel when the length is even.
inline double grid_integral(const std::function<double(int)>& value, int n,
                            double step) {
  if (n < 2) return 0.0;
  double sum = 0.0;
  int pairs = (n - 1) / 2;
  for (int k = 0; k < pairs; ++k) {
    int i = 2 * k;
    sum += step / 3.0 * (value(i) + 4.0 * value(i + 1) + value(i + 2));
  }
  if ((n - 1) % 2 != 0)
    sum += 0.5 * step * (value(n - 2) + value(n - 1));
  return sum;
}

}  // namespace cdist::num
