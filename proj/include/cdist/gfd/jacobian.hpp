#pragma once

// Determinant-type functionals D(A) of an n x p derivative matrix. The
// l-infinity form sums |det| over all p-row submatrices; the l2 form is
// sqrt(det(A^T A)). Both reduce to |det A| when n = p.

#include <cmath>
#include <vector>

#include "cdist/errors.hpp"
#include "cdist/numeric/mat.hpp"

namespace cdist::gfd {

inline double jacobian_l2(const num::Mat& a) {
  if (a.rows() < a.cols())
    throw ParameterError("jacobian_l2: need at least as many rows as columns");
  return num::gram_sqrt_det(a);
}

inline constexpr long long kSubsetCap = 1000000;

inline long long subset_count(int n, int p) {
  long long c = 1;
  for (int i = 1; i <= p; ++i) {
    c = c * (n - p + i) / i;
    if (c > 4 * kSubsetCap) return 4 * kSubsetCap;  // saturate, caller rejects
  }
  return c;
}

// Sum of |det| over all p-row submatrices, enumerated in lexicographic
// order. Refuses when C(n,p) exceeds the cap and points at the l2 form.
inline double jacobian_linf(const num::Mat& a) {
  const int n = a.rows(), p = a.cols();
  if (n < p)
    throw ParameterError("jacobian_linf: need at least as many rows as columns");
  if (p == 0) return 1.0;
  if (subset_count(n, p) > kSubsetCap)
    throw CapacityError(
        "jacobian_linf: C(n,p) exceeds the enumeration cap; use jacobian_l2");
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  double total = 0.0;
  num::Mat sub(p, p);
  while (true) {
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) sub(i, j) = a(idx[i], j);
    total += std::fabs(num::det(sub));
    int pos = p - 1;
    while (pos >= 0 && idx[pos] == n - p + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < p; ++i) idx[i] = idx[i - 1] + 1;
  }
  return total;
}

}  // namespace cdist::gfd
