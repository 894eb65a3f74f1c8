#pragma once

// Dense row-major matrices at desk scale, with just the factorizations the
// fiducial layer needs: column-pivoted QR (for Gram determinants), LU
// determinants, and Cholesky solves for normal-equation work.

#include <cmath>
#include <vector>

#include "cdist/errors.hpp"

namespace cdist::num {

class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw ParameterError("Mat: negative dimension");
  }
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// sqrt(det(A^T A)) via column-pivoted Householder QR; returns 0 when A is
// numerically rank-deficient.
inline double gram_sqrt_det(Mat a) {
  const int n = a.rows(), p = a.cols();
  if (n < p) throw ParameterError("gram_sqrt_det: need rows >= cols");
  if (p == 0) return 1.0;
  std::vector<int> perm(p);
  double prod = 1.0;
  double max_diag = 0.0;
  for (int k = 0; k < p; ++k) {
    // pivot on the largest remaining column norm
    int best = k;
    double best_norm = -1.0;
    for (int j = k; j < p; ++j) {
      double s = 0.0;
      for (int i = k; i < n; ++i) s += a(i, j) * a(i, j);
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != k)
      for (int i = 0; i < n; ++i) std::swap(a(i, k), a(i, best));
    double alpha = std::sqrt(best_norm);
    if (k == 0) max_diag = alpha;
    if (!(alpha > max_diag * 1e-13)) return 0.0;  // rank deficient
    prod *= alpha;
    if (k == p - 1) break;
    // Householder vector v = x - alpha e1 (sign chosen for stability)
    double x0 = a(k, k);
    double sign = x0 >= 0.0 ? 1.0 : -1.0;
    double v0 = x0 + sign * alpha;
    std::vector<double> v(n - k);
    v[0] = v0;
    for (int i = k + 1; i < n; ++i) v[i - k] = a(i, k);
    double vtv = 0.0;
    for (double vi : v) vtv += vi * vi;
    if (vtv > 0.0) {
      for (int j = k + 1; j < p; ++j) {
        double dot = 0.0;
        for (int i = k; i < n; ++i) dot += v[i - k] * a(i, j);
        double f = 2.0 * dot / vtv;
        for (int i = k; i < n; ++i) a(i, j) -= f * v[i - k];
      }
    }
    for (int i = k; i < n; ++i) a(i, k) = 0.0;  // column k is spent
  }
  return prod;
}

// Determinant of a square matrix by LU with partial pivoting.
inline double det(Mat a) {
  const int n = a.rows();
  if (n != a.cols()) throw ParameterError("det: matrix must be square");
  double d = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) return 0.0;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      d = -d;
    }
    d *= a(k, k);
    for (int i = k + 1; i < n; ++i) {
      double f = a(i, k) / a(k, k);
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

// Lower Cholesky factor of a symmetric positive definite matrix.
inline Mat cholesky(const Mat& a) {
  const int n = a.rows();
  if (n != a.cols()) throw ParameterError("cholesky: matrix must be square");
  Mat l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(s > 0.0)) throw DegenerateError("cholesky: matrix not positive definite");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

inline std::vector<double> forward_solve(const Mat& l, std::vector<double> b) {
  const int n = l.rows();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) b[i] -= l(i, k) * b[k];
    b[i] /= l(i, i);
  }
  return b;
}

inline std::vector<double> backward_solve_t(const Mat& l, std::vector<double> b) {
  // solves L^T x = b for lower-triangular L
  const int n = l.rows();
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) b[i] -= l(k, i) * b[k];
    b[i] /= l(i, i);
  }
  return b;
}

}  // namespace cdist::num
