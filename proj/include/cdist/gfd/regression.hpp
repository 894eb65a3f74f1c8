#pragma once

// Fiducial posterior for linear regression Y = X beta + sigma U with
// r(beta, sigma | y) proportional to sigma^{-n-1} f((y - X beta)/sigma).
// Normal errors admit an exact sampler (scaled inverse-chi-square sigma^2,
// Gaussian beta given sigma) whose beta marginals are Student t; other error
// densities go through a (beta, sigma) grid for single-regressor designs.

#include <cmath>
#include <vector>

#include "cdist/cd/cd.hpp"
#include "cdist/errors.hpp"
#include "cdist/gfd/density.hpp"
#include "cdist/numeric/dist.hpp"
#include "cdist/numeric/mat.hpp"
#include "cdist/numeric/rng.hpp"

namespace cdist::gfd {

struct RegressionFit {
  std::vector<double> beta_hat;
  double s2 = 0.0;  // residual mean square, df = n - p
  int n = 0;
  int p = 0;
  num::Mat chol_xtx;   // lower factor of X^T X
  std::vector<double> xtx_inv_diag;
};

inline RegressionFit regression_fit(const num::Mat& x, const std::vector<double>& y) {
  const int n = x.rows(), p = x.cols();
  if (static_cast<int>(y.size()) != n)
    throw ParameterError("regression_fit: X and y sizes differ");
  if (n <= p) throw ParameterError("regression_fit: need n > p");
  num::Mat xtx(p, p);
  std::vector<double> xty(p, 0.0);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      double s = 0.0;
      for (int r = 0; r < n; ++r) s += x(r, i) * x(r, j);
      xtx(i, j) = s;
    }
    for (int r = 0; r < n; ++r) xty[i] += x(r, i) * y[r];
  }
  num::Mat l;
  try {
    l = num::cholesky(xtx);
  } catch (const DegenerateError&) {
    throw ParameterError("regression_fit: design matrix is rank deficient");
  }
  std::vector<double> beta = num::backward_solve_t(l, num::forward_solve(l, xty));
  double rss = 0.0, yy = 0.0;
  for (int r = 0; r < n; ++r) {
    double fit = 0.0;
    for (int j = 0; j < p; ++j) fit += x(r, j) * beta[j];
    rss += (y[r] - fit) * (y[r] - fit);
    yy += y[r] * y[r];
  }
  if (!(rss > 1e-20 * std::fmax(yy, 1.0)))
    throw DegenerateError("regression_fit: zero residual sum of squares");
  std::vector<double> inv_diag(p);
  for (int j = 0; j < p; ++j) {
    std::vector<double> e(p, 0.0);
    e[j] = 1.0;
    auto col = num::backward_solve_t(l, num::forward_solve(l, e));
    inv_diag[j] = col[j];
  }
  return {beta, rss / (n - p), n, p, l, inv_diag};
}

struct RegressionDraws {
  std::vector<std::vector<double>> beta;  // M x p
  std::vector<double> sigma;
  RegressionFit fit;

  // Exact fiducial marginal of beta_j under Normal errors:
  // beta_hat_j + t_{n-p} * s * sqrt((X^T X)^{-1}_{jj}).
  CD marginal_beta_cd(int j) const {
    if (j < 0 || j >= fit.p) throw ParameterError("marginal_beta_cd: bad index");
    num::Dist t = num::Dist::student_t(fit.n - fit.p);
    double center = fit.beta_hat[j];
    double scale = std::sqrt(fit.s2 * fit.xtx_inv_diag[j]);
    return CD([=](double b) { return num::cdf(t, (b - center) / scale); },
              Support{}, CdKind::exact, true,
              [=](double b) { return num::density(t, (b - center) / scale) / scale; });
  }
};

// Exact conjugate sampler for Normal errors: V ~ chi2(n-p),
// sigma = sqrt(rss / V), beta = beta_hat + sigma L^{-T} z.
inline RegressionDraws gfd_linear_regression(const num::Mat& x,
                                             const std::vector<double>& y, int m,
                                             num::RngStream& rng) {
  RegressionFit fit = regression_fit(x, y);
  if (m < 1) throw ParameterError("gfd_linear_regression: need M >= 1");
  const double rss = fit.s2 * (fit.n - fit.p);
  num::Dist chi = num::Dist::chi_square(static_cast<double>(fit.n - fit.p));
  num::Dist std_norm = num::Dist::normal(0.0, 1.0);
  RegressionDraws out{{}, {}, fit};
  out.beta.resize(m);
  out.sigma.resize(m);
  std::vector<double> z(fit.p);
  for (int d = 0; d < m; ++d) {
    double v = num::sample_one(chi, rng);
    double sigma = std::sqrt(rss / v);
    for (int j = 0; j < fit.p; ++j) z[j] = num::sample_one(std_norm, rng);
    auto delta = num::backward_solve_t(fit.chol_xtx, z);
    std::vector<double> b(fit.p);
    for (int j = 0; j < fit.p; ++j) b[j] = fit.beta_hat[j] + sigma * delta[j];
    out.beta[d] = std::move(b);
    out.sigma[d] = sigma;
  }
  return out;
}

// Grid sampler for a general standardized error density (single regressor
// plus sigma, i.e. two free parameters). Cells are sampled by mass and
// jittered uniformly inside.
inline RegressionDraws gfd_linear_regression(const num::Mat& x,
                                             const std::vector<double>& y,
                                             const num::Dist& error_density, int m,
                                             num::RngStream& rng,
                                             int grid_size = 301) {
  if (error_density.kind() == num::Dist::Kind::normal &&
      error_density.param1() == 0.0 && error_density.param2() == 1.0)
    return gfd_linear_regression(x, y, m, rng);
  if (x.cols() != 1)
    throw UnsupportedError(
        "gfd_linear_regression: non-normal errors support one regressor only "
        "(two free parameters)");
  RegressionFit fit = regression_fit(x, y);
  const int n = fit.n;
  double se = std::sqrt(fit.s2 * fit.xtx_inv_diag[0]);
  double b_lo = fit.beta_hat[0] - 10.0 * se, b_hi = fit.beta_hat[0] + 10.0 * se;
  double s_ref = std::sqrt(fit.s2);
  double s_lo = s_ref / 6.0, s_hi = s_ref * 6.0;
  const int gb = grid_size, gs = grid_size;
  std::vector<double> logw(static_cast<std::size_t>(gb) * gs, -num::kInf);
  double mx = -num::kInf;
  for (int i = 0; i < gb; ++i) {
    double beta = b_lo + (b_hi - b_lo) * i / (gb - 1.0);
    for (int j = 0; j < gs; ++j) {
      double sigma = s_lo + (s_hi - s_lo) * j / (gs - 1.0);
      double ll = -(n + 1.0) * std::log(sigma);
      for (int r = 0; r < n; ++r) {
        double u = (y[r] - x(r, 0) * beta) / sigma;
        double f = num::density(error_density, u);
        if (!(f > 0.0)) {
          ll = -num::kInf;
          break;
        }
        ll += std::log(f);
      }
      logw[static_cast<std::size_t>(i) * gs + j] = ll;
      mx = std::fmax(mx, ll);
    }
  }
  if (!std::isfinite(mx))
    throw DegenerateError("gfd_linear_regression: fiducial density vanishes on the grid");
  std::vector<double> cum(logw.size());
  double acc = 0.0;
  for (std::size_t c = 0; c < logw.size(); ++c) {
    acc += std::exp(logw[c] - mx);
    cum[c] = acc;
  }
  double db = (b_hi - b_lo) / (gb - 1.0), ds = (s_hi - s_lo) / (gs - 1.0);
  RegressionDraws out{{}, {}, fit};
  out.beta.resize(m);
  out.sigma.resize(m);
  for (int d = 0; d < m; ++d) {
    double u = rng.next_double() * acc;
    std::size_t c = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
    int i = static_cast<int>(c / gs), j = static_cast<int>(c % gs);
    double beta = b_lo + db * i + (rng.next_double() - 0.5) * db;
    double sigma = std::fmax(1e-12, s_lo + ds * j + (rng.next_double() - 0.5) * ds);
    out.beta[d] = {beta};
    out.sigma[d] = sigma;
  }
  return out;
}

}  // namespace cdist::gfd
