#pragma once

// Two-parameter exponential model Exp(mu, sigma): Type-II censored fit,
// exact CDs for mu and sigma from the chi-square pivots
//   U = 2n(mu_hat - mu)/sigma ~ chi2(2),  V = 2k sigma_hat/sigma ~ chi2(2k-2),
// joint draws on (mu, sigma), and Monte Carlo survival bands.
//
// The F-pivot for mu is (U/2)/(V/(2k-2)) = (k-1) n (mu_hat - mu)/(k sigma_hat),
// so the mu-CD carries the (k-1) factor; dropping it breaks exactness, which
// the uniformity tests would catch.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cdist/cd/cd.hpp"
#include "cdist/errors.hpp"
#include "cdist/numeric/dist.hpp"
#include "cdist/numeric/rng.hpp"

namespace cdist::construct {

struct Exp2Fit {
  double mu_hat;
  double sigma_hat;
  int n;
  int k;  // number of smallest order statistics observed
};

inline Exp2Fit exp2_fit(std::vector<double> sample, int k) {
  int n = static_cast<int>(sample.size());
  if (k <= 1 || k > n) throw ParameterError("exp2_fit: need 1 < k <= n");
  std::sort(sample.begin(), sample.end());
  double mu_hat = sample[0];
  double acc = 0.0;
  for (int i = 0; i < k; ++i) acc += sample[i];
  acc += (n - k) * sample[k - 1] - n * mu_hat;
  double sigma_hat = acc / k;
  if (!(sigma_hat > 0.0))
    throw DegenerateError("exp2_fit: first k order statistics are all equal");
  return {mu_hat, sigma_hat, n, k};
}

// Exact CDs: H1(mu) = 1 - F_{F(2,2k-2)}((k-1) n (mu_hat-mu)/(k sigma_hat)) on
// (-inf, mu_hat]; H2(sigma) = 1 - F_{chi2(2k-2)}(2 k sigma_hat/sigma) on (0, inf).
inline std::pair<CD, CD> exp2_cds(const Exp2Fit& fit) {
  const double mu_hat = fit.mu_hat, sigma_hat = fit.sigma_hat;
  const double n = fit.n, k = fit.k;
  num::Dist fdist = num::Dist::fisher_f(2.0, 2.0 * k - 2.0);
  const double slope = (k - 1.0) * n / (k * sigma_hat);
  CD mu_cd(
      [=](double mu) {
        if (mu >= mu_hat) return 1.0;
        return 1.0 - num::cdf(fdist, slope * (mu_hat - mu));
      },
      Support{-num::kInf, mu_hat}, CdKind::exact, true,
      [=](double mu) {
        if (mu >= mu_hat) return 0.0;
        return num::density(fdist, slope * (mu_hat - mu)) * slope;
      });
  num::Dist chi = num::Dist::chi_square(2.0 * k - 2.0);
  const double q = 2.0 * k * sigma_hat;
  CD sigma_cd(
      [=](double sigma) {
        if (sigma <= 0.0) return 0.0;
        return 1.0 - num::cdf(chi, q / sigma);
      },
      Support{0.0, num::kInf}, CdKind::exact, true,
      [=](double sigma) {
        if (sigma <= 0.0) return 0.0;
        return num::density(chi, q / sigma) * q / (sigma * sigma);
      });
  return {std::move(mu_cd), std::move(sigma_cd)};
}

struct JointExpDraws {
  std::vector<double> xi;    // draws on mu
  std::vector<double> zeta;  // draws on sigma, all positive
  Exp2Fit fit;
};

// xi = mu_hat - (k sigma_hat / n)(U*/V*), zeta = 2 k sigma_hat / V* with
// U* ~ chi2(2), V* ~ chi2(2k-2) independent; marginals follow the two CDs.
inline JointExpDraws exp2_joint_draws(const Exp2Fit& fit, int m,
                                      num::RngStream& rng) {
  if (m < 100) throw InsufficientSampleError("exp2_joint_draws: need M >= 100");
  num::Dist u_dist = num::Dist::chi_square(2.0);
  num::Dist v_dist = num::Dist::chi_square(2.0 * fit.k - 2.0);
  JointExpDraws out{{}, {}, fit};
  out.xi.resize(m);
  out.zeta.resize(m);
  const double c = fit.k * fit.sigma_hat / fit.n;
  const double q = 2.0 * fit.k * fit.sigma_hat;
  for (int j = 0; j < m; ++j) {
    double u = num::sample_one(u_dist, rng);
    double v = num::sample_one(v_dist, rng);
    out.xi[j] = fit.mu_hat - c * u / v;
    out.zeta[j] = q / v;
  }
  return out;
}

enum class BandSide { lower, two };

struct SurvivalBand {
  std::vector<double> t;
  std::vector<double> lo;
  std::vector<double> hi;
  double level;
  BandSide side;
};

namespace detail {

// Nearest-rank empirical quantile on sorted values: the ceil(q m)-th order
// statistic.
inline double nearest_rank(const std::vector<double>& sorted, double q) {
  int m = static_cast<int>(sorted.size());
  int idx = static_cast<int>(std::ceil(q * m));
  idx = std::clamp(idx, 1, m);
  return sorted[idx - 1];
}

}  // namespace detail

// Pointwise band for S(t) from the survival curves kappa_j(t) =
// min(1, exp(-(t - xi_j)/zeta_j)).
inline SurvivalBand exp2_survival_band(const JointExpDraws& draws,
                                       const std::vector<double>& tgrid,
                                       double level, BandSide side) {
  if (tgrid.empty()) throw ParameterError("exp2_survival_band: empty time grid");
  if (!(level > 0.0 && level < 1.0))
    throw RangeError("exp2_survival_band: level outside (0,1)");
  const double alpha = 1.0 - level;
  SurvivalBand band{tgrid, {}, {}, level, side};
  band.lo.reserve(tgrid.size());
  band.hi.reserve(tgrid.size());
  std::vector<double> kappa(draws.xi.size());
  for (double t : tgrid) {
    if (!(t > 0.0)) throw ParameterError("exp2_survival_band: t must be > 0");
    for (std::size_t j = 0; j < draws.xi.size(); ++j)
      kappa[j] = std::fmin(1.0, std::exp(-(t - draws.xi[j]) / draws.zeta[j]));
    std::sort(kappa.begin(), kappa.end());
    if (side == BandSide::lower) {
      band.lo.push_back(detail::nearest_rank(kappa, alpha));
      band.hi.push_back(1.0);
    } else {
      band.lo.push_back(detail::nearest_rank(kappa, 0.5 * alpha));
      band.hi.push_back(detail::nearest_rank(kappa, 1.0 - 0.5 * alpha));
    }
  }
  return band;
}

// Plug-in survival curve S(t; mu, sigma) for reference lines.
inline double exp2_survival(double t, double mu, double sigma) {
  if (t <= mu) return 1.0;
  return std::exp(-(t - mu) / sigma);
}

}  // namespace cdist::construct
