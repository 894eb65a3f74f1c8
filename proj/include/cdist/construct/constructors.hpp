#pragma once

// CD constructors: Gaussian location (known and unknown variance), normal
// variance, bootstrap, signed-rank p-value function, normalized likelihood,
// binomial tail curves, and the Fisher-z correlation curve.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "cdist/cd/cd.hpp"
#include "cdist/errors.hpp"
#include "cdist/numeric/dist.hpp"

namespace cdist::construct {

struct SampleStats {
  double mean;
  double sd;  // with the n-1 divisor
  int n;
};

inline SampleStats sample_stats(const std::vector<double>& x) {
  if (x.empty()) throw InsufficientSampleError("sample_stats: empty sample");
  double mean = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw ParameterError("sample_stats: non-finite entry");
    mean += v;
  }
  mean /= x.size();
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  double sd = x.size() > 1 ? std::sqrt(ss / (x.size() - 1)) : 0.0;
  return {mean, sd, static_cast<int>(x.size())};
}

// H(mu) = Phi(sqrt(n) (mu - xbar) / sigma) for known sigma.
inline CD normal_mean_cd(double xbar, int n, double sigma) {
  if (n < 1) throw ParameterError("normal_mean_cd: n must be >= 1");
  if (!(sigma > 0.0)) throw ParameterError("normal_mean_cd: sigma must be > 0");
  double scale = sigma / std::sqrt(static_cast<double>(n));
  return CD([=](double mu) { return num::norm_cdf((mu - xbar) / scale); },
            Support{}, CdKind::exact, true,
            [=](double mu) { return num::norm_pdf((mu - xbar) / scale) / scale; });
}

// H(mu) = F_{t_{n-1}}(sqrt(n) (mu - xbar) / s).
inline CD t_mean_cd(const std::vector<double>& sample) {
  SampleStats st = sample_stats(sample);
  if (st.n < 2) throw InsufficientSampleError("t_mean_cd: need n >= 2");
  if (!(st.sd > 0.0)) throw DegenerateError("t_mean_cd: zero sample variance");
  num::Dist t = num::Dist::student_t(st.n - 1.0);
  double scale = st.sd / std::sqrt(static_cast<double>(st.n));
  double xbar = st.mean;
  return CD([=](double mu) { return num::cdf(t, (mu - xbar) / scale); },
            Support{}, CdKind::exact, true,
            [=](double mu) { return num::density(t, (mu - xbar) / scale) / scale; });
}

// H(v) = 1 - F_{chi2_{n-1}}((n-1) s^2 / v) on (0, inf).
inline CD variance_cd(const std::vector<double>& sample) {
  SampleStats st = sample_stats(sample);
  if (st.n < 2) throw InsufficientSampleError("variance_cd: need n >= 2");
  if (!(st.sd > 0.0)) throw DegenerateError("variance_cd: zero sample variance");
  num::Dist chi = num::Dist::chi_square(st.n - 1.0);
  double q = (st.n - 1.0) * st.sd * st.sd;
  return CD([=](double v) { return v <= 0.0 ? 0.0 : 1.0 - num::cdf(chi, q / v); },
            Support{0.0, num::kInf}, CdKind::exact, true,
            [=](double v) {
              return v <= 0.0 ? 0.0 : num::density(chi, q / v) * q / (v * v);
            });
}

enum class BootstrapVariant { reflected, raw };

// Bootstrap CD from replicate estimates. reflected: H(theta) =
// P*(theta* >= 2 theta_hat - theta); raw: H(theta) = P*(theta* <= theta).
inline CD bootstrap_cd(double theta_hat, std::vector<double> boot,
                       BootstrapVariant variant) {
  if (boot.size() < 100)
    throw InsufficientSampleError("bootstrap_cd: need at least 100 replicates");
  if (variant == BootstrapVariant::reflected)
    for (double& b : boot) b = 2.0 * theta_hat - b;
  return cd_from_draws(std::move(boot), GridCurve::Interp::step);
}

namespace detail {

// Exact tail P(W+ >= w) of the null signed-rank statistic on m untied ranks.
class SignedRankTable {
 public:
  explicit SignedRankTable(int m) : m_(m) {
    int smax = m * (m + 1) / 2;
    std::vector<double> count(smax + 1, 0.0);
    count[0] = 1.0;
    for (int i = 1; i <= m; ++i)
      for (int s = smax; s >= i; --s) count[s] += count[s - i];
    tail_.assign(smax + 2, 0.0);
    double total = std::ldexp(1.0, m);  // 2^m
    for (int s = smax; s >= 0; --s) tail_[s] = tail_[s + 1] + count[s] / total;
  }

  // P(W+ >= w); w need not be integral (tail is a step function).
  double tail(double w) const {
    int smax = static_cast<int>(tail_.size()) - 2;
    if (w <= 0.0) return 1.0;
    int iw = static_cast<int>(std::ceil(w - 1e-9));
    if (iw > smax) return 0.0;
    return tail_[iw];
  }

 private:
  int m_;
  std::vector<double> tail_;
};

struct SignedRankStat {
  double w_plus;
  int m;             // nonzero observations
  double tie_term;   // sum over tie groups of (t^3 - t)
  bool tied;
};

inline SignedRankStat signed_rank_stat(const std::vector<double>& y, double t) {
  std::vector<std::pair<double, int>> abs_dev;  // |y - t|, sign
  abs_dev.reserve(y.size());
  for (double v : y) {
    double d = v - t;
    if (d != 0.0) abs_dev.push_back({std::fabs(d), d > 0.0 ? 1 : -1});
  }
  std::sort(abs_dev.begin(), abs_dev.end());
  SignedRankStat st{0.0, static_cast<int>(abs_dev.size()), 0.0, false};
  std::size_t i = 0;
  while (i < abs_dev.size()) {
    std::size_t j = i;
    while (j < abs_dev.size() && abs_dev[j].first == abs_dev[i].first) ++j;
    double midrank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
    if (j - i > 1) {
      st.tied = true;
      double tt = static_cast<double>(j - i);
      st.tie_term += tt * tt * tt - tt;
    }
    for (std::size_t k = i; k < j; ++k)
      if (abs_dev[k].second > 0) st.w_plus += midrank;
    i = j;
  }
  return st;
}

// One-sided p-value function H(t) = P(W+ >= w_obs(t)). Exact for m <= 25
// without ties; normal approximation with continuity correction otherwise.
inline double signed_rank_p(const std::vector<double>& y, double t,
                            std::map<int, SignedRankTable>& cache) {
  SignedRankStat st = signed_rank_stat(y, t);
  if (st.m == 0) return 0.5;
  if (st.m <= 25 && !st.tied) {
    auto it = cache.find(st.m);
    if (it == cache.end()) it = cache.emplace(st.m, SignedRankTable(st.m)).first;
    return it->second.tail(st.w_plus);
  }
  double m = st.m;
  double mean = m * (m + 1.0) / 4.0;
  double var = m * (m + 1.0) * (2.0 * m + 1.0) / 24.0 - st.tie_term / 48.0;
  if (!(var > 0.0)) return st.w_plus > mean ? 0.0 : 1.0;
  // continuity correction toward the null mean, never across it
  double delta = st.w_plus - mean;
  double cc = std::copysign(std::fmin(0.5, std::fabs(delta)), delta);
  return 1.0 - num::norm_cdf((delta - cc) / std::sqrt(var));
}

}  // namespace detail

// Signed-rank location CD: the one-sided p-value function evaluated on the
// grid, isotonized, and wrapped as a grid CD.
inline CD wilcoxon_location_cd(const std::vector<double>& sample,
                               const std::vector<double>& grid) {
  if (sample.size() < 5)
    throw InsufficientSampleError("wilcoxon_location_cd: need n >= 5");
  if (grid.size() < 2)
    throw ParameterError("wilcoxon_location_cd: grid too small");
  std::map<int, detail::SignedRankTable> cache;
  std::vector<double> values;
  values.reserve(grid.size());
  for (double t : grid) values.push_back(detail::signed_rank_p(sample, t, cache));
  return cd_from_grid(GridCurve(grid, values), CdKind::asymptotic, true);
}

struct LikelihoodCd {
  CD cd;            // normalized-likelihood curve
  CD normal_approx; // Gaussian curve from the observed curvature at the max
  double theta_hat;
};

// Normalize exp(loglik) over the support; the work range expands outward on
// unbounded supports until the integrand underflows at both ends.
inline LikelihoodCd likelihood_cd(const std::function<double(double)>& loglik,
                                  Support support, int grid_size = 4097) {
  double lo = std::isfinite(support.lo) ? support.lo : -1.0;
  double hi = std::isfinite(support.hi) ? support.hi : 1.0;
  auto max_on = [&](double a, double b) {
    double best = a, best_v = -num::kInf;
    for (int i = 0; i <= 512; ++i) {
      double t = a + (b - a) * i / 512.0;
      double v = loglik(t);
      if (v > best_v) {
        best_v = v;
        best = t;
      }
    }
    return std::pair{best, best_v};
  };
  auto [theta_hat, lmax] = max_on(lo, hi);
  for (int round = 0; round < 60; ++round) {
    bool grew = false;
    double width = hi - lo;
    if (!std::isfinite(support.lo) && loglik(lo) - lmax > std::log(1e-16)) {
      lo -= width;
      grew = true;
    }
    if (!std::isfinite(support.hi) && loglik(hi) - lmax > std::log(1e-16)) {
      hi += width;
      grew = true;
    }
    if (!grew) break;
    std::tie(theta_hat, lmax) = max_on(lo, hi);
    if (round == 59)
      throw NumericError("likelihood_cd: integrand does not decay; cannot normalize");
  }

  std::vector<double> thetas(grid_size), w(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    thetas[i] = lo + (hi - lo) * i / (grid_size - 1.0);
    w[i] = std::exp(loglik(thetas[i]) - lmax);
  }
  // refine the maximizer by golden section around the scan winner
  {
    double a = std::fmax(lo, theta_hat - (hi - lo) / 256.0);
    double b = std::fmin(hi, theta_hat + (hi - lo) / 256.0);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = loglik(c), fd = loglik(d);
    for (int i = 0; i < 200 && (b - a) > 1e-12 * (1.0 + std::fabs(a)); ++i) {
      if (fc > fd) {
        b = d; d = c; fd = fc; c = b - gr * (b - a); fc = loglik(c);
      } else {
        a = c; c = d; fc = fd; d = a + gr * (b - a); fd = loglik(d);
      }
    }
    theta_hat = 0.5 * (a + b);
    lmax = loglik(theta_hat);
  }

  // cumulative integral by Simpson pairs; odd nodes via the O(h^4)
  // half-panel rule
  double step = (hi - lo) / (grid_size - 1.0);
  std::vector<double> cum(grid_size, 0.0);
  for (int i = 2; i < grid_size; i += 2) {
    cum[i - 1] = cum[i - 2] +
                 step / 12.0 * (5.0 * w[i - 2] + 8.0 * w[i - 1] - w[i]);
    cum[i] = cum[i - 2] + step / 3.0 * (w[i - 2] + 4.0 * w[i - 1] + w[i]);
  }
  if (grid_size % 2 == 0)
    cum[grid_size - 1] =
        cum[grid_size - 2] + 0.5 * step * (w[grid_size - 2] + w[grid_size - 1]);
  double total = cum[grid_size - 1];
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericError("likelihood_cd: normalizer is zero or non-finite");

  // evaluate between nodes with a local Simpson panel, so H is smooth in
  // theta rather than piecewise linear
  double shift = lmax;
  auto weight = [loglik, shift](double t) { return std::exp(loglik(t) - shift); };
  auto eval = [=](double theta) {
    if (theta <= lo) return 0.0;
    if (theta >= hi) return 1.0;
    int i = static_cast<int>((theta - lo) / step);
    double t0 = lo + i * step;
    double part = (theta - t0) / 6.0 *
                  (weight(t0) + 4.0 * weight(0.5 * (t0 + theta)) + weight(theta));
    return std::clamp((cum[i] + part) / total, 0.0, 1.0);
  };
  CD gn(eval, support, CdKind::asymptotic, true,
        [=](double t) {
          if (t < lo || t > hi) return 0.0;
          return weight(t) / total;
        });

  // observed curvature at the maximizer -> Gaussian approximation
  double h = (hi - lo) * 1e-4;
  double second = (loglik(theta_hat + h) - 2.0 * lmax + loglik(theta_hat - h)) / (h * h);
  if (!(second < 0.0))
    second = -1.0 / ((hi - lo) * (hi - lo));  // flat likelihood: wide fallback
  double sd = 1.0 / std::sqrt(-second);
  CD normal([=](double t) { return num::norm_cdf((t - theta_hat) / sd); }, support,
            CdKind::asymptotic, true,
            [=](double t) { return num::norm_pdf((t - theta_hat) / sd) / sd; });
  return {std::move(gn), std::move(normal), theta_hat};
}

enum class BinomialCdKind { upper, lower, half };

// Binomial tail curves in p for observed x out of n. upper: P_p(X > x);
// lower: P_p(X >= x); half: their average.
inline CD binomial_cd(int x, int n, BinomialCdKind kind) {
  if (n < 1 || x < 0 || x > n) throw ParameterError("binomial_cd: x out of range");
  auto tail_gt = [n](int from, double p) {  // P(X > from)
    if (from >= n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double s = 0.0;
    for (int k = from + 1; k <= n; ++k)
      s += std::exp(num::detail::binomial_log_pmf(n, p, k));
    return std::fmin(s, 1.0);
  };
  auto pmf = [n](int k, double p) {
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    return std::exp(num::detail::binomial_log_pmf(n, p, k));
  };
  CD::Eval eval;
  CdKind cd_kind = CdKind::half_corrected;
  switch (kind) {
    case BinomialCdKind::upper:
      eval = [=](double p) { return tail_gt(x, p); };
      cd_kind = CdKind::upper;
      break;
    case BinomialCdKind::lower:
      eval = [=](double p) { return tail_gt(x - 1, p); };
      cd_kind = CdKind::lower;
      break;
    case BinomialCdKind::half:
      eval = [=](double p) { return tail_gt(x, p) + 0.5 * pmf(x, p); };
      cd_kind = CdKind::half_corrected;
      break;
  }
  CD::Eval dens;
  if (kind == BinomialCdKind::half && x > 0 && x < n) {
    num::Dist b1 = num::Dist::beta(x + 1.0, static_cast<double>(n - x));
    num::Dist b2 = num::Dist::beta(static_cast<double>(x), n - x + 1.0);
    dens = [=](double p) {
      return 0.5 * num::density(b1, p) + 0.5 * num::density(b2, p);
    };
  }
  return CD(std::move(eval), Support{0.0, 1.0}, cd_kind, true, std::move(dens));
}

// Correlation CD from the Fisher-z pivot:
// H(rho) = Phi(sqrt(n-3) (atanh(rho) - atanh(r))).
inline CD fisher_z_cd(double r, int n) {
  if (n < 4) throw ParameterError("fisher_z_cd: need n >= 4");
  if (!(std::fabs(r) < 1.0)) throw ParameterError("fisher_z_cd: need |r| < 1");
  double zr = std::atanh(r);
  double sn = std::sqrt(n - 3.0);
  return CD(
      [=](double rho) {
        if (rho <= -1.0) return 0.0;
        if (rho >= 1.0) return 1.0;
        return num::norm_cdf(sn * (std::atanh(rho) - zr));
      },
      Support{-1.0, 1.0}, CdKind::asymptotic, true,
      [=](double rho) {
        if (rho <= -1.0 || rho >= 1.0) return 0.0;
        return num::norm_pdf(sn * (std::atanh(rho) - zr)) * sn /
               (1.0 - rho * rho);
      });
}

}  // namespace cdist::construct
