#pragma once

// CD combination H^c(theta) = G_c{ g_c(H^1(theta), ..., H^k(theta)) } with
// the weighted-quantile family g_c(u) = sum w_i F0^{-1}(u_i) plus the
// classical p-value rules (Fisher, Tippett min, max, sum). G_c is computed
// in closed form where one exists, otherwise by a cached Monte Carlo sample
// of g_c(U_1,...,U_k).

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "cdist/cd/cd.hpp"
#include "cdist/errors.hpp"
#include "cdist/numeric/dist.hpp"
#include "cdist/numeric/rng.hpp"

namespace cdist::fusion {

struct CombinerSpec {
  enum class Rule { quantile_combine, fisher, min_tippett, max, sum };
  enum class GcMode { analytic, monte_carlo };
  // Which tail of the inputs feeds g_c: left uses H directly, right combines
  // 1-H and flips the result. Relevant for asymmetric rules like Fisher.
  enum class Orientation { left_tail, right_tail };

  Rule rule = Rule::quantile_combine;
  num::Dist f0 = num::Dist::normal(0.0, 1.0);
  std::vector<double> weights;  // quantile_combine only; empty = equal
  GcMode gc_mode = GcMode::analytic;
  int mc_draws = 10000;
  num::RngStream mc_rng{0, 0};
  Orientation orientation = Orientation::left_tail;

  static CombinerSpec quantile(num::Dist f0, std::vector<double> w) {
    CombinerSpec s;
    s.rule = Rule::quantile_combine;
    s.f0 = std::move(f0);
    s.weights = std::move(w);
    return s;
  }
  static CombinerSpec stouffer(std::vector<double> w = {}) {
    return quantile(num::Dist::normal(0.0, 1.0), std::move(w));
  }
  static CombinerSpec fisher() {
    CombinerSpec s;
    s.rule = Rule::fisher;
    return s;
  }
  static CombinerSpec min_tippett() {
    CombinerSpec s;
    s.rule = Rule::min_tippett;
    return s;
  }
  static CombinerSpec max() {
    CombinerSpec s;
    s.rule = Rule::max;
    return s;
  }
  static CombinerSpec sum() {
    CombinerSpec s;
    s.rule = Rule::sum;
    return s;
  }

  CombinerSpec with_monte_carlo(int draws, num::RngStream rng) const {
    CombinerSpec s = *this;
    s.gc_mode = GcMode::monte_carlo;
    s.mc_draws = draws;
    s.mc_rng = rng;
    return s;
  }

  std::vector<double> resolved_weights(int k) const {
    if (weights.empty()) return std::vector<double>(k, 1.0);
    if (static_cast<int>(weights.size()) != k)
      throw ParameterError("combiner: weight count does not match study count");
    double pos = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw ParameterError("combiner: weights must be >= 0");
      pos += w;
    }
    if (!(pos > 0.0)) throw ParameterError("combiner: all weights are zero");
    return weights;
  }
};

inline constexpr double kUClamp = 1e-12;

// g_c(u_1,...,u_k) for the chosen rule.
inline double gc_apply(const std::vector<double>& u, const CombinerSpec& spec) {
  if (u.empty()) throw ParameterError("gc_apply: empty input");
  switch (spec.rule) {
    case CombinerSpec::Rule::quantile_combine: {
      auto w = spec.resolved_weights(static_cast<int>(u.size()));
      double s = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        double ui = std::clamp(u[i], kUClamp, 1.0 - kUClamp);
        if (w[i] != 0.0) s += w[i] * num::quantile(spec.f0, ui);
      }
      return s;
    }
    case CombinerSpec::Rule::fisher: {
      double s = 0.0;
      for (double ui : u) s += std::log(std::clamp(ui, kUClamp, 1.0));
      return s;
    }
    case CombinerSpec::Rule::min_tippett:
      return *std::min_element(u.begin(), u.end());
    case CombinerSpec::Rule::max:
      return *std::max_element(u.begin(), u.end());
    case CombinerSpec::Rule::sum: {
      double s = 0.0;
      for (double ui : u) s += ui;
      return s;
    }
  }
  throw ParameterError("gc_apply: unknown rule");
}

namespace detail {

inline double irwin_hall_cdf(double t, int k) {
  if (t <= 0.0) return 0.0;
  if (t >= k) return 1.0;
  double s = 0.0;
  double log_kfact = std::lgamma(k + 1.0);
  for (int j = 0; j <= static_cast<int>(t); ++j) {
    double term = std::exp(num::log_choose(k, j) + k * std::log(t - j) - log_kfact);
    s += (j % 2 ? -term : term);
  }
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace detail

// Null distribution of g_c(U_1,...,U_k). MC mode samples once and answers
// every query from the sorted cache.
class GcDistribution {
 public:
  GcDistribution(const CombinerSpec& spec, int k) : spec_(spec), k_(k) {
    if (k < 1) throw ParameterError("GcDistribution: need k >= 1");
    if (spec.gc_mode == CombinerSpec::GcMode::monte_carlo) {
      if (spec.mc_draws < 10000)
        throw ParameterError("GcDistribution: Monte Carlo needs M >= 10^4");
      sample_gc();
    } else if (!analytic_available()) {
      throw CapacityError(
          "GcDistribution: no closed form for this rule/F0; use Monte Carlo "
          "mode");
    }
  }

  double cdf(double t) const {
    if (!cache_.empty()) {
      auto it = std::upper_bound(cache_.begin(), cache_.end(), t);
      return static_cast<double>(it - cache_.begin()) / cache_.size();
    }
    return analytic_cdf(t);
  }

  // Binomial standard error of the MC cdf estimate; zero in analytic mode.
  double std_error(double t) const {
    if (cache_.empty()) return 0.0;
    double p = cdf(t);
    return std::sqrt(std::fmax(p * (1.0 - p), 1.0 / cache_.size()) /
                     cache_.size());
  }

  bool monte_carlo() const { return !cache_.empty(); }

 private:
  bool analytic_available() const {
    switch (spec_.rule) {
      case CombinerSpec::Rule::quantile_combine:
        return spec_.f0.kind() == num::Dist::Kind::normal;
      case CombinerSpec::Rule::sum:
        return k_ <= 20;  // alternating Irwin-Hall sum loses precision beyond
      default:
        return true;
    }
  }

  double analytic_cdf(double t) const {
    switch (spec_.rule) {
      case CombinerSpec::Rule::quantile_combine: {
        auto w = spec_.resolved_weights(k_);
        double sw = 0.0, sw2 = 0.0;
        for (double wi : w) {
          sw += wi;
          sw2 += wi * wi;
        }
        double mean = spec_.f0.param1() * sw;
        double sd = spec_.f0.param2() * std::sqrt(sw2);
        return num::norm_cdf((t - mean) / sd);
      }
      case CombinerSpec::Rule::fisher:
        // sum of log U_i = -chi2(2k)/2
        if (t >= 0.0) return 1.0;
        return num::inc_gamma_q(static_cast<double>(k_), -t);
      case CombinerSpec::Rule::min_tippett:
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        return 1.0 - std::pow(1.0 - t, k_);
      case CombinerSpec::Rule::max:
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        return std::pow(t, k_);
      case CombinerSpec::Rule::sum:
        return detail::irwin_hall_cdf(t, k_);
    }
    throw ParameterError("GcDistribution: unknown rule");
  }

  void sample_gc() {
    num::RngStream rng = spec_.mc_rng;
    cache_.resize(spec_.mc_draws);
    std::vector<double> u(k_);
    for (int m = 0; m < spec_.mc_draws; ++m) {
      for (int i = 0; i < k_; ++i) u[i] = rng.next_double();
      cache_[m] = gc_apply(u, spec_);
    }
    std::sort(cache_.begin(), cache_.end());
  }

  CombinerSpec spec_;
  int k_;
  std::vector<double> cache_;
};

inline double gc_cdf(double t, const CombinerSpec& spec, int k) {
  return GcDistribution(spec, k).cdf(t);
}

// Default grid: 2001 points over the union of the inputs' central
// 0.0005..0.9995 quantile ranges.
inline std::vector<double> default_combine_grid(const std::vector<CD>& cds,
                                                int size = 2001) {
  if (cds.empty()) throw ParameterError("default_combine_grid: no inputs");
  double lo = num::kInf, hi = -num::kInf;
  for (const CD& cd : cds) {
    lo = std::fmin(lo, cd_quantile(cd, 0.0005));
    hi = std::fmax(hi, cd_quantile(cd, 0.9995));
  }
  if (!(hi > lo)) {
    lo -= 1e-6;
    hi += 1e-6;
  }
  std::vector<double> grid(size);
  for (int i = 0; i < size; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / (size - 1);
  return grid;
}

// Combined CD on the supplied grid.
inline CD combine(const std::vector<CD>& cds, const CombinerSpec& spec,
                  const std::vector<double>& grid) {
  if (cds.empty()) throw ParameterError("combine: no input CDs");
  const int k = static_cast<int>(cds.size());
  for (const CD& cd : cds) {
    if (grid.front() < cd.support().lo || grid.back() > cd.support().hi)
      throw DomainError("combine: grid leaves the support of an input CD");
  }
  GcDistribution gc(spec, k);
  const bool right = spec.orientation == CombinerSpec::Orientation::right_tail;
  std::vector<double> values(grid.size());
  std::vector<double> u(k);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (int i = 0; i < k; ++i) {
      double h = cds[i](grid[g]);
      u[i] = right ? 1.0 - h : h;
    }
    double t = gc_apply(u, spec);
    double v = gc.cdf(t);
    values[g] = right ? 1.0 - v : v;
  }
  bool all_exact = std::all_of(cds.begin(), cds.end(), [](const CD& c) {
    return c.kind() == CdKind::exact;
  });
  CdKind kind = (all_exact && !gc.monte_carlo()) ? CdKind::exact
                                                 : CdKind::asymptotic;
  return cd_from_grid(GridCurve(grid, values), kind, true);
}

inline CD combine(const std::vector<CD>& cds, const CombinerSpec& spec) {
  return combine(cds, spec, default_combine_grid(cds));
}

// Weight presets. sqrt_n: w_i = sqrt(n_i). inverse_scale: w_i = 1/se_i with
// se_i read off the CD's quartile spread; on the normal F0 scale this
// reproduces inverse-variance pooling of the implied estimates.
inline std::vector<double> sqrt_n_weights(const std::vector<double>& ns) {
  std::vector<double> w;
  w.reserve(ns.size());
  for (double n : ns) {
    if (!(n > 0.0)) throw ParameterError("sqrt_n_weights: n must be > 0");
    w.push_back(std::sqrt(n));
  }
  return w;
}

inline std::vector<double> inverse_scale_weights(const std::vector<CD>& cds) {
  std::vector<double> w;
  w.reserve(cds.size());
  for (const CD& cd : cds) {
    double spread = cd_quantile(cd, 0.75) - cd_quantile(cd, 0.25);
    if (!(spread > 0.0))
      throw DegenerateError("inverse_scale_weights: degenerate input CD");
    w.push_back(1.3489795003921634 / spread);  // quartile spread of N(0,1)
  }
  return w;
}

}  // namespace cdist::fusion
