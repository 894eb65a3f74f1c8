#pragma once

// Fiducial model probabilities with a size penalty:
//   r(M|y) = q^{|M|} I_M / sum_{M'} q^{|M'|} I_{M'},
//   I_M = integral of likelihood * Jacobian over the model's parameters.
// Integrals run on grids for zero-, one-, and two-parameter models; the
// Gaussian location family also has closed forms used for cross-checks.

#include <cmath>
#include <string>
#include <vector>

#include "cdist/errors.hpp"
#include "cdist/gfd/density.hpp"
#include "cdist/numeric/solve.hpp"
#include "cdist/numeric/special.hpp"

namespace cdist::gfd {

struct ModelCandidate {
  std::string label;
  FidModel model;
  int size = 0;  // |M|, number of free parameters
};

// log I_M by grid integration (Simpson; tensor-product for two parameters).
inline double log_fiducial_integral(const FidModel& model,
                                    const std::vector<double>& y,
                                    int grid_size = 2001) {
  if (model.dim_theta == 0) return detail::log_weight(model, y, {});
  if (model.dim_theta > 2)
    throw UnsupportedError("log_fiducial_integral: grid mode covers p <= 2");
  if (static_cast<int>(model.theta_support.size()) < model.dim_theta)
    throw ParameterError("log_fiducial_integral: missing support box");
  auto [lo1, hi1] = model.theta_support[0];
  if (!(hi1 > lo1) || !std::isfinite(lo1) || !std::isfinite(hi1))
    throw ParameterError("log_fiducial_integral: support must be finite");
  double step1 = (hi1 - lo1) / (grid_size - 1.0);

  if (model.dim_theta == 1) {
    std::vector<double> logs(grid_size);
    double mx = -num::kInf;
    for (int i = 0; i < grid_size; ++i) {
      logs[i] = detail::log_weight(model, y, {lo1 + i * step1});
      mx = std::fmax(mx, logs[i]);
    }
    if (!std::isfinite(mx)) return -num::kInf;
    double mass = num::grid_integral(
        [&](int i) { return std::exp(logs[i] - mx); }, grid_size, step1);
    return mx + std::log(mass);
  }

  const int g2 = 401;
  auto [lo2, hi2] = model.theta_support[1];
  if (!(hi2 > lo2) || !std::isfinite(lo2) || !std::isfinite(hi2))
    throw ParameterError("log_fiducial_integral: support must be finite");
  double step2 = (hi2 - lo2) / (g2 - 1.0);
  std::vector<double> outer(grid_size, -num::kInf);
  for (int i = 0; i < grid_size; ++i) {
    std::vector<double> inner(g2);
    double mx = -num::kInf;
    for (int j = 0; j < g2; ++j) {
      inner[j] = detail::log_weight(model, y, {lo1 + i * step1, lo2 + j * step2});
      mx = std::fmax(mx, inner[j]);
    }
    if (!std::isfinite(mx)) continue;
    double mass = num::grid_integral(
        [&](int j) { return std::exp(inner[j] - mx); }, g2, step2);
    outer[i] = mx + std::log(mass);
  }
  double mx = -num::kInf;
  for (double l : outer) mx = std::fmax(mx, l);
  if (!std::isfinite(mx)) return -num::kInf;
  double mass = num::grid_integral(
      [&](int i) { return std::exp(outer[i] - mx); }, grid_size, step1);
  return mx + std::log(mass);
}

// Probabilities over the candidate list; q in (0,1] is the per-parameter
// penalty (n^{-1/2} is the usual default).
inline std::vector<double> fiducial_model_probabilities(
    const std::vector<ModelCandidate>& candidates, const std::vector<double>& y,
    double q) {
  if (candidates.empty())
    throw ParameterError("fiducial_model_probabilities: no candidates");
  if (!(q > 0.0 && q <= 1.0))
    throw ParameterError("fiducial_model_probabilities: q must be in (0,1]");
  const int n = static_cast<int>(y.size());
  std::vector<double> logs(candidates.size());
  double mx = -num::kInf;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].size > n)
      throw ParameterError("fiducial_model_probabilities: |M| exceeds n");
    logs[i] = candidates[i].size * std::log(q) +
              log_fiducial_integral(candidates[i].model, y);
    mx = std::fmax(mx, logs[i]);
  }
  if (!std::isfinite(mx))
    throw DegenerateError("fiducial_model_probabilities: all integrals vanish");
  double total = 0.0;
  std::vector<double> out(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out[i] = std::exp(logs[i] - mx);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

inline double fiducial_factor(const ModelCandidate& m1, const ModelCandidate& m2,
                              const std::vector<double>& y, double q) {
  auto p = fiducial_model_probabilities({m1, m2}, y, q);
  if (!(p[1] > 0.0)) return num::kInf;
  return p[0] / p[1];
}

// Closed forms for the Gaussian location family with known sigma.
// Free mean with the l2 Jacobian (sqrt(n)):
//   I = sqrt(n) (2 pi sigma^2)^{-n/2} exp(-S/(2 sigma^2)) sqrt(2 pi sigma^2/n)
// with S the centered sum of squares; fixed mean gives the plain likelihood.
inline double gaussian_mean_log_integral(const std::vector<double>& y,
                                         double sigma) {
  const double n = static_cast<double>(y.size());
  if (n < 1) throw InsufficientSampleError("gaussian_mean_log_integral: no data");
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  double s2 = sigma * sigma;
  return 0.5 * std::log(n) - 0.5 * n * std::log(2.0 * num::kPi * s2) -
         ss / (2.0 * s2) + 0.5 * std::log(2.0 * num::kPi * s2 / n);
}

inline double gaussian_fixed_mean_loglik(const std::vector<double>& y, double mu0,
                                         double sigma) {
  const double n = static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mu0) * (v - mu0);
  double s2 = sigma * sigma;
  return -0.5 * n * std::log(2.0 * num::kPi * s2) - ss / (2.0 * s2);
}

}  // namespace cdist::gfd
