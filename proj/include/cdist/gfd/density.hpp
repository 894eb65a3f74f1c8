#pragma once

// Fiducial densities r(theta|y) proportional to likelihood times Jacobian,
// evaluated on grids in log space with a single max-shift. Grid mode covers
// one- and two-parameter models; two-parameter calls marginalize the second
// coordinate by Simpson over its support segment.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "cdist/cd/cd.hpp"
#include "cdist/errors.hpp"
#include "cdist/numeric/rng.hpp"
#include "cdist/numeric/solve.hpp"

namespace cdist::gfd {

struct FidModel {
  using Fn = std::function<double(const std::vector<double>& y,
                                  const std::vector<double>& theta)>;
  Fn loglik;
  Fn jac;  // J(y, theta) >= 0
  std::vector<std::pair<double, double>> theta_support;  // box, one per dim
  int dim_theta = 1;
  int n_obs = 0;
};

namespace detail {

inline double log_weight(const FidModel& model, const std::vector<double>& y,
                         const std::vector<double>& theta) {
  double j = model.jac(y, theta);
  if (!(j > 0.0)) return -num::kInf;
  return model.loglik(y, theta) + std::log(j);
}

}  // namespace detail

// Normalize a nonnegative grid function into a density; throws if the mass
// vanishes.
inline GridCurve normalize_density_grid(std::vector<double> thetas,
                                        std::vector<double> values) {
  int m = static_cast<int>(thetas.size());
  if (m < 3) throw ParameterError("normalize_density_grid: grid too small");
  double step = thetas[1] - thetas[0];
  double total = num::grid_integral([&](int i) { return values[i]; }, m, step);
  if (!(total > 0.0) || !std::isfinite(total))
    throw DegenerateError("density grid: zero or non-finite normalizer");
  for (double& v : values) v /= total;
  return GridCurve(std::move(thetas), std::move(values));
}

// r(theta|y) on the supplied theta grid (uniformly spaced expected).
// dim_theta == 2 yields the marginal of the first coordinate.
inline GridCurve gfd_density(const FidModel& model, const std::vector<double>& y,
                             const std::vector<double>& grid,
                             int inner_grid = 401) {
  if (model.dim_theta < 1 || model.dim_theta > 2)
    throw UnsupportedError("gfd_density: grid mode covers one or two parameters");
  if (grid.size() < 3) throw ParameterError("gfd_density: grid too small");

  std::vector<double> logs(grid.size(), -num::kInf);
  if (model.dim_theta == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      logs[i] = detail::log_weight(model, y, {grid[i]});
  } else {
    if (model.theta_support.size() < 2)
      throw ParameterError("gfd_density: missing support box for theta_2");
    auto [lo2, hi2] = model.theta_support[1];
    if (!(hi2 > lo2) || !std::isfinite(lo2) || !std::isfinite(hi2))
      throw ParameterError("gfd_density: theta_2 support must be a finite interval");
    double step2 = (hi2 - lo2) / (inner_grid - 1.0);
    std::vector<double> inner(inner_grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double mx = -num::kInf;
      for (int j = 0; j < inner_grid; ++j) {
        inner[j] = detail::log_weight(model, y, {grid[i], lo2 + j * step2});
        mx = std::fmax(mx, inner[j]);
      }
      if (!std::isfinite(mx)) continue;
      double mass = num::grid_integral(
          [&](int j) { return std::exp(inner[j] - mx); }, inner_grid, step2);
      logs[i] = mx + std::log(mass);
    }
  }
  double mx = -num::kInf;
  for (double l : logs) mx = std::fmax(mx, l);
  if (!std::isfinite(mx))
    throw DegenerateError("gfd_density: likelihood-Jacobian product vanishes");
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = std::exp(logs[i] - mx);
  return normalize_density_grid(grid, std::move(values));
}

// Monotone CD whose density is the given grid density (cumulative by
// trapezoid between nodes).
inline CD density_grid_to_cd(const GridCurve& dens, CdKind kind = CdKind::asymptotic) {
  int m = static_cast<int>(dens.size());
  std::vector<double> cum(m, 0.0);
  for (int i = 1; i < m; ++i)
    cum[i] = cum[i - 1] + 0.5 * (dens.values[i - 1] + dens.values[i]) *
                              (dens.thetas[i] - dens.thetas[i - 1]);
  double total = cum[m - 1];
  if (!(total > 0.0)) throw DegenerateError("density_grid_to_cd: zero mass");
  for (double& c : cum) c /= total;
  GridCurve h(dens.thetas, cum);
  GridCurve d = dens;
  for (double& v : d.values) v /= total;
  return CD([h](double t) { return h(t); },
            Support{dens.thetas.front(), dens.thetas.back()}, kind, true,
            [d](double t) { return d(t); });
}

// Inverse-cdf draws from a grid density.
inline std::vector<double> sample_density_grid(const GridCurve& dens,
                                               num::RngStream& rng, int m) {
  CD cd = density_grid_to_cd(dens);
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i) out[i] = cd_quantile(cd, rng.next_double());
  return out;
}

}  // namespace cdist::gfd
