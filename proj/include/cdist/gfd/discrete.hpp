#pragma once

// Half-corrected fiducial distributions for the classical discrete families,
// represented as equal mixtures of two conjugate-type components; boundary
// observations make one component a declared point mass.
//
//   binomial(m), observed x:  Beta(x+1, m-x)  and  Beta(x, m-x+1)
//   poisson, observed x:      Gamma(x+1, 1)   and  Gamma(x, 1)
//   neg binomial(r), trials x: Beta(r, x-r+1) and  Beta(r, x-r)

#include <utility>

#include "cdist/cd/cd.hpp"
#include "cdist/errors.hpp"
#include "cdist/numeric/dist.hpp"
#include "cdist/numeric/rng.hpp"

namespace cdist::gfd {

struct DiscreteGfd {
  num::Dist upper_comp;  // the (x+1)-style component
  num::Dist lower_comp;  // the x-style component, point mass at boundaries
  CD cd;

  double sample(num::RngStream& rng) const {
    const num::Dist& pick = rng.next_double() < 0.5 ? upper_comp : lower_comp;
    return num::sample_one(pick, rng);
  }
};

namespace detail {

inline DiscreteGfd make_mixture(num::Dist upper, num::Dist lower, Support support) {
  auto u = upper, l = lower;
  CD::Eval eval = [u, l](double t) {
    return 0.5 * num::cdf(u, t) + 0.5 * num::cdf(l, t);
  };
  CD::Eval dens;
  if (!upper.point_mass() && !lower.point_mass()) {
    dens = [u, l](double t) {
      return 0.5 * num::density(u, t) + 0.5 * num::density(l, t);
    };
  }
  return {std::move(upper), std::move(lower),
          CD(std::move(eval), support, CdKind::half_corrected, true, std::move(dens))};
}

}  // namespace detail

inline DiscreteGfd gfd_discrete_binomial(int x, int m) {
  if (m < 1 || x < 0 || x > m)
    throw ParameterError("gfd_discrete_binomial: x out of range");
  num::Dist upper = num::Dist::beta(x + 1.0, static_cast<double>(m - x));
  num::Dist lower = num::Dist::beta(static_cast<double>(x), m - x + 1.0);
  return detail::make_mixture(std::move(upper), std::move(lower), Support{0.0, 1.0});
}

inline DiscreteGfd gfd_discrete_poisson(int x) {
  if (x < 0) throw ParameterError("gfd_discrete_poisson: x must be >= 0");
  num::Dist upper = num::Dist::gamma(x + 1.0, 1.0);
  num::Dist lower = num::Dist::gamma(static_cast<double>(x), 1.0);
  return detail::make_mixture(std::move(upper), std::move(lower),
                              Support{0.0, num::kInf});
}

inline DiscreteGfd gfd_discrete_neg_binomial(int x, int r) {
  if (r < 1 || x < r)
    throw ParameterError("gfd_discrete_neg_binomial: needs x >= r >= 1");
  num::Dist upper = num::Dist::beta(static_cast<double>(r), x - r + 1.0);
  num::Dist lower = num::Dist::beta(static_cast<double>(r), static_cast<double>(x - r));
  return detail::make_mixture(std::move(upper), std::move(lower), Support{0.0, 1.0});
}

}  // namespace cdist::gfd
