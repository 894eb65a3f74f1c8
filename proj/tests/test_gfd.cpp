#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "cdist/cd/io.hpp"
#include "cdist/construct/constructors.hpp"
#include "cdist/gfd/density.hpp"
#include "cdist/gfd/discrete.hpp"
#include "cdist/gfd/jacobian.hpp"
#include "cdist/gfd/model_select.hpp"
#include "cdist/gfd/regression.hpp"
#include "cdist/gfd/uniform_irregular.hpp"
#include "oracle.hpp"

using namespace cdist;
using namespace cdist::gfd;
using num::Dist;
using num::Mat;
using num::RngStream;

TEST_CASE("jacobian functionals") {
  Mat eye = Mat::identity(2);
  CHECK(jacobian_l2(eye) == Catch::Approx(1.0).margin(1e-12));
  CHECK(jacobian_linf(eye) == Catch::Approx(1.0).margin(1e-12));

  Mat col(2, 1);
  col(0, 0) = 3.0;
  col(1, 0) = 4.0;
  CHECK(jacobian_l2(col) == Catch::Approx(5.0).margin(1e-12));
  CHECK(jacobian_linf(col) == Catch::Approx(7.0).margin(1e-12));

  // duplicate columns: rank deficient
  Mat dup(3, 2);
  for (int i = 0; i < 3; ++i) {
    dup(i, 0) = i + 1.0;
    dup(i, 1) = i + 1.0;
  }
  CHECK(jacobian_l2(dup) == 0.0);

  // n = p: both reduce to |det|
  Mat sq(2, 2);
  sq(0, 0) = 2.0; sq(0, 1) = 1.0;
  sq(1, 0) = -1.0; sq(1, 1) = 3.0;
  double d = std::fabs(num::det(sq));
  CHECK(jacobian_l2(sq) == Catch::Approx(d).margin(1e-12));
  CHECK(jacobian_linf(sq) == Catch::Approx(d).margin(1e-12));

  // p = 1: sum of absolute entries
  Mat v(4, 1);
  v(0, 0) = 1.0; v(1, 0) = -2.0; v(2, 0) = 0.5; v(3, 0) = -0.5;
  CHECK(jacobian_linf(v) == Catch::Approx(4.0).margin(1e-12));

  // enumeration cap: C(60, 5) > 10^6
  Mat big(60, 5);
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 5; ++j) big(i, j) = std::sin(i + 3.0 * j);
  CHECK_THROWS_AS(jacobian_linf(big), CapacityError);
  CHECK_NOTHROW(jacobian_l2(big));

  Mat wide(1, 2);
  CHECK_THROWS_AS(jacobian_l2(wide), ParameterError);
}

TEST_CASE("fiducial density on a grid") {
  // flat likelihood and Jacobian on [0,1] -> uniform density
  FidModel flat{[](const std::vector<double>&, const std::vector<double>&) { return 0.0; },
                [](const std::vector<double>&, const std::vector<double>&) { return 1.0; },
                {{0.0, 1.0}},
                1,
                1};
  auto grid = linspace(0.0, 1.0, 501);
  GridCurve dens = gfd_density(flat, {0.5}, grid);
  for (std::size_t i = 0; i < grid.size(); i += 50)
    CHECK(dens.values[i] == Catch::Approx(1.0).epsilon(0).margin(1e-9));

  // single normal observation, J constant -> N(y, 1) density
  FidModel norm{[](const std::vector<double>& y, const std::vector<double>& t) {
                  double d = y[0] - t[0];
                  return -0.5 * d * d;
                },
                [](const std::vector<double>&, const std::vector<double>&) { return 1.0; },
                {{-6.0, 8.0}},
                1,
                1};
  auto ngrid = linspace(-6.0, 8.0, 4001);
  GridCurve ndens = gfd_density(norm, {1.0}, ngrid);
  for (std::size_t i : {500u, 1700u, 2000u, 2600u, 3300u})
    CHECK(ndens.values[i] ==
          Catch::Approx(num::norm_pdf(ngrid[i] - 1.0)).epsilon(0).margin(1e-8));

  // density integrates to one on the grid
  double step = ngrid[1] - ngrid[0];
  double mass = num::grid_integral([&](int i) { return ndens.values[i]; },
                                   static_cast<int>(ngrid.size()), step);
  CHECK(mass == Catch::Approx(1.0).epsilon(0).margin(1e-6));

  // two-parameter marginal: independent bivariate normal factorizes
  FidModel biv{[](const std::vector<double>& y, const std::vector<double>& t) {
                 double d1 = y[0] - t[0], d2 = y[1] - t[1];
                 return -0.5 * (d1 * d1 + d2 * d2);
               },
               [](const std::vector<double>&, const std::vector<double>&) { return 1.0; },
               {{-5.0, 5.0}, {-5.0, 5.0}},
               2,
               2};
  GridCurve marg = gfd_density(biv, {0.0, 1.0}, linspace(-5.0, 5.0, 2001));
  for (double t : {-0.7, 0.0, 1.2})
    CHECK(marg(t) == Catch::Approx(num::norm_pdf(t)).epsilon(0).margin(1e-6));

  FidModel vanish = flat;
  vanish.jac = [](const std::vector<double>&, const std::vector<double>&) { return 0.0; };
  CHECK_THROWS_AS(gfd_density(vanish, {0.5}, grid), DegenerateError);
}

TEST_CASE("regression fiducial sampler, normal errors") {
  // intercept-only design: the beta marginal is the t location CD
  RngStream data_rng(31, 0);
  auto y = num::sample(Dist::normal(2.0, 1.5), data_rng, 20);
  Mat x(20, 1);
  for (int i = 0; i < 20; ++i) x(i, 0) = 1.0;

  RngStream rng(31, 1);
  RegressionDraws draws = gfd_linear_regression(x, y, 20000, rng);
  CD marg = draws.marginal_beta_cd(0);
  std::vector<double> b0;
  b0.reserve(draws.beta.size());
  for (const auto& b : draws.beta) b0.push_back(b[0]);
  CHECK(oracle::ks_statistic(b0, [&](double v) { return marg(v); }) < 0.02);

  // the marginal CD is the classical t interval, endpoint for endpoint
  construct::SampleStats st = construct::sample_stats(y);
  CD tcd = construct::t_mean_cd(y);
  CInterval fid = interval(marg, 0.95);
  CInterval cls = interval(tcd, 0.95);
  CHECK(fid.lower == Catch::Approx(cls.lower).epsilon(0).margin(1e-9));
  CHECK(fid.upper == Catch::Approx(cls.upper).epsilon(0).margin(1e-9));
  CHECK(st.n == 20);

  // two-regressor design still samples and recovers the truth roughly
  RngStream rng2(31, 2);
  Mat x2(40, 2);
  std::vector<double> y2(40);
  for (int i = 0; i < 40; ++i) {
    x2(i, 0) = 1.0;
    x2(i, 1) = i / 10.0;
    y2[i] = 1.0 + 0.5 * x2(i, 1) + num::sample_one(Dist::normal(0.0, 0.3), rng2);
  }
  RegressionDraws d2 = gfd_linear_regression(x2, y2, 5000, rng2);
  CInterval slope = interval(d2.marginal_beta_cd(1), 0.95);
  CHECK(slope.contains(0.5));

  // constant response leaves no residual scale
  Mat x3(5, 1);
  for (int i = 0; i < 5; ++i) x3(i, 0) = 1.0;
  CHECK_THROWS_AS(regression_fit(x3, std::vector<double>(5, 3.0)), DegenerateError);
}

TEST_CASE("regression grid sampler approaches the conjugate route") {
  RngStream data_rng(77, 0);
  auto y = num::sample(Dist::normal(0.5, 1.0), data_rng, 15);
  Mat x(15, 1);
  for (int i = 0; i < 15; ++i) x(i, 0) = 1.0;

  // heavy grid route with a nearly-normal error density
  RngStream rng_a(77, 1), rng_b(77, 2);
  RegressionDraws grid_draws =
      gfd_linear_regression(x, y, Dist::student_t(200.0), 20000, rng_a);
  RegressionDraws exact_draws = gfd_linear_regression(x, y, 20000, rng_b);
  std::vector<double> ga, gb;
  for (const auto& b : grid_draws.beta) ga.push_back(b[0]);
  for (const auto& b : exact_draws.beta) gb.push_back(b[0]);
  CHECK(oracle::ks_two_sample(ga, gb) < 0.03);

  CHECK_THROWS_AS(gfd_linear_regression(Mat(4, 2), std::vector<double>(4, 0.0),
                                        Dist::uniform(-1, 1), 100, rng_a),
                  UnsupportedError);
}

TEST_CASE("irregular uniform fiducial density") {
  AffineUniformModel model = u_theta_squared_model();
  // simulated U(theta0, theta0^2) data
  const double theta0 = 5.0;
  RngStream rng(55, 0);
  std::vector<double> y;
  for (int i = 0; i < 10; ++i)
    y.push_back(theta0 + (theta0 * theta0 - theta0) * rng.next_double());
  double y1 = *std::min_element(y.begin(), y.end());
  double yn = *std::max_element(y.begin(), y.end());

  auto grid = linspace(std::sqrt(yn) * 0.98, y1 * 1.02, 4001);
  GridCurve r1 = gfd_uniform_irregular(model, y, IrregularVariant::r1, grid);
  // support of the density is exactly (sqrt(y_(n)), y_(1))
  for (std::size_t i = 0; i < grid.size(); i += 100) {
    bool feasible = grid[i] > std::sqrt(yn) && grid[i] < y1;
    if (feasible)
      CHECK(r1.values[i] > 0.0);
    else
      CHECK(r1.values[i] == 0.0);
  }

  // n = 1 reduces to the single-observation weight
  std::vector<double> one = {y[0]};
  auto grid1 = linspace(std::sqrt(y[0]) * 0.98, y[0] * 1.02, 2001);
  GridCurve r1_one = gfd_uniform_irregular(model, one, IrregularVariant::r1, grid1);
  // direct formula: [a' + (y - a)(b'/b)] / b on the feasible set, normalized
  std::vector<double> direct(grid1.size(), 0.0);
  for (std::size_t i = 0; i < grid1.size(); ++i) {
    double t = grid1[i];
    double a = model.a(t), b = model.b(t);
    if (!(a - b < y[0] && a + b > y[0]) || !(b > 0.0)) continue;
    direct[i] = (model.a_prime(t) + (y[0] - a) * model.b_prime(t) / b) / b;
  }
  GridCurve direct_norm = normalize_density_grid(grid1, direct);
  for (std::size_t i = 0; i < grid1.size(); i += 200)
    CHECK(r1_one.values[i] ==
          Catch::Approx(direct_norm.values[i]).epsilon(0).margin(1e-9));

  // r2 exists and is a proper density over the same support
  GridCurve r2 = gfd_uniform_irregular(model, y, IrregularVariant::r2, grid);
  double step = grid[1] - grid[0];
  double mass = num::grid_integral([&](int i) { return r2.values[i]; },
                                   static_cast<int>(grid.size()), step);
  CHECK(mass == Catch::Approx(1.0).epsilon(0).margin(1e-6));

  // infeasible data: min < theta support floor
  CHECK_THROWS_AS(gfd_uniform_irregular(model, {0.5}, IrregularVariant::r1,
                                        linspace(1.01, 2.0, 101)),
                  DegenerateError);
}

TEST_CASE("reparameterization invariance of the irregular model") {
  // eta = theta^2 (monotone); the pushforward of theta-draws matches the
  // density computed directly in the eta parameterization
  AffineUniformModel theta_model = u_theta_squared_model();
  AffineUniformModel eta_model{
      [&](double e) { return theta_model.a(std::sqrt(e)); },
      [&](double e) { return theta_model.a_prime(std::sqrt(e)) / (2.0 * std::sqrt(e)); },
      [&](double e) { return theta_model.b(std::sqrt(e)); },
      [&](double e) { return theta_model.b_prime(std::sqrt(e)) / (2.0 * std::sqrt(e)); },
      Support{1.0 + 1e-9, num::kInf}};

  const double theta0 = 3.0;
  RngStream rng(88, 0);
  std::vector<double> y;
  for (int i = 0; i < 8; ++i)
    y.push_back(theta0 + (theta0 * theta0 - theta0) * rng.next_double());
  double y1 = *std::min_element(y.begin(), y.end());
  double yn = *std::max_element(y.begin(), y.end());

  auto tgrid = linspace(std::sqrt(yn) - 0.05, y1 + 0.05, 4001);
  GridCurve tdens = gfd_uniform_irregular(theta_model, y, IrregularVariant::r1, tgrid);
  auto egrid = linspace(yn - 0.05, y1 * y1 + 0.05, 4001);
  GridCurve edens = gfd_uniform_irregular(eta_model, y, IrregularVariant::r1, egrid);

  RngStream draw_rng(88, 1);
  auto tdraws = sample_density_grid(tdens, draw_rng, 10000);
  for (double& t : tdraws) t = t * t;  // push forward through eta = theta^2
  RngStream draw_rng2(88, 2);
  auto edraws = sample_density_grid(edens, draw_rng2, 10000);
  CHECK(oracle::ks_two_sample(tdraws, edraws) < 0.03);
}

TEST_CASE("comparison prior for the irregular model") {
  CHECK(reference_prior_u_theta(2.0) ==
        Catch::Approx(1.5 * std::exp(num::digamma(4.0 / 3.0))).epsilon(0).margin(1e-12));
  for (double t : {1.01, 1.5, 3.0, 20.0, 500.0})
    CHECK(reference_prior_u_theta(t) > 0.0);
  CHECK_THROWS_AS(reference_prior_u_theta(1.0), DomainError);
  CHECK_THROWS_AS(reference_prior_u_theta(0.3), DomainError);

  // flat-prior posterior is a proper density on the feasible set
  std::vector<double> y = {6.1, 8.4, 12.0, 17.5};
  auto grid = linspace(std::sqrt(17.5) - 0.05, 6.1 + 0.05, 2001);
  GridCurve post = u_theta_squared_posterior(y, [](double) { return 1.0; }, grid);
  double step = grid[1] - grid[0];
  double mass = num::grid_integral([&](int i) { return post.values[i]; },
                                   static_cast<int>(grid.size()), step);
  CHECK(mass == Catch::Approx(1.0).epsilon(0).margin(1e-6));
}

TEST_CASE("half-corrected discrete families") {
  // binomial x=0: mixture of Beta(1,10) with a point mass at 0
  DiscreteGfd b0 = gfd_discrete_binomial(0, 10);
  CHECK(b0.cd(0.0) == Catch::Approx(0.5).margin(1e-12));
  CHECK(b0.lower_comp.point_mass());

  // agreement with the binomial tail construction
  for (int x : {0, 3, 10}) {
    DiscreteGfd g = gfd_discrete_binomial(x, 10);
    CD tail = construct::binomial_cd(x, 10, construct::BinomialCdKind::half);
    for (double p : linspace(0.001, 0.999, 199))
      CHECK(g.cd(p) == Catch::Approx(tail(p)).epsilon(0).margin(1e-10));
  }

  // poisson x=0: mixture of Exp(1) and a point mass at 0
  DiscreteGfd p0 = gfd_discrete_poisson(0);
  CHECK(p0.cd(0.0) == Catch::Approx(0.5).margin(1e-12));
  CHECK(p0.cd(1.0) == Catch::Approx(0.5 * (1.0 - std::exp(-1.0)) + 0.5).margin(1e-12));

  // neg binomial x=r: the lower component sits at 1
  DiscreteGfd nb = gfd_discrete_neg_binomial(3, 3);
  CHECK(nb.lower_comp.point_mass());
  CHECK(nb.cd(0.999999) == Catch::Approx(0.5).margin(1e-3));

  // mixture sampling stays inside the support and follows the cd
  RngStream rng(14, 0);
  DiscreteGfd g = gfd_discrete_binomial(4, 12);
  std::vector<double> draws(5000);
  for (auto& d : draws) d = g.sample(rng);
  CHECK(oracle::ks_statistic(draws, [&](double t) { return g.cd(t); }) < 0.03);

  CHECK_THROWS_AS(gfd_discrete_binomial(11, 10), ParameterError);
  CHECK_THROWS_AS(gfd_discrete_neg_binomial(2, 3), ParameterError);
}

TEST_CASE("fiducial model probabilities") {
  std::vector<double> y = {0.3, -0.5, 1.2, 0.1, -0.9, 0.4};
  const int n = static_cast<int>(y.size());
  auto loglik_free = [](const std::vector<double>& data, const std::vector<double>& t) {
    double s = 0.0;
    for (double v : data) s += -0.5 * (v - t[0]) * (v - t[0]);
    return s - 0.5 * data.size() * std::log(2.0 * num::kPi);
  };
  double sqrt_n = std::sqrt(static_cast<double>(n));
  FidModel free{loglik_free,
                [sqrt_n](const std::vector<double>&, const std::vector<double>&) {
                  return sqrt_n;
                },
                {{-10.0, 10.0}},
                1,
                n};
  FidModel fixed{[](const std::vector<double>& data, const std::vector<double>&) {
                   double s = 0.0;
                   for (double v : data) s += -0.5 * v * v;
                   return s - 0.5 * data.size() * std::log(2.0 * num::kPi);
                 },
                 [](const std::vector<double>&, const std::vector<double>&) {
                   return 1.0;
                 },
                 {},
                 0,
                 n};

  // single candidate gets probability one; identical candidates split evenly
  auto solo = fiducial_model_probabilities({{"m", free, 1}}, y, 0.5);
  CHECK(solo[0] == 1.0);
  auto twin = fiducial_model_probabilities({{"a", free, 1}, {"b", free, 1}}, y, 0.5);
  CHECK(twin[0] == Catch::Approx(0.5).margin(1e-12));

  // grid integral agrees with the closed form
  CHECK(log_fiducial_integral(free, y) ==
        Catch::Approx(gaussian_mean_log_integral(y, 1.0)).epsilon(0).margin(1e-8));
  CHECK(log_fiducial_integral(fixed, y) ==
        Catch::Approx(gaussian_fixed_mean_loglik(y, 0.0, 1.0)).epsilon(0).margin(1e-12));

  // scale consistency: shifting every log-likelihood by a constant is a no-op
  FidModel free_shift = free;
  free_shift.loglik = [loglik_free](const std::vector<double>& d,
                                    const std::vector<double>& t) {
    return loglik_free(d, t) + 7.0;
  };
  FidModel fixed_shift = fixed;
  auto fixed_ll = fixed.loglik;
  fixed_shift.loglik = [fixed_ll](const std::vector<double>& d,
                                  const std::vector<double>& t) {
    return fixed_ll(d, t) + 7.0;
  };
  auto p1 = fiducial_model_probabilities({{"f", fixed, 0}, {"g", free, 1}}, y, 0.4);
  auto p2 = fiducial_model_probabilities(
      {{"f", fixed_shift, 0}, {"g", free_shift, 1}}, y, 0.4);
  CHECK(p1[0] == Catch::Approx(p2[0]).epsilon(0).margin(1e-12));

  CHECK_THROWS_AS(fiducial_model_probabilities({{"m", free, 1}}, y, 1.5),
                  ParameterError);
}

TEST_CASE("nested Gaussian model selection favors the true null") {
  // data at mu = 0, n = 50, penalty q = n^{-1/2}: the fixed-mean model should
  // win a clear majority of replications
  const int n = 50, reps = 200;
  const double q = 1.0 / std::sqrt(static_cast<double>(n));
  RngStream rng(4242, 0);
  int null_wins = 0;
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(r);
    auto y = num::sample(Dist::normal(0.0, 1.0), sub, n);
    double log_i_free = gaussian_mean_log_integral(y, 1.0);
    double log_i_fixed = gaussian_fixed_mean_loglik(y, 0.0, 1.0);
    double r_null = 1.0 / (1.0 + std::exp(std::log(q) + log_i_free - log_i_fixed));
    if (r_null > 0.5) ++null_wins;
  }
  CHECK(null_wins >= 0.8 * reps);
}
