#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cdist/numeric/dist.hpp"
#include "oracle.hpp"

using namespace cdist::num;

namespace {

std::vector<Dist> continuous_catalog() {
  return {Dist::normal(0.0, 1.0),   Dist::normal(2.0, 3.0),
          Dist::student_t(5.0),     Dist::student_t(18.0),
          Dist::chi_square(2.0),    Dist::chi_square(10.0),
          Dist::fisher_f(2.0, 36.0), Dist::fisher_f(5.0, 7.0),
          Dist::beta(2.0, 3.0),     Dist::beta(0.5, 0.5),
          Dist::gamma(1.0, 1.0),    Dist::gamma(4.5, 2.0),
          Dist::uniform(0.0, 1.0),  Dist::uniform(-3.0, 5.0)};
}

}  // namespace

TEST_CASE("cdf point checks") {
  CHECK(cdf(Dist::normal(0, 1), 0.0) == 0.5);
  // chi2(2) closed form 1 - exp(-x/2)
  CHECK(cdf(Dist::chi_square(2), 1.3863) ==
        Catch::Approx(1.0 - std::exp(-0.69315)).epsilon(0).margin(1e-6));
  CHECK(cdf(Dist::chi_square(2), 1.3863) == Catch::Approx(0.5).margin(1e-4));
  // degenerate beta kinds are point masses
  CHECK(cdf(Dist::beta(0.0, 5.0), 0.0) == 1.0);
  CHECK(cdf(Dist::beta(0.0, 5.0), -1e-9) == 0.0);
  CHECK(cdf(Dist::beta(5.0, 0.0), 0.999999) == 0.0);
  CHECK(cdf(Dist::beta(5.0, 0.0), 1.0) == 1.0);
  CHECK(cdf(Dist::gamma(0.0, 2.0), 0.0) == 1.0);
  CHECK_THROWS_AS(Dist::normal(0.0, 0.0), cdist::ParameterError);
  CHECK_THROWS_AS(Dist::uniform(1.0, 1.0), cdist::ParameterError);
  CHECK_THROWS_AS(Dist::beta(-1.0, 2.0), cdist::ParameterError);
}

TEST_CASE("cdf is nondecreasing on a support grid for every kind") {
  auto kinds = continuous_catalog();
  kinds.push_back(Dist::binomial(10, 0.3));
  kinds.push_back(Dist::poisson(4.0));
  kinds.push_back(Dist::neg_binomial(3, 0.4));
  kinds.push_back(Dist::beta(0.0, 5.0));
  for (const auto& d : kinds) {
    double lo = std::isfinite(d.support_lo()) ? d.support_lo() - 1.0 : -30.0;
    double hi = std::isfinite(d.support_hi()) ? d.support_hi() + 1.0 : 80.0;
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      double x = lo + (hi - lo) * i / 1000.0;
      double f = cdf(d, x);
      REQUIRE(f >= prev - 1e-12);
      REQUIRE(f >= 0.0);
      REQUIRE(f <= 1.0);
      prev = f;
    }
  }
}

TEST_CASE("quantile round trip on a probability grid") {
  for (const auto& d : continuous_catalog()) {
    for (int i = 1; i <= 99; ++i) {
      double p = i / 100.0;
      double q = quantile(d, p);
      REQUIRE(cdf(d, q) == Catch::Approx(p).epsilon(0).margin(1e-9));
    }
  }
}

TEST_CASE("quantile point checks") {
  CHECK(quantile(Dist::normal(0, 1), 0.975) ==
        Catch::Approx(1.959964).epsilon(0).margin(1e-6));
  CHECK(quantile(Dist::uniform(0, 1), 0.3) == Catch::Approx(0.3).margin(1e-12));
  CHECK(quantile(Dist::student_t(18), 0.5) == Catch::Approx(0.0).margin(1e-9));
  // reference values from quadrature + bisection
  CHECK(quantile(Dist::chi_square(10), 0.5) ==
        Catch::Approx(oracle::chi_square_quantile(10, 0.5)).epsilon(0).margin(1e-7));
  CHECK(quantile(Dist::student_t(19), 0.975) ==
        Catch::Approx(oracle::student_t_quantile(19, 0.975)).epsilon(0).margin(1e-7));
  CHECK_THROWS_AS(quantile(Dist::normal(0, 1), 1.2), cdist::RangeError);
  // discrete: left-continuous generalized inverse accepts the closed range
  CHECK(quantile(Dist::binomial(10, 0.5), 0.0) == 0.0);
  CHECK(quantile(Dist::binomial(10, 0.5), 1.0) == 10.0);
  CHECK(quantile(Dist::binomial(10, 0.5), 0.5) == 5.0);
  CHECK(std::isinf(quantile(Dist::poisson(3.0), 1.0)));
}

TEST_CASE("density point checks and normalization") {
  CHECK(density(Dist::uniform(-1, 1), 0.0) == 0.5);
  CHECK(density(Dist::binomial(1, 0.5), 1.0) == Catch::Approx(0.5).margin(1e-12));
  CHECK(density(Dist::gamma(1.0, 1.0), 0.0) == Catch::Approx(1.0).margin(1e-12));
  for (const auto& d : continuous_catalog()) {
    double mass;
    if (d.kind() == Dist::Kind::beta) {
      // substitute x = sin^2(u) so endpoint singularities integrate cleanly
      mass = oracle::integrate(
          [&](double u) {
            double s = std::sin(u), c = std::cos(u);
            return density(d, s * s) * 2.0 * s * c;
          },
          1e-7, std::asin(1.0) - 1e-7, 8192);
    } else {
      double lo = std::isfinite(d.support_lo()) ? d.support_lo() : quantile(d, 1e-9);
      double hi = std::isfinite(d.support_hi()) ? d.support_hi() : quantile(d, 1.0 - 1e-9);
      double eps = (hi - lo) * 1e-9;
      mass = oracle::integrate([&](double x) { return density(d, x); },
                               lo + eps, hi - eps, 8192);
    }
    CHECK(mass == Catch::Approx(1.0).epsilon(0).margin(1e-6));
  }
  // discrete pmfs sum to one
  for (const auto& d : {Dist::binomial(17, 0.42), Dist::poisson(6.5),
                        Dist::neg_binomial(4, 0.3)}) {
    double s = 0.0;
    for (int k = 0; k <= 500; ++k) s += density(d, k);
    CHECK(s == Catch::Approx(1.0).epsilon(0).margin(1e-9));
  }
}

TEST_CASE("sampling is reproducible and matches the cdf") {
  Dist u01 = Dist::uniform(0, 1);
  RngStream r1(77, 0), r2(77, 0);
  auto s1 = sample(u01, r1, 512);
  auto s2 = sample(u01, r2, 512);
  REQUIRE(s1 == s2);  // bit-identical

  RngStream r3(2024, 5);
  auto us = sample(u01, r3, 10000);
  CHECK(oracle::ks_statistic(us, [](double x) { return x; }) < 0.02);

  RngStream r4(2024, 6);
  auto ns = sample(Dist::normal(0, 1), r4, 10000);
  double mean = 0.0;
  for (double x : ns) mean += x;
  mean /= ns.size();
  CHECK(std::fabs(mean) < 0.04);  // 4 sigma / sqrt(m)
  CHECK(oracle::ks_statistic(ns, oracle::std_normal_cdf) < 0.02);

  RngStream r5(2024, 7);
  auto cs = sample(Dist::chi_square(4), r5, 4000);
  CHECK(oracle::ks_statistic(cs, [](double x) { return oracle::chi_square_cdf(4, x); }) < 0.03);

  // degenerate kinds sample their atom
  RngStream r6(1, 1);
  auto ds = sample(Dist::beta(0.0, 5.0), r6, 3);
  CHECK(ds == std::vector<double>{0.0, 0.0, 0.0});
}
