#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "l2est/rate.hpp"

using namespace l2est;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("tau examples") {
  CHECK(tau(SmoothnessParams{{1.0}, {kInf}}, 1.0) == 2.0);
  CHECK(tau(SmoothnessParams{{1.0}, {kInf}}, kInf) == 1.0);
  CHECK(tau(SmoothnessParams{{1.0, 1.0}, {2.0, 2.0}}, 2.0) == 1.0);
}

TEST_CASE("rate exponent case examples") {
  CHECK(rate_exponent(SmoothnessParams{{0.5}, {kInf}}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(rate_exponent(SmoothnessParams{{1.0}, {kInf}}) == 0.5);
  CHECK(rate_exponent_isotropic(0.5, kInf, 1) == doctest::Approx(0.5 / 1.5).epsilon(1e-15));
  CHECK(is_parametric(SmoothnessParams{{1.0}, {kInf}}));
  CHECK_FALSE(is_parametric(SmoothnessParams{{0.5}, {kInf}}));
}

TEST_CASE("anisotropic formula with equal coordinates equals the isotropic one, exactly") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ub(0.05, 6.0);
  std::uniform_real_distribution<double> ur(1.0, 8.0);
  std::uniform_int_distribution<int> ud(1, 4);
  std::uniform_int_distribution<int> coin(0, 3);
  for (int it = 0; it < 100; ++it) {
    double beta = ub(rng);
    double r = coin(rng) == 0 ? kInf : ur(rng);
    int d = ud(rng);
    double iso = rate_exponent_isotropic(beta, r, d);
    double aniso = rate_exponent(SmoothnessParams::isotropic(beta, r, d));
    CHECK(aniso == iso);  // bit-identical through the exact rational route
  }
}

TEST_CASE("the four exponent cases partition the parameter space") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> ub(0.05, 6.0);
  std::uniform_real_distribution<double> ur(1.0, 9.0);
  std::uniform_int_distribution<int> ud(1, 3);
  std::uniform_int_distribution<int> coin(0, 4);
  for (int it = 0; it < 300; ++it) {
    int d = ud(rng);
    SmoothnessParams p;
    for (int j = 0; j < d; ++j) {
      p.beta.push_back(ub(rng));
      p.r.push_back(coin(rng) == 0 ? kInf : ur(rng));
    }
    double t1 = tau(p, 1.0), t2 = tau(p, 2.0), ti = tau(p, kInf);
    int fired = 0;
    if (t2 >= 1.0 && t1 > 2.0) ++fired;
    if (t2 < 1.0 && ti < 0.0) ++fired;
    if (t2 >= 1.0 && t1 <= 2.0) ++fired;
    if (t2 < 1.0 && ti >= 0.0) ++fired;
    CHECK(fired == 1);
  }
}

TEST_CASE("adaptive normalizations") {
  SmoothnessParams parametric{{1.0}, {kInf}};  // z* = 1/2
  CHECK(adaptive_normalization(parametric, 100, NormalizationFamily::Isotropic) ==
        doctest::Approx(0.1).epsilon(1e-15));
  CHECK(adaptive_normalization(parametric, 100, NormalizationFamily::Anisotropic) ==
        doctest::Approx(std::sqrt(std::log(100.0) / 100.0)).epsilon(1e-15));
  CHECK(adaptive_normalization(parametric, 100, NormalizationFamily::Anisotropic) ==
        doctest::Approx(0.2146).epsilon(1e-3));

  SmoothnessParams nonparam{{0.5}, {kInf}};  // z* = 1/3
  CHECK(adaptive_normalization(nonparam, 100, NormalizationFamily::Isotropic) ==
        adaptive_normalization(nonparam, 100, NormalizationFamily::Anisotropic));
}

TEST_CASE("exponent p per axis") {
  CHECK(exponent_p(kInf) == 1.0);
  CHECK(exponent_p(4.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(exponent_p(1.5) == 1.5);
  CHECK(exponent_p(2.0) == 2.0);
}

TEST_CASE("optimal bandwidth in the basic parametric example") {
  SmoothnessParams p{{1.0}, {kInf}};
  CHECK(upsilon_inverse(p) == 1.0);
  CHECK(z_exponent(p) == 0.5);
  const int m = 1000;
  OptimalBandwidth ob = optimal_bandwidth(p, m);
  // p = 1, 1/upsilon = 1, exponent = 2/(1*1*2) = 1, mu = ln(m)/m
  CHECK(ob.h[0] == doctest::Approx(std::log(1000.0) / 1000.0).epsilon(1e-15));
  // downward projection: largest level e^{-k} <= h
  CHECK(ob.projected_exps[0] == 5);  // e^{-5} = 0.0067 <= 0.0069 < e^{-4}
}

TEST_CASE("bandwidth volume identity and the z relation") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ub(0.2, 4.0);
  std::uniform_real_distribution<double> u_hi(2.0, 9.0);
  std::uniform_real_distribution<double> u_lo(1.0, 2.0);
  std::uniform_int_distribution<int> ud(1, 3);
  std::uniform_int_distribution<int> regime(0, 1);
  for (int it = 0; it < 60; ++it) {
    int d = ud(rng);
    bool upper = regime(rng) == 1;
    SmoothnessParams p;
    for (int j = 0; j < d; ++j) {
      p.beta.push_back(ub(rng));
      p.r.push_back(upper ? u_hi(rng) : u_lo(rng));
    }
    double z = z_exponent(p);
    double inv_ups = upsilon_inverse(p);
    CHECK(1.0 + inv_ups == doctest::Approx(1.0 / z).epsilon(1e-12));

    const int m = 500;
    OptimalBandwidth ob = optimal_bandwidth(p, m);
    double vol = 1.0;
    for (double h : ob.h) vol *= h;
    double zs = rate_exponent(p);
    double mu = zs < 0.5 ? std::sqrt(std::log(500.0)) / 500.0 : std::log(500.0) / 500.0;
    CHECK(vol ==
          doctest::Approx(std::pow(mu, 2.0 * inv_ups / (1.0 + inv_ups))).epsilon(1e-11));
    // mu^2 / V = mu^{2/(1 + 1/upsilon)} = mu^{2z}
    CHECK(std::pow(mu, 2.0) / vol ==
          doctest::Approx(std::pow(mu, 2.0 * z)).epsilon(1e-11));
  }
}

TEST_CASE("mixed integrability regimes are rejected") {
  SmoothnessParams p{{1.0, 1.0}, {1.5, 3.0}};
  CHECK_THROWS_AS(z_exponent(p), std::invalid_argument);
  CHECK_THROWS_AS(optimal_bandwidth(p, 100), std::invalid_argument);
  // but the rate exponent itself is defined for any parameters
  CHECK(rate_exponent(p) > 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(rate_exponent(SmoothnessParams{{0.0}, {2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(rate_exponent(SmoothnessParams{{1.0}, {0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(tau(SmoothnessParams{{1.0}, {2.0}}, 0.5), std::invalid_argument);
}
