#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "l2est/density.hpp"
#include "l2est/quadrature.hpp"

using namespace l2est;

namespace {

DensityModel zoo(const std::string& name, int d = 1) {
  DensitySpec spec;
  spec.name = name;
  spec.d = d;
  return make_density(spec);
}

double ks_statistic(const DensityModel& model, int axis, std::vector<double> draws) {
  std::sort(draws.begin(), draws.end());
  double worst = 0.0;
  const double n = static_cast<double>(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    double F = model.marginal_cdf(axis, draws[i]);
    worst = std::max(worst, std::abs(F - (i + 1) / n));
    worst = std::max(worst, std::abs(F - i / n));
  }
  return worst;
}

}  // namespace

TEST_CASE("exact reference functionals") {
  CHECK(zoo("uniform_cube", 2).l2_sq_exact() == 1.0);
  CHECK(zoo("uniform_cube").sup_norm() == 1.0);
  CHECK(zoo("gaussian_product").l2_sq_exact() ==
        doctest::Approx(0.28209479177387814).epsilon(1e-15));
  CHECK(zoo("laplace_product", 2).l2_sq_exact() == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(zoo("triangular_product").l2_sq_exact() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(zoo("laplace_product").sup_norm() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normalization and squared-norm quadrature cross-checks") {
  for (const auto& name : density_names()) {
    DensityModel model = zoo(name);
    auto [lo, hi] = model.support(0);
    auto pdf = [&](double x) { return model.marginal_pdf(0, x); };
    auto pdf2 = [&](double x) {
      double v = model.marginal_pdf(0, x);
      return v * v;
    };
    double mass = integrate_1d(pdf, lo, hi, model.axis_kinks(0), {1e-9, 1e-13, 16});
    double l2 = integrate_1d(pdf2, lo, hi, model.axis_kinks(0), {1e-9, 1e-13, 16});
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(l2 == doctest::Approx(model.l2_sq_exact()).epsilon(1e-6));
    CHECK(model.sup_norm() > 0.0);
  }
}

TEST_CASE("two-dimensional normalization") {
  DensityModel model = zoo("gaussian_mixture", 2);
  auto [lo0, hi0] = model.support(0);
  auto [lo1, hi1] = model.support(1);
  auto pdf = [&](double x, double y) {
    double p[2] = {x, y};
    return model.pdf(p);
  };
  double mass = integrate_2d(pdf, lo0, hi0, lo1, hi1, {}, {}, {1e-8, 1e-12, 13});
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("samplers are reproducible and land in range") {
  DensityModel model = zoo("uniform_cube", 3);
  Rng a(42), b(42);
  auto s1 = model.sample(a, 500);
  auto s2 = model.sample(b, 500);
  CHECK(s1 == s2);
  for (double v : s1) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("gaussian sample mean is CLT-consistent") {
  DensityModel model = zoo("gaussian_product");
  Rng rng(7);
  auto s = model.sample(rng, 100000);
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= s.size();
  CHECK(std::abs(mean) < 0.02);  // 3 sigma / sqrt(n) is ~0.0095
}

TEST_CASE("marginal Kolmogorov-Smirnov fit") {
  int seed = 1;
  for (const auto& name : density_names()) {
    DensityModel model = zoo(name);
    Rng rng(seed++);
    auto s = model.sample(rng, 10000);
    CHECK(ks_statistic(model, 0, s) <= 0.025);
  }
  DensityModel mix2 = zoo("gaussian_mixture", 2);
  Rng rng(99);
  auto s = mix2.sample(rng, 10000);
  std::vector<double> axis0(10000), axis1(10000);
  for (int i = 0; i < 10000; ++i) {
    axis0[i] = s[2 * i];
    axis1[i] = s[2 * i + 1];
  }
  CHECK(ks_statistic(mix2, 0, axis0) <= 0.025);
  CHECK(ks_statistic(mix2, 1, axis1) <= 0.025);
}

TEST_CASE("mixture squared norm agrees with quadrature") {
  DensitySpec spec;
  spec.name = "gaussian_mixture";
  spec.d = 1;
  spec.weights = {0.3, 0.7};
  spec.means = {-1.0, 2.0};
  spec.sigmas = {0.5, 1.5};
  DensityModel model = make_density(spec);
  auto [lo, hi] = model.support(0);
  auto pdf2 = [&](double x) {
    double v = model.marginal_pdf(0, x);
    return v * v;
  };
  double l2 = integrate_1d(pdf2, lo, hi, {}, {1e-9, 1e-13, 16});
  CHECK(l2 == doctest::Approx(model.l2_sq_exact()).epsilon(1e-7));
  CHECK(model.sup_norm() >= model.marginal_pdf(0, 2.0));
}

TEST_CASE("box probabilities come from the marginal CDFs") {
  DensityModel model = zoo("gaussian_product", 2);
  double p = model.box_probability({-1.0, -1.0}, {1.0, 1.0});
  double one_axis = model.marginal_cdf(0, 1.0) - model.marginal_cdf(0, -1.0);
  CHECK(p == doctest::Approx(one_axis * one_axis).epsilon(1e-14));
}

TEST_CASE("bad parameters are rejected") {
  DensitySpec spec;
  spec.name = "no_such_density";
  CHECK_THROWS_AS(make_density(spec), std::invalid_argument);
  spec.name = "gaussian_product";
  spec.sigma = 0.0;
  CHECK_THROWS_AS(make_density(spec), std::invalid_argument);
  spec.name = "gaussian_mixture";
  spec.sigma = 1.0;
  spec.weights = {0.5};
  CHECK_THROWS_AS(make_density(spec), std::invalid_argument);
}
