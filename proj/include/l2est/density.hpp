#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace l2est {

using Rng = std::mt19937_64;

//! Canonical uniform in (0,1) with 53 random bits; keeps sampling independent
//! of library distribution internals.
inline double canonical_uniform(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

//! Nominal smoothness label: documentation for rate reporting, not a
//! certified class membership.
struct SmoothnessLabel {
  std::vector<double> beta;
  std::vector<double> r;  // may contain +infinity
  std::vector<double> L;
  double Q = 0.0;
};

//! One-dimensional factor of a product density.
class Marginal {
 public:
  virtual ~Marginal() = default;
  virtual double pdf(double x) const = 0;
  virtual double cdf(double x) const = 0;
  virtual double draw(Rng& rng) const = 0;
  virtual double l2_sq() const = 0;       // ∫ f^2, exact
  virtual double sup() const = 0;
  virtual double support_lo() const = 0;  // mass outside <= ~1e-13
  virtual double support_hi() const = 0;
  virtual std::vector<double> kinks() const { return {}; }
};

//! Test density on R^d built as a product of one-dimensional marginals.
//! Immutable after construction.
class DensityModel {
 public:
  DensityModel(std::string name, std::vector<std::shared_ptr<const Marginal>> axes,
               std::optional<SmoothnessLabel> label);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(axes_.size()); }

  double pdf(const double* x) const;
  double pdf(const std::vector<double>& x) const { return pdf(x.data()); }

  //! P(X in ∏(lo_j, hi_j]), exact via marginal CDFs.
  double box_probability(const std::vector<double>& lo, const std::vector<double>& hi) const;

  double marginal_cdf(int axis, double x) const { return axes_[axis]->cdf(x); }
  double marginal_pdf(int axis, double x) const { return axes_[axis]->pdf(x); }

  //! count rows of d columns, row-major; reproducible for a given rng state.
  std::vector<double> sample(Rng& rng, std::size_t count) const;

  double l2_sq_exact() const;   // ∏ per-axis ∫f^2
  double axis_l2_sq(int axis) const;
  double sup_norm() const;      // ∏ per-axis sup
  const std::optional<SmoothnessLabel>& label() const { return label_; }

  std::pair<double, double> support(int axis) const;
  std::vector<double> axis_kinks(int axis) const { return axes_[axis]->kinks(); }

 private:
  std::string name_;
  std::vector<std::shared_ptr<const Marginal>> axes_;
  std::optional<SmoothnessLabel> label_;
};

//! Parameters accepted per family (all optional with defaults):
//!   uniform_cube                 -- U[0,1]^d
//!   gaussian_product  sigma      -- N(0, sigma^2)^d
//!   laplace_product   lambda     -- Laplace(lambda)^d
//!   triangular_product           -- triangle on [-1,1]^d
//!   gaussian_mixture  weights, means, sigmas -- mixture in axis 0,
//!                                  standard normal in the remaining axes
struct DensitySpec {
  std::string name;
  int d = 1;
  double sigma = 1.0;
  double lambda = 1.0;
  std::vector<double> weights{0.6, 0.4};
  std::vector<double> means{-0.8, 1.2};
  std::vector<double> sigmas{1.0, 0.3};
};

DensityModel make_density(const DensitySpec& spec);

std::vector<std::string> density_names();

}  // namespace l2est
