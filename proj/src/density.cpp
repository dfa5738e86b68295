#include "l2est/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace l2est {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double normal_pdf(double x, double mu, double sigma) {
  double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

//! Box-Muller on the canonical uniform stream; one value per call, no
//! cached spare so draws stay position-independent.
double normal_draw(Rng& rng) {
  double u1 = canonical_uniform(rng);
  double u2 = canonical_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

class UniformMarginal final : public Marginal {
 public:
  double pdf(double x) const override { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; }
  double cdf(double x) const override { return std::clamp(x, 0.0, 1.0); }
  double draw(Rng& rng) const override { return canonical_uniform(rng); }
  double l2_sq() const override { return 1.0; }
  double sup() const override { return 1.0; }
  double support_lo() const override { return 0.0; }
  double support_hi() const override { return 1.0; }
  std::vector<double> kinks() const override { return {0.0, 1.0}; }
};

class GaussianMarginal final : public Marginal {
 public:
  GaussianMarginal(double mu, double sigma) : mu_(mu), sigma_(sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  }
  double pdf(double x) const override { return normal_pdf(x, mu_, sigma_); }
  double cdf(double x) const override { return normal_cdf(x, mu_, sigma_); }
  double draw(Rng& rng) const override { return mu_ + sigma_ * normal_draw(rng); }
  double l2_sq() const override { return 1.0 / (2.0 * sigma_ * kSqrtPi); }
  double sup() const override { return normal_pdf(mu_, mu_, sigma_); }
  double support_lo() const override { return mu_ - 8.0 * sigma_; }
  double support_hi() const override { return mu_ + 8.0 * sigma_; }

 private:
  double mu_, sigma_;
};

class LaplaceMarginal final : public Marginal {
 public:
  explicit LaplaceMarginal(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  }
  double pdf(double x) const override { return std::exp(-std::abs(x) / lambda_) / (2.0 * lambda_); }
  double cdf(double x) const override {
    return x < 0.0 ? 0.5 * std::exp(x / lambda_) : 1.0 - 0.5 * std::exp(-x / lambda_);
  }
  double draw(Rng& rng) const override {
    double u = canonical_uniform(rng) - 0.5;
    return -lambda_ * std::copysign(1.0, u) * std::log1p(-2.0 * std::abs(u));
  }
  double l2_sq() const override { return 1.0 / (4.0 * lambda_); }
  double sup() const override { return 1.0 / (2.0 * lambda_); }
  double support_lo() const override { return -31.0 * lambda_; }
  double support_hi() const override { return 31.0 * lambda_; }
  std::vector<double> kinks() const override { return {0.0}; }

 private:
  double lambda_;
};

class TriangularMarginal final : public Marginal {
 public:
  double pdf(double x) const override { return std::max(0.0, 1.0 - std::abs(x)); }
  double cdf(double x) const override {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x < 0.0) return 0.5 * (1.0 + x) * (1.0 + x);
    return 1.0 - 0.5 * (1.0 - x) * (1.0 - x);
  }
  double draw(Rng& rng) const override {
    double u = canonical_uniform(rng);
    return u < 0.5 ? std::sqrt(2.0 * u) - 1.0 : 1.0 - std::sqrt(2.0 * (1.0 - u));
  }
  double l2_sq() const override { return 2.0 / 3.0; }
  double sup() const override { return 1.0; }
  double support_lo() const override { return -1.0; }
  double support_hi() const override { return 1.0; }
  std::vector<double> kinks() const override { return {-1.0, 0.0, 1.0}; }
};

class GaussianMixtureMarginal final : public Marginal {
 public:
  GaussianMixtureMarginal(std::vector<double> w, std::vector<double> mu, std::vector<double> sigma)
      : w_(std::move(w)), mu_(std::move(mu)), sigma_(std::move(sigma)) {
    if (w_.empty() || w_.size() != mu_.size() || w_.size() != sigma_.size())
      throw std::invalid_argument("mixture parameter vectors must have equal nonzero length");
    double total = 0.0;
    for (size_t i = 0; i < w_.size(); ++i) {
      if (!(w_[i] > 0.0) || !(sigma_[i] > 0.0))
        throw std::invalid_argument("mixture weights and sigmas must be positive");
      total += w_[i];
    }
    for (auto& wi : w_) wi /= total;
    sup_ = refine_sup();
  }
  double pdf(double x) const override {
    double v = 0.0;
    for (size_t i = 0; i < w_.size(); ++i) v += w_[i] * normal_pdf(x, mu_[i], sigma_[i]);
    return v;
  }
  double cdf(double x) const override {
    double v = 0.0;
    for (size_t i = 0; i < w_.size(); ++i) v += w_[i] * normal_cdf(x, mu_[i], sigma_[i]);
    return v;
  }
  double draw(Rng& rng) const override {
    double u = canonical_uniform(rng);
    size_t comp = 0;
    double acc = 0.0;
    for (size_t i = 0; i < w_.size(); ++i) {
      acc += w_[i];
      if (u <= acc) {
        comp = i;
        break;
      }
      comp = i;
    }
    return mu_[comp] + sigma_[comp] * normal_draw(rng);
  }
  double l2_sq() const override {
    // ∫ N(mu1,s1) N(mu2,s2) = N(mu1 - mu2; 0, s1^2 + s2^2)
    double v = 0.0;
    for (size_t i = 0; i < w_.size(); ++i)
      for (size_t j = 0; j < w_.size(); ++j) {
        double s = std::sqrt(sigma_[i] * sigma_[i] + sigma_[j] * sigma_[j]);
        v += w_[i] * w_[j] * normal_pdf(mu_[i] - mu_[j], 0.0, s);
      }
    return v;
  }
  double sup() const override { return sup_; }
  double support_lo() const override {
    double lo = mu_[0] - 9.0 * sigma_[0];
    for (size_t i = 1; i < w_.size(); ++i) lo = std::min(lo, mu_[i] - 9.0 * sigma_[i]);
    return lo;
  }
  double support_hi() const override {
    double hi = mu_[0] + 9.0 * sigma_[0];
    for (size_t i = 1; i < w_.size(); ++i) hi = std::max(hi, mu_[i] + 9.0 * sigma_[i]);
    return hi;
  }

 private:
  double refine_sup() const {
    // Coarse scan then ternary refinement around the best point.
    double lo = support_lo(), hi = support_hi();
    double best_x = lo, best = 0.0;
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
      double x = lo + (hi - lo) * i / n;
      double v = pdf(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    double a = best_x - (hi - lo) / n, b = best_x + (hi - lo) / n;
    for (int it = 0; it < 200; ++it) {
      double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      if (pdf(m1) < pdf(m2))
        a = m1;
      else
        b = m2;
    }
    return std::max(best, pdf(0.5 * (a + b)));
  }

  std::vector<double> w_, mu_, sigma_;
  double sup_ = 0.0;
};

}  // namespace

DensityModel::DensityModel(std::string name, std::vector<std::shared_ptr<const Marginal>> axes,
                           std::optional<SmoothnessLabel> label)
    : name_(std::move(name)), axes_(std::move(axes)), label_(std::move(label)) {
  if (axes_.empty()) throw std::invalid_argument("density needs at least one axis");
}

double DensityModel::pdf(const double* x) const {
  double v = 1.0;
  for (int j = 0; j < dim(); ++j) {
    v *= axes_[j]->pdf(x[j]);
    if (v == 0.0) return 0.0;
  }
  return v;
}

double DensityModel::box_probability(const std::vector<double>& lo,
                                     const std::vector<double>& hi) const {
  double p = 1.0;
  for (int j = 0; j < dim(); ++j) {
    p *= std::max(0.0, axes_[j]->cdf(hi[j]) - axes_[j]->cdf(lo[j]));
    if (p == 0.0) return 0.0;
  }
  return p;
}

std::vector<double> DensityModel::sample(Rng& rng, std::size_t count) const {
  std::vector<double> out(count * dim());
  for (std::size_t i = 0; i < count; ++i)
    for (int j = 0; j < dim(); ++j) out[i * dim() + j] = axes_[j]->draw(rng);
  return out;
}

double DensityModel::l2_sq_exact() const {
  double v = 1.0;
  for (const auto& a : axes_) v *= a->l2_sq();
  return v;
}

double DensityModel::axis_l2_sq(int axis) const { return axes_[axis]->l2_sq(); }

double DensityModel::sup_norm() const {
  double v = 1.0;
  for (const auto& a : axes_) v *= a->sup();
  return v;
}

std::pair<double, double> DensityModel::support(int axis) const {
  return {axes_[axis]->support_lo(), axes_[axis]->support_hi()};
}

DensityModel make_density(const DensitySpec& spec) {
  if (spec.d < 1) throw std::invalid_argument("density dimension must be >= 1");
  std::vector<std::shared_ptr<const Marginal>> axes;
  std::optional<SmoothnessLabel> label;
  auto iso_label = [&](double beta, double r) {
    SmoothnessLabel l;
    l.beta.assign(spec.d, beta);
    l.r.assign(spec.d, r);
    l.L.assign(spec.d, 1.0);
    return l;
  };
  const double inf = std::numeric_limits<double>::infinity();

  if (spec.name == "uniform_cube") {
    for (int j = 0; j < spec.d; ++j) axes.push_back(std::make_shared<UniformMarginal>());
    label = iso_label(1.0, 1.0);
  } else if (spec.name == "gaussian_product") {
    for (int j = 0; j < spec.d; ++j)
      axes.push_back(std::make_shared<GaussianMarginal>(0.0, spec.sigma));
    label = iso_label(2.0, inf);
  } else if (spec.name == "laplace_product") {
    for (int j = 0; j < spec.d; ++j)
      axes.push_back(std::make_shared<LaplaceMarginal>(spec.lambda));
    label = iso_label(1.0, inf);
  } else if (spec.name == "triangular_product") {
    for (int j = 0; j < spec.d; ++j) axes.push_back(std::make_shared<TriangularMarginal>());
    label = iso_label(1.0, inf);
  } else if (spec.name == "gaussian_mixture") {
    axes.push_back(
        std::make_shared<GaussianMixtureMarginal>(spec.weights, spec.means, spec.sigmas));
    for (int j = 1; j < spec.d; ++j)
      axes.push_back(std::make_shared<GaussianMarginal>(0.0, 1.0));
    label = iso_label(2.0, inf);
  } else {
    throw std::invalid_argument("unknown density name: " + spec.name);
  }
  SmoothnessLabel l = *label;
  l.Q = 1.0;
  for (const auto& a : axes) l.Q *= a->sup();
  return DensityModel(spec.name, std::move(axes), std::move(l));
}

std::vector<std::string> density_names() {
  return {"uniform_cube", "gaussian_product", "gaussian_mixture", "laplace_product",
          "triangular_product"};
}

}  // namespace l2est
