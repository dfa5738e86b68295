#pragma once

#include <map>
#include <optional>
#include <vector>

#include "l2est/density.hpp"
#include "l2est/grid.hpp"
#include "l2est/kernel.hpp"
#include "l2est/quadrature.hpp"

namespace l2est {

struct OracleConstants {
  double lambda_q = 0.0;       // Λ_q
  double lambda_star_q = 0.0;  // Λ*_q = 2^{q-1} Λ_q + Γ(q+1) (8ϖ)^q
  double omega_q = 0.0;        // Ω_q = 3^{d+1} (24q+4)^2 ϖ
};

OracleConstants oracle_constants(double q, double varpi, int d);

struct OracleRow {
  std::vector<int> k;
  double volume = 0.0;
  double bias_sq = 0.0;                 // ‖B_h‖₂²
  std::optional<double> bias_gap;       // max_w |‖B_{h∨w}‖₂² − ‖B_w‖₂²|
  double frak_b = 0.0;                  // 𝔟_h(f)
  std::optional<double> j_pop;          // J_h(f)
  std::optional<double> w_pop;          // W_h(f)
  std::optional<double> w_cal;          // 𝒲_h(f)
  std::optional<double> w_star;         // W*_h(f)
  double kappa = 0.0;                   // κ_h(f)
  std::optional<double> u_det;          // U_h(f), 23s variant
  std::optional<double> u_star;         // U*_h(f), 147s variant
  double frak_u = 0.0;                  // 𝔘_h(f)
};

struct OracleReport {
  std::vector<OracleRow> rows;
  std::optional<double> o_f;  // full oracle risk (d = 1 only)
  double o_star = 0.0;
  double remainder = 0.0;     // (ln m)^{d/2q} m^{-2}
  OracleConstants constants;
  double varpi = 1.0;
  double q = 2.0;
  double l2_sq = 0.0;
  double sup_norm = 0.0;
};

//! Population quantities for a known density, by quadrature. Rows are memoized;
//! the object is single-threaded (one instance per task).
class OracleCalc {
 public:
  OracleCalc(const DensityModel& model, const KernelSet& ks, const BandwidthGrid& grid, double q,
             QuadratureOptions opt = {});

  const BandwidthGrid& grid() const { return grid_; }
  double varpi() const { return varpi_; }

  //! S_h(x) = (K_h ⋆ f)(x); quadrature in the rescaled kernel variable.
  double smoother(const std::vector<double>& h, const std::vector<double>& x) const;
  double bias_at(const std::vector<double>& h, const std::vector<double>& x) const;

  double bias_norm_sq(int member);
  double bias_gap(int member);

  //! ∫∫ T_h(y−z) f(y) f(z) dy dz, d = 1 (independent of the identity route).
  double double_t_integral(int member);
  //! E_f[N̂_h] via the representation identity: ‖f‖₂² − ‖B_h‖₂².
  double expected_n(int member);

  //! b_{a,l}(x) = ∫ kappa(u) f(x + u a e_l) du − f(x).
  double b_field_at(int axis, double a, const std::vector<double>& x) const;
  //! ‖b_{a,l}‖₂ with a = e^{-qe/4} (memoized on the quarter-exponent lattice).
  double b_norm(int axis, int quarter_exp);
  double frak_b(int member);

  double j_pop(int member);
  double w_pop(int member);
  double wcal_pop(int member);
  double wstar_pop(int member);
  double kappa_pop(int member) const;
  double u_det(int member);
  double u_star(int member);
  double frak_u(int member) const;

  double remainder() const;
  double o_star();
  double o_full();  // requires d = 1

  //! full_fields adds J/W/U columns (heavier quadratures).
  OracleReport report(bool full_fields);

 private:
  double b_norm_1d(int axis, double a);
  std::vector<double> outer_knots(int axis, double h) const;

  const DensityModel& model_;
  const KernelSet& ks_;
  CompiledKernel ck_;
  BandwidthGrid grid_;
  double q_;
  double s_;
  QuadratureOptions opt_;
  double varpi_;
  double l2_sq_;
  double sup_norm_;
  std::vector<double> t_knots_;  // breakpoints and sign roots of the 1-D profile

  std::map<int, double> bias_sq_;
  std::map<int, double> dbl_t_;
  std::map<std::pair<int, int>, double> b_norms_;
  std::map<int, double> j_;
  std::map<int, double> w_;
  std::map<int, double> wcal_;
};

}  // namespace l2est
