#pragma once

#include <cstddef>
#include <vector>

#include "l2est/grid.hpp"
#include "l2est/kernel.hpp"

namespace l2est {

//! Row-major point set, n rows of d columns.
struct PointMatrix {
  std::size_t n = 0;
  int d = 0;
  std::vector<double> data;

  const double* row(std::size_t i) const { return data.data() + i * d; }
  double* row(std::size_t i) { return data.data() + i * d; }
};

//! The two halves X^(m), Y^(m) of a 2m-observation sample (Y_i = row m+i).
struct SplitSample {
  PointMatrix X, Y;
  std::size_t m = 0;

  //! Rejects odd row counts: the estimator is defined for n = 2m only.
  static SplitSample from_rows(const PointMatrix& all);
  static SplitSample from_rows(std::vector<double> rows, std::size_t n, int d);
};

enum class PairPath { Naive, Binned };

//! (1/m^2) sum_{i,j} T_h(Y_i - X_j) and the same sum with |T_h|. The binned
//! path prunes pairs outside the support box of T_h via per-axis lattice
//! cells of side t*h_j; both paths use compensated summation and agree to
//! ~1e-12 relative.
struct PairSums {
  double n_hat = 0.0;  // signed statistic
  double j_hat = 0.0;  // absolute statistic
};

PairSums compute_pair_sums(const SplitSample& s, const CompiledKernel& ck,
                           const std::vector<double>& h, PairPath path);

double compute_N(const SplitSample& s, const CompiledKernel& ck, const std::vector<double>& h,
                 PairPath path = PairPath::Binned);
double compute_J(const SplitSample& s, const CompiledKernel& ck, const std::vector<double>& h,
                 PairPath path = PairPath::Binned);

//! Largest number of X-points falling in one sliding lattice box
//! ∏((k_j-1)t, (k_j+2)t] of the points scaled by 1/h. The window maximum is
//! taken over 3^d-cell windows anchored at occupied cells.
std::size_t sliding_box_max(const PointMatrix& X, const std::vector<double>& h, double t);

//! Reference implementation enumerating every anchor k in the occupied range.
std::size_t sliding_box_max_bruteforce(const PointMatrix& X, const std::vector<double>& h,
                                       double t);

struct WStats {
  double w_raw = 0.0;  // scaled sliding-box statistic with the 256 s ln m floor
  double w_hat = 0.0;  // w_raw off the small set, 1/alpha_m on it
};

WStats compute_W(const PointMatrix& X, const std::vector<double>& h, double volume,
                 const BandwidthGrid& grid, double q, double t);

//! Random upper function for one bandwidth; aborts (logic_error) on negative
//! J or W inputs.
double compute_Ucal(double j_hat, double w_hat, double upsilon, double volume, int m, double q,
                    double varpi);

//! Per-bandwidth empirical statistics for the whole grid.
struct StatRow {
  double n_hat = 0.0;
  double j_hat = 0.0;
  double w_raw = 0.0;
  double w_hat = 0.0;
  double ucal = 0.0;
};

struct StatTable {
  std::vector<StatRow> rows;  // aligned with grid.members
  double q = 2.0;
  double s = 26.0;  // 12q + 2
  double varpi = 1.0;
};

StatTable build_stat_table(const SplitSample& s, const BandwidthGrid& grid,
                           const CompiledKernel& ck, double q, double varpi,
                           PairPath path = PairPath::Binned);

}  // namespace l2est
