#pragma once

#include <vector>

#include "l2est/grid.hpp"
#include "l2est/ustat.hpp"

namespace l2est {

//! max over w in the grid of Ucal at h ∨ w.
std::vector<double> ucal_hat_all(const StatTable& table, const BandwidthGrid& grid);
double ucal_hat(int h_index, const StatTable& table, const BandwidthGrid& grid);

//! max over w of (|N_{h∨w} - N_w| - 18 * UcalHat_w)_+.
std::vector<double> r_hat_all(const StatTable& table, const BandwidthGrid& grid,
                              const std::vector<double>& ucal_hat);
double r_hat(int h_index, const StatTable& table, const BandwidthGrid& grid);

struct SelectionResult {
  int h_star = -1;
  std::vector<int> h_star_exps;
  double estimate = 0.0;  // sqrt(|N_{h*}|)
  double n_at_star = 0.0;
  std::vector<double> r_hat;
  std::vector<double> ucal_hat;
  std::vector<double> objective;  // r_hat + 18 * ucal_hat
  std::vector<int> ties;          // co-minimal member indices
};

//! argmin of r_hat + 18 * ucal_hat; ties broken by larger V_h, then by
//! lexicographically larger bandwidth vector.
SelectionResult select(const StatTable& table, const BandwidthGrid& grid);

enum class CombinerBranch { Isotropic, Selected };

//! The parametric/nonparametric case split: the isotropic bandwidth wins
//! when |est_star - est_iso| <= 2 ln(m)/sqrt(m) (inclusive).
CombinerBranch combiner_branch(double est_star, double est_iso, int m, double threshold);
double combiner_threshold(int m);

struct CombineResult {
  CombinerBranch branch = CombinerBranch::Isotropic;
  double estimate = 0.0;
  double est_star = 0.0;
  double est_iso = 0.0;
  double n_iso = 0.0;
  SelectionResult selection;
};

//! Runs the selection rule and compares against the estimator at
//! h_m = (m^{-1/d}, ..., m^{-1/d}), computed standalone (the isotropic
//! bandwidth need not belong to the grid). threshold_override < 0 means the
//! default 2 ln(m)/sqrt(m).
CombineResult isotropic_combine(const SplitSample& sample, const BandwidthGrid& grid,
                                const StatTable& table, const CompiledKernel& ck,
                                double threshold_override = -1.0);

}  // namespace l2est
