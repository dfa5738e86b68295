#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace l2est {

struct EmptyGridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! One bandwidth h in the grid, stored via its exact level exponents:
//! h_j = exp(-k_j).
struct GridMember {
  std::vector<int> k;     // per-axis exponents, k_j >= 1
  double volume = 0.0;    // V_h = exp(-sum k_j)
  bool small = false;     // m * V_h < ln(m)
  bool star = false;      // m * V_h <= alpha_m^2
  double upsilon = 0.0;
};

//! alpha_m = 1/ln(m). Requires m >= 21 so that alpha_m <= 1/3 and
//! alpha_m * ln(m) >= 1 both hold; smaller m is rejected.
double alpha_m(int m);

class BandwidthGrid {
 public:
  int m = 0;
  int d = 0;
  double alpha = 0.0;
  double log_m = 0.0;
  std::vector<int> level_exps;       // deduplicated, ascending
  std::vector<GridMember> members;   // lexicographic in exponent vectors

  int size() const { return static_cast<int>(members.size()); }

  //! Index of the member with the given exponent vector; -1 if absent.
  int index_of(const std::vector<int>& k) const;

  //! Index of h_i ∨ h_j (coordinatewise bandwidth max = exponent min).
  //! Always a member by closure.
  int join(int i, int j) const;

  std::vector<double> h_values(int i) const;

  void rebuild_index();

 private:
  std::unordered_map<std::uint64_t, int> index_;
  static std::uint64_t key(const std::vector<int>& k);
};

//! Bandwidth set for half-sample size m and dimension d: the value levels
//! e^{-1}, ..., e^{-(floor(2 ln m)-1)} together with e^{-2 floor(ln m)} (as a
//! set), filtered by m^2 V_h >= ln(m). Throws EmptyGridError if no bandwidth
//! survives.
BandwidthGrid build_grid(int m, int d);

//! 10 ln(m) off the star set, 17 ln(m)/|ln(m V_h)| on it.
double upsilon_value(double volume, int m);

}  // namespace l2est
