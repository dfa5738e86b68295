#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "l2est/density.hpp"
#include "l2est/grid.hpp"
#include "l2est/kernel.hpp"
#include "l2est/selector.hpp"

namespace l2est {

struct ExperimentConfig {
  std::string kind;  // risk | concentration | oracle_ratio | combiner
  std::vector<DensitySpec> densities;
  std::vector<int> m_list;
  int replications = 1;
  double q = 2.0;
  int b = 2;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string output_dir = "out";
  bool plotdata = false;
  double combiner_threshold = -1.0;  // < 0 selects the 2 ln(m)/sqrt(m) rule
  nlohmann::json check;              // optional acceptance thresholds

  void validate() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);

//! Long-format result rows plus a mirrored JSON summary. Neither contains
//! the worker count or timing, so reruns with different parallelism are
//! byte-identical.
struct ReportRow {
  std::string experiment;
  std::string density;
  int m = 0;
  std::string metric;
  double value = 0.0;
};

struct Report {
  std::vector<ReportRow> rows;
  nlohmann::ordered_json summary;

  void add(const std::string& experiment, const std::string& density, int m,
           const std::string& metric, double value);
  double get(const std::string& density, int m, const std::string& metric) const;
};

void write_report(const Report& rep, const std::string& dir, bool plotdata);
nlohmann::ordered_json read_report_json(const std::string& dir);

Report run_risk(const ExperimentConfig& cfg);
Report run_combiner(const ExperimentConfig& cfg);
Report run_concentration(const ExperimentConfig& cfg);
Report run_oracle_ratio(const ExperimentConfig& cfg);
Report run_experiment(const ExperimentConfig& cfg);

//! Per-replication envelope events: sup_h(|N̂_h − E_f N̂_h| − U*_h)_+ > 0 and
//! the two-sided comparison of the random and deterministic envelopes.
struct ConcentrationEvents {
  bool deviation_exceeds_ustar = false;  // some |N̂ − E| > U*
  bool random_above_2ustar = false;      // some U > 2 U*
  bool ustar_above_9random = false;      // some U* > 9 U
};

ConcentrationEvents concentration_events(const StatTable& table,
                                         const std::vector<double>& expected_n,
                                         const std::vector<double>& u_star);

//! Exit status for --check mode: 0 when every configured threshold holds,
//! 2 otherwise.
int check_report(const Report& rep, const ExperimentConfig& cfg);

//! Deterministic replication RNG: a fixed function of (seed, m, index).
Rng replication_rng(std::uint64_t seed, int m, int index);

//! Index-sharded parallel map; results must be written to preallocated
//! per-index slots by fn.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};
OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace l2est
