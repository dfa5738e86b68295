#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "l2est/harness.hpp"
#include "l2est/io.hpp"
#include "l2est/oracle.hpp"
#include "l2est/rate.hpp"
#include "l2est/selector.hpp"

namespace {

using nlohmann::ordered_json;
using namespace l2est;

int default_threads() {
  if (const char* env = std::getenv("L2EST_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

DensitySpec spec_from_flags(const std::string& name, int d, double sigma, double lambda) {
  DensitySpec spec;
  spec.name = name;
  spec.d = d;
  spec.sigma = sigma;
  spec.lambda = lambda;
  return spec;
}

int cmd_estimate(const std::string& input, bool header, int b, double q, bool isotropic,
                 const std::string& output) {
  PointMatrix pm = read_points(input, header);
  SplitSample sample = SplitSample::from_rows(pm);
  if (sample.m < 21)
    throw std::invalid_argument("need at least 42 observations (m >= 21); got n = " +
                                std::to_string(pm.n));
  KernelSet ks = build_kernel(b);
  CompiledKernel ck = compile_kernel(ks);
  BandwidthGrid grid = build_grid(static_cast<int>(sample.m), pm.d);
  double varpi = varpi_T(ks, pm.d);
  StatTable table = build_stat_table(sample, grid, ck, q, varpi);

  ordered_json out;
  std::string diag_path = output.empty() ? "diagnostics.csv" : output;
  if (isotropic) {
    CombineResult cr = isotropic_combine(sample, grid, table, ck);
    out["estimate"] = cr.estimate;
    out["h_star"] = cr.selection.h_star_exps;
    out["branch"] = cr.branch == CombinerBranch::Isotropic ? "isotropic" : "selected";
    out["estimate_selected"] = cr.est_star;
    out["estimate_isotropic"] = cr.est_iso;
    out["diagnostics_path"] = diag_path;
    std::ofstream diag(diag_path);
    diag << "member,volume,n_hat,j_hat,w_hat,ucal,ucal_hat,r_hat,objective\n";
    for (int i = 0; i < grid.size(); ++i) {
      diag << i << ',' << format_double(grid.members[i].volume) << ','
           << format_double(table.rows[i].n_hat) << ',' << format_double(table.rows[i].j_hat)
           << ',' << format_double(table.rows[i].w_hat) << ','
           << format_double(table.rows[i].ucal) << ','
           << format_double(cr.selection.ucal_hat[i]) << ','
           << format_double(cr.selection.r_hat[i]) << ','
           << format_double(cr.selection.objective[i]) << '\n';
    }
  } else {
    SelectionResult sel = select(table, grid);
    out["estimate"] = sel.estimate;
    out["h_star"] = sel.h_star_exps;
    out["branch"] = "selected";
    out["diagnostics_path"] = diag_path;
    std::ofstream diag(diag_path);
    diag << "member,volume,n_hat,j_hat,w_hat,ucal,ucal_hat,r_hat,objective\n";
    for (int i = 0; i < grid.size(); ++i) {
      diag << i << ',' << format_double(grid.members[i].volume) << ','
           << format_double(table.rows[i].n_hat) << ',' << format_double(table.rows[i].j_hat)
           << ',' << format_double(table.rows[i].w_hat) << ','
           << format_double(table.rows[i].ucal) << ',' << format_double(sel.ucal_hat[i]) << ','
           << format_double(sel.r_hat[i]) << ',' << format_double(sel.objective[i]) << '\n';
    }
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_grid(int m, int d) {
  BandwidthGrid grid = build_grid(m, d);
  std::cout << "member,exponents,volume,m2V,mV,small,star,upsilon\n";
  for (int i = 0; i < grid.size(); ++i) {
    const auto& gm = grid.members[i];
    std::cout << i << ',';
    for (std::size_t j = 0; j < gm.k.size(); ++j) {
      if (j) std::cout << '|';
      std::cout << "e-" << gm.k[j];
    }
    std::cout << ',' << format_double(gm.volume) << ','
              << format_double(static_cast<double>(m) * m * gm.volume) << ','
              << format_double(static_cast<double>(m) * gm.volume) << ',' << (gm.small ? 1 : 0)
              << ',' << (gm.star ? 1 : 0) << ',' << format_double(gm.upsilon) << '\n';
  }
  return 0;
}

int cmd_kernel(int b) {
  KernelSet ks = build_kernel(b);
  ordered_json out;
  out["b"] = b;
  out["t"] = to_double(ks.t);
  out["integral"] = to_double(ks.kappa_integral);
  out["kappa_l1"] = to_double(ks.kappa_l1);
  out["t_norm1_1d"] = to_double(ks.t_norm1_1d);
  out["t_norminf_1d"] = to_double(ks.t_norminf_1d);
  out["varpi_1d"] = ks.varpi_1d;
  auto dump_poly = [](const PiecewisePoly1D& p) {
    ordered_json pj;
    for (const auto& br : p.breaks) pj["breakpoints"].push_back(to_double(br));
    for (const auto& seg : p.coeffs) {
      ordered_json cj = ordered_json::array();
      for (const auto& c : seg) cj.push_back(to_double(c));
      pj["coefficients"].push_back(cj);
    }
    return pj;
  };
  out["kappa"] = dump_poly(ks.kappa);
  out["autocorrelation"] = dump_poly(ks.autocorr);
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_rate(std::vector<double> beta, std::vector<std::string> r_str, int d, int m) {
  if (beta.size() == 1 && d > 1) beta.assign(d, beta[0]);
  std::vector<double> r;
  for (const auto& s : r_str)
    r.push_back(s == "inf" ? std::numeric_limits<double>::infinity() : std::stod(s));
  if (r.size() == 1 && d > 1) r.assign(d, r[0]);
  SmoothnessParams p{beta, r};
  if (p.dim() != d) throw std::invalid_argument("need one beta/r per axis (or a single value)");

  ordered_json out;
  out["z_star"] = rate_exponent(p);
  out["parametric"] = is_parametric(p);
  out["tau_1"] = tau(p, 1.0);
  out["tau_2"] = tau(p, 2.0);
  out["tau_inf"] = tau(p, std::numeric_limits<double>::infinity());
  out["psi_m"] = adaptive_normalization(p, m, NormalizationFamily::Anisotropic);
  out["psi_m_isotropic"] = adaptive_normalization(p, m, NormalizationFamily::Isotropic);
  try {
    OptimalBandwidth ob = optimal_bandwidth(p, m);
    out["h_optimal"] = ob.h;
    out["h_projected_exponents"] = ob.projected_exps;
    out["z"] = z_exponent(p);
    out["inv_upsilon"] = upsilon_inverse(p);
  } catch (const std::invalid_argument& e) {
    out["h_optimal_error"] = e.what();
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_oracle(const std::string& density, int d, int m, double q, int b, double sigma,
               double lambda, bool full, const std::string& output) {
  DensitySpec spec = spec_from_flags(density, d, sigma, lambda);
  DensityModel model = make_density(spec);
  KernelSet ks = build_kernel(b);
  BandwidthGrid grid = build_grid(m, d);
  OracleCalc calc(model, ks, grid, q);
  OracleReport report = calc.report(full);

  std::string csv_path = output.empty() ? "oracle_report.csv" : output;
  std::ofstream csv(csv_path);
  csv << "exponents,volume,bias_sq,bias_gap,frak_b,j_pop,w_pop,w_cal,w_star,kappa,u_det,u_star,"
         "frak_u\n";
  auto opt_str = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("");
  };
  for (const auto& row : report.rows) {
    for (std::size_t j = 0; j < row.k.size(); ++j) {
      if (j) csv << '|';
      csv << "e-" << row.k[j];
    }
    csv << ',' << format_double(row.volume) << ',' << format_double(row.bias_sq) << ','
        << opt_str(row.bias_gap) << ',' << format_double(row.frak_b) << ','
        << opt_str(row.j_pop) << ',' << opt_str(row.w_pop) << ',' << opt_str(row.w_cal) << ','
        << opt_str(row.w_star) << ',' << format_double(row.kappa) << ',' << opt_str(row.u_det)
        << ',' << opt_str(row.u_star) << ',' << format_double(row.frak_u) << '\n';
  }

  ordered_json out;
  out["density"] = density;
  out["d"] = d;
  out["m"] = m;
  out["q"] = q;
  out["b"] = b;
  out["l2_sq"] = report.l2_sq;
  out["sup_norm"] = report.sup_norm;
  out["varpi"] = report.varpi;
  out["o_star"] = report.o_star;
  if (report.o_f) out["o_f"] = *report.o_f;
  out["remainder"] = report.remainder;
  out["lambda_q"] = report.constants.lambda_q;
  out["lambda_star_q"] = report.constants.lambda_star_q;
  out["omega_q"] = report.constants.omega_q;
  out["csv"] = csv_path;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_zoo_list() {
  for (const auto& name : density_names()) {
    DensitySpec spec;
    spec.name = name;
    spec.d = 1;
    DensityModel model = make_density(spec);
    std::cout << name << "  l2_sq=" << format_double(model.l2_sq_exact())
              << "  sup=" << format_double(model.sup_norm()) << '\n';
  }
  return 0;
}

int cmd_zoo_sample(const std::string& density, int d, int n, std::uint64_t seed, double sigma,
                   double lambda, const std::string& output) {
  DensityModel model = make_density(spec_from_flags(density, d, sigma, lambda));
  Rng rng(seed);
  PointMatrix pm;
  pm.n = n;
  pm.d = d;
  pm.data = model.sample(rng, n);
  if (output.empty()) {
    for (std::size_t i = 0; i < pm.n; ++i) {
      for (int j = 0; j < pm.d; ++j) {
        if (j) std::cout << ',';
        std::cout << format_double(pm.row(i)[j]);
      }
      std::cout << '\n';
    }
  } else if (output.size() > 4 && output.substr(output.size() - 4) == ".bin") {
    write_bin(output, pm);
  } else {
    write_csv(output, pm);
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, bool check, std::uint64_t seed_override,
                 bool has_seed, int threads, const std::string& output_override) {
  ExperimentConfig cfg = load_config(config_path);
  if (has_seed) cfg.seed = seed_override;
  if (threads > 0) cfg.workers = threads;
  if (!output_override.empty()) cfg.output_dir = output_override;
  Report rep = run_experiment(cfg);
  write_report(rep, cfg.output_dir, cfg.plotdata);
  std::cout << rep.summary.dump(2) << '\n';
  if (check) return check_report(rep, cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive L2-norm density estimation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  bool has_seed = false;
  int threads = 0;
  std::string output;
  bool check = false;
  app.add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { has_seed = true; });
  app.add_option("--threads", threads, "worker threads (default: cores, or L2EST_THREADS)");
  app.add_option("--output", output, "output path (meaning depends on the subcommand)");
  app.add_flag("--check", check, "exit 2 when configured acceptance thresholds fail");

  auto* est = app.add_subcommand("estimate", "estimate the L2 norm from a data file");
  std::string input;
  bool header = false, isotropic = false;
  int b = 2;
  double q = 2.0;
  est->add_option("--input", input, "CSV or .bin sample, one observation per row")->required();
  est->add_flag("--header", header, "skip a CSV header row");
  est->add_option("--b", b, "kernel order (>= 2)");
  est->add_option("--q", q, "risk exponent q >= 1");
  est->add_flag("--isotropic", isotropic, "apply the parametric/nonparametric combiner");

  auto* grid_cmd = app.add_subcommand("grid", "print the bandwidth grid as CSV");
  int gm = 100, gd = 1;
  grid_cmd->add_option("--m", gm, "half-sample size")->required();
  grid_cmd->add_option("--d", gd, "dimension");

  auto* kernel_cmd = app.add_subcommand("kernel", "kernel inspection");
  auto* kernel_dump = kernel_cmd->add_subcommand("dump", "emit breakpoints/coefficients as JSON");
  int kb = 2;
  kernel_dump->add_option("--b", kb, "kernel order");

  auto* rate_cmd = app.add_subcommand("rate", "closed-form rate quantities");
  std::vector<double> beta{1.0};
  std::vector<std::string> rstr{"inf"};
  int rd = 1, rm = 1000;
  rate_cmd->add_option("--beta", beta, "per-axis smoothness (single value broadcasts)");
  rate_cmd->add_option("--r", rstr, "per-axis integrability in [1,inf], 'inf' allowed");
  rate_cmd->add_option("--d", rd, "dimension");
  rate_cmd->add_option("--m", rm, "half-sample size");

  auto* oracle_cmd = app.add_subcommand("oracle", "population oracle quantities by quadrature");
  std::string odensity = "gaussian_product";
  int od = 1, om = 1000, ob = 2;
  double oq = 2.0, osigma = 1.0, olambda = 1.0;
  bool ofull = false;
  oracle_cmd->add_option("--density", odensity, "zoo density name");
  oracle_cmd->add_option("--d", od, "dimension (<= 2)");
  oracle_cmd->add_option("--m", om, "half-sample size");
  oracle_cmd->add_option("--q", oq, "risk exponent");
  oracle_cmd->add_option("--b", ob, "kernel order");
  oracle_cmd->add_option("--sigma", osigma, "gaussian scale");
  oracle_cmd->add_option("--lambda", olambda, "laplace scale");
  oracle_cmd->add_flag("--full", ofull, "include the heavy J/W/U columns");

  auto* zoo_cmd = app.add_subcommand("zoo", "test densities");
  auto* zoo_list = zoo_cmd->add_subcommand("list", "list densities with exact functionals");
  auto* zoo_sample = zoo_cmd->add_subcommand("sample", "draw a seeded sample");
  std::string zdensity = "gaussian_product";
  int zd = 1, zn = 100;
  double zsigma = 1.0, zlambda = 1.0;
  zoo_sample->add_option("--density", zdensity, "zoo density name");
  zoo_sample->add_option("--d", zd, "dimension");
  zoo_sample->add_option("--n", zn, "number of rows");
  zoo_sample->add_option("--sigma", zsigma, "gaussian scale");
  zoo_sample->add_option("--lambda", zlambda, "laplace scale");

  auto* sim_cmd = app.add_subcommand("simulate", "run a Monte Carlo experiment from a config");
  std::string config_path;
  sim_cmd->add_option("--config", config_path, "JSON experiment config")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed()) return cmd_estimate(input, header, b, q, isotropic, output);
    if (grid_cmd->parsed()) return cmd_grid(gm, gd);
    if (kernel_cmd->parsed()) {
      if (kernel_dump->parsed()) return cmd_kernel(kb);
      std::cerr << "kernel: expected the 'dump' subcommand\n";
      return 1;
    }
    if (rate_cmd->parsed()) return cmd_rate(beta, rstr, rd, rm);
    if (oracle_cmd->parsed())
      return cmd_oracle(odensity, od, om, oq, ob, osigma, olambda, ofull, output);
    if (zoo_cmd->parsed()) {
      if (zoo_list->parsed()) return cmd_zoo_list();
      if (zoo_sample->parsed())
        return cmd_zoo_sample(zdensity, zd, zn, seed, zsigma, zlambda, output);
      std::cerr << "zoo: expected 'list' or 'sample'\n";
      return 1;
    }
    if (sim_cmd->parsed()) {
      int t = threads > 0 ? threads : default_threads();
      return cmd_simulate(config_path, check, seed, has_seed, t, output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
