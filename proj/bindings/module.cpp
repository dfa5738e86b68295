#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "l2est/density.hpp"
#include "l2est/grid.hpp"
#include "l2est/kernel.hpp"
#include "l2est/oracle.hpp"
#include "l2est/rate.hpp"
#include "l2est/selector.hpp"
#include "l2est/ustat.hpp"

namespace py = pybind11;
using namespace l2est;

namespace {

DensitySpec spec_from_kwargs(const std::string& name, int d, const py::kwargs& kwargs) {
  DensitySpec spec;
  spec.name = name;
  spec.d = d;
  if (kwargs.contains("sigma")) spec.sigma = kwargs["sigma"].cast<double>();
  if (kwargs.contains("lambda_")) spec.lambda = kwargs["lambda_"].cast<double>();
  if (kwargs.contains("weights")) spec.weights = kwargs["weights"].cast<std::vector<double>>();
  if (kwargs.contains("means")) spec.means = kwargs["means"].cast<std::vector<double>>();
  if (kwargs.contains("sigmas")) spec.sigmas = kwargs["sigmas"].cast<std::vector<double>>();
  return spec;
}

PointMatrix matrix_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array (rows = observations)");
  PointMatrix pm;
  pm.n = static_cast<std::size_t>(arr.shape(0));
  pm.d = static_cast<int>(arr.shape(1));
  pm.data.assign(arr.data(), arr.data() + pm.n * pm.d);
  return pm;
}

py::dict estimate_impl(const py::array_t<double, py::array::c_style | py::array::forcecast>& data,
                       int b, double q, bool isotropic) {
  PointMatrix pm = matrix_from_array(data);
  SplitSample sample = SplitSample::from_rows(pm);
  if (sample.m < 21) throw std::invalid_argument("need at least 42 observations (m >= 21)");
  KernelSet ks = build_kernel(b);
  CompiledKernel ck = compile_kernel(ks);
  BandwidthGrid grid = build_grid(static_cast<int>(sample.m), pm.d);
  StatTable table = build_stat_table(sample, grid, ck, q, varpi_T(ks, pm.d));

  py::dict out;
  if (isotropic) {
    CombineResult cr = isotropic_combine(sample, grid, table, ck);
    out["estimate"] = cr.estimate;
    out["branch"] = cr.branch == CombinerBranch::Isotropic ? "isotropic" : "selected";
    out["estimate_selected"] = cr.est_star;
    out["estimate_isotropic"] = cr.est_iso;
    out["h_star_exponents"] = cr.selection.h_star_exps;
  } else {
    SelectionResult sel = select(table, grid);
    out["estimate"] = sel.estimate;
    out["branch"] = "selected";
    out["h_star_exponents"] = sel.h_star_exps;
    out["objective"] = sel.objective;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_l2est, m) {
  m.doc() = "Adaptive estimation of the L2 norm of a multivariate density";

  m.def("kernel_info", [](int b) {
    KernelSet ks = build_kernel(b);
    py::dict out;
    out["b"] = b;
    out["t"] = to_double(ks.t);
    out["integral"] = to_double(ks.kappa_integral);
    out["t_norm1_1d"] = to_double(ks.t_norm1_1d);
    out["t_norminf_1d"] = to_double(ks.t_norminf_1d);
    out["varpi_1d"] = ks.varpi_1d;
    std::vector<double> breaks;
    for (const auto& br : ks.kappa.breaks) breaks.push_back(to_double(br));
    out["kappa_breakpoints"] = breaks;
    return out;
  }, py::arg("b") = 2);

  m.def("kappa", [](int b, double x) { return build_kernel(b).kappa.value(x); },
        py::arg("b"), py::arg("x"), "evaluate the 1-D kernel");

  m.def("eval_t", [](int b, std::vector<double> x, std::vector<double> h) {
    return eval_T(build_kernel(b), x, h);
  }, py::arg("b"), py::arg("x"), py::arg("h"), "evaluate the scaled kernel T_h");

  m.def("varpi", [](int b, int d) { return varpi_T(build_kernel(b), d); },
        py::arg("b") = 2, py::arg("d") = 1);

  m.def("grid", [](int m, int d) {
    BandwidthGrid g = build_grid(m, d);
    py::list rows;
    for (const auto& gm : g.members) {
      py::dict r;
      r["exponents"] = gm.k;
      r["volume"] = gm.volume;
      r["small"] = gm.small;
      r["star"] = gm.star;
      r["upsilon"] = gm.upsilon;
      rows.append(r);
    }
    return rows;
  }, py::arg("m"), py::arg("d") = 1);

  m.def("alpha_m", &alpha_m, py::arg("m"));

  m.def("estimate", &estimate_impl, py::arg("data"), py::arg("b") = 2, py::arg("q") = 2.0,
        py::arg("isotropic") = false,
        "data-driven L2-norm estimate from a 2-D sample array (rows = observations)");

  m.def("density_names", &density_names);

  m.def("sample_density", [](const std::string& name, int d, std::size_t n, std::uint64_t seed,
                             const py::kwargs& kwargs) {
    DensityModel model = make_density(spec_from_kwargs(name, d, kwargs));
    Rng rng(seed);
    auto rows = model.sample(rng, n);
    py::array_t<double> arr({static_cast<py::ssize_t>(n), static_cast<py::ssize_t>(d)});
    std::copy(rows.begin(), rows.end(), arr.mutable_data());
    return arr;
  }, py::arg("name"), py::arg("d") = 1, py::arg("n") = 100, py::arg("seed") = 1);

  m.def("density_info", [](const std::string& name, int d, const py::kwargs& kwargs) {
    DensityModel model = make_density(spec_from_kwargs(name, d, kwargs));
    py::dict out;
    out["name"] = model.name();
    out["d"] = model.dim();
    out["l2_sq"] = model.l2_sq_exact();
    out["l2_norm"] = std::sqrt(model.l2_sq_exact());
    out["sup_norm"] = model.sup_norm();
    return out;
  }, py::arg("name"), py::arg("d") = 1);

  m.def("rate_exponent", [](std::vector<double> beta, std::vector<double> r) {
    return rate_exponent(SmoothnessParams{std::move(beta), std::move(r)});
  }, py::arg("beta"), py::arg("r"));

  m.def("rate_exponent_isotropic", &rate_exponent_isotropic, py::arg("beta"), py::arg("r"),
        py::arg("d"));

  m.def("adaptive_rate", [](std::vector<double> beta, std::vector<double> r, int m,
                            bool isotropic_family) {
    return adaptive_normalization(SmoothnessParams{std::move(beta), std::move(r)}, m,
                                  isotropic_family ? NormalizationFamily::Isotropic
                                                   : NormalizationFamily::Anisotropic);
  }, py::arg("beta"), py::arg("r"), py::arg("m"), py::arg("isotropic_family") = false);

  m.def("optimal_bandwidth", [](std::vector<double> beta, std::vector<double> r, int m) {
    OptimalBandwidth ob = optimal_bandwidth(SmoothnessParams{std::move(beta), std::move(r)}, m);
    py::dict out;
    out["h"] = ob.h;
    out["projected_exponents"] = ob.projected_exps;
    return out;
  }, py::arg("beta"), py::arg("r"), py::arg("m"));

  m.def("oracle_star_risk", [](const std::string& name, int d, int m, double q, int b,
                               const py::kwargs& kwargs) {
    DensityModel model = make_density(spec_from_kwargs(name, d, kwargs));
    KernelSet ks = build_kernel(b);
    BandwidthGrid grid = build_grid(m, d);
    OracleCalc calc(model, ks, grid, q);
    return calc.o_star();
  }, py::arg("name"), py::arg("d") = 1, py::arg("m") = 1000, py::arg("q") = 2.0,
        py::arg("b") = 2);

  m.attr("__version__") = "0.1.0";
}
