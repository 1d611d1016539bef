//! Python bindings for the condinf core library.

#include "condinf/conddist.hpp"
#include "condinf/error.hpp"
#include "condinf/intervals.hpp"
#include "condinf/npi.hpp"
#include "condinf/polysampling.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

namespace py = pybind11;
using namespace condinf;

namespace {

Eigen::MatrixXd
design_or_location(const std::optional<Eigen::MatrixXd>& X, Eigen::Index n)
{
  return X ? *X : location_design(n);
}

py::dict
summary_dict(const ConditionalNormalSummary& s)
{
  py::dict d;
  d["info"] = s.info;
  d["theta"] = s.theta;
  d["scale_info"] = s.scale_info;
  d["scale_theta"] = s.scale_theta;
  d["n"] = s.n;
  d["source"] = std::string(to_string(s.source));
  d["warnings"] = s.warnings;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Conditional inference for regression and location-scale models";

  py::register_exception<Error>(m, "CondinfError", PyExc_RuntimeError);

  m.def(
    "fit",
    [](const Eigen::VectorXd& y, std::optional<Eigen::MatrixXd> X, const std::string& model,
       const std::string& estimator) {
      Eigen::MatrixXd design = design_or_location(X, y.size());
      ModelKind kind = parse_model_kind(model);
      FitResult f = fit(Dataset(design, y), parse_estimator(estimator), kind);
      py::dict d;
      d["beta_hat"] = f.beta_hat;
      d["sigma_hat"] = f.sigma_hat;
      d["residuals"] = f.residuals_raw;
      d["ancillary"] = ancillary(f, kind);
      return d;
    },
    py::arg("y"), py::arg("X") = py::none(), py::arg("model") = "regscale", py::arg("estimator") = "ls",
    "Fit by least squares or median; X defaults to the location design.");

  m.def(
    "log_density",
    [](const std::string& spec, const std::vector<double>& z) {
      DensityPtr f = parse_density(spec);
      std::vector<double> out;
      out.reserve(z.size());
      for (double v : z)
        out.push_back(f->log_density(v));
      return out;
    },
    py::arg("spec"), py::arg("z"));

  m.def(
    "score",
    [](const std::string& spec, const std::vector<double>& z, int order) {
      DensityPtr f = parse_density(spec);
      std::vector<double> out;
      out.reserve(z.size());
      for (double v : z)
        out.push_back(f->score(v, order));
      return out;
    },
    py::arg("spec"), py::arg("z"), py::arg("order") = 1);

  m.def(
    "sample",
    [](const std::string& spec, std::size_t n, std::uint64_t seed) {
      return parse_density(spec)->sample(n, seed);
    },
    py::arg("spec"), py::arg("n"), py::arg("seed"));

  m.def(
    "uniforms",
    [](std::uint64_t seed, const std::string& label, std::uint64_t index, std::size_t n) {
      Stream s = SeedTree(seed).derive(label, index).stream();
      return uniforms(s, n);
    },
    py::arg("seed"), py::arg("label"), py::arg("index"), py::arg("n"));

  m.def(
    "normals",
    [](std::uint64_t seed, const std::string& label, std::uint64_t index, std::size_t n) {
      Stream s = SeedTree(seed).derive(label, index).stream();
      return normals(s, n);
    },
    py::arg("seed"), py::arg("label"), py::arg("index"), py::arg("n"));

  m.def(
    "theorem1_quantities",
    [](const Eigen::VectorXd& a, std::optional<Eigen::MatrixXd> X, const std::string& spec,
       const std::string& model) {
      return summary_dict(theorem1_quantities(a, design_or_location(X, a.size()), *parse_density(spec),
                                              parse_model_kind(model)));
    },
    py::arg("ancillary"), py::arg("X") = py::none(), py::arg("dist") = "normal",
    py::arg("model") = "regscale", "Conditional-normal quantities with exact scores.");

  m.def(
    "plugin_quantities",
    [](const Eigen::VectorXd& a, std::optional<Eigen::MatrixXd> X, double h0, double h1,
       const std::string& kernel, const std::string& model) {
      ModelKind kind = parse_model_kind(model);
      Bandwidths bw = rate_bandwidths(static_cast<std::size_t>(a.size()), 2, 1.0);
      if (!std::isnan(h0))
        bw.h0 = h0;
      if (!std::isnan(h1))
        bw.h1 = h1;
      bw.trim = default_trim(static_cast<std::size_t>(a.size()), bw.h0);
      return summary_dict(
        plugin_quantities(a, design_or_location(X, a.size()), bw, parse_kernel(kernel), kind));
    },
    py::arg("ancillary"), py::arg("X") = py::none(),
    py::arg("h0") = std::numeric_limits<double>::quiet_NaN(),
    py::arg("h1") = std::numeric_limits<double>::quiet_NaN(), py::arg("kernel") = "gaussian",
    py::arg("model") = "regscale", "Conditional-normal quantities with kernel score estimates.");

  m.def(
    "marginal_g_t",
    [](const Eigen::VectorXd& a, std::optional<Eigen::MatrixXd> X, const std::string& spec,
       const std::vector<double>& t) {
      ConditionalLaw law(LawKind::st_given_a, a, design_or_location(X, a.size()), parse_density(spec));
      std::vector<double> out;
      for (double v : t) {
        Eigen::VectorXd tv(1);
        tv << v;
        out.push_back(law.marginal_g_t(tv));
      }
      return out;
    },
    py::arg("ancillary"), py::arg("X") = py::none(), py::arg("dist") = "normal", py::arg("t"),
    "Unnormalized marginal density of T given the ancillary (p = 1).");

  m.def(
    "interval",
    [](const Eigen::VectorXd& y, std::optional<Eigen::MatrixXd> X, const std::string& method,
       double alpha, std::uint64_t seed, std::size_t B, double h, const std::string& dist,
       const std::string& model) {
      Eigen::MatrixXd design = design_or_location(X, y.size());
      ModelKind kind = parse_model_kind(model);
      MethodSpec spec;
      spec.method = parse_interval_method(method);
      spec.draws = B;
      spec.h = h;
      if (!dist.empty())
        spec.density = parse_density(dist);
      FitResult f = fit(Dataset(design, y), Estimator::least_squares, kind);
      PivotLaw law(spec, f, design, kind, SeedTree(seed).derive("interval", 0));
      ConfidenceInterval ci = law.interval(f, alpha);
      return std::make_pair(ci.lower, ci.upper);
    },
    py::arg("y"), py::arg("X") = py::none(), py::arg("method") = "pi", py::arg("alpha") = 0.05,
    py::arg("seed") = 0, py::arg("B") = 0, py::arg("h") = std::numeric_limits<double>::quiet_NaN(),
    py::arg("dist") = "", py::arg("model") = "regscale",
    "Equal-tailed interval (lower, upper) by exact, rb, pi or npi.");

  py::class_<CmseQuadratic>(m, "CmseQuadratic")
    .def(py::init([](double K, double c, double v_star) {
           CmseQuadratic q;
           q.K = K;
           q.c = c;
           q.v_star = v_star;
           return q;
         }),
         py::arg("K"), py::arg("c"), py::arg("v_star"))
    .def_readwrite("K", &CmseQuadratic::K)
    .def_readwrite("c", &CmseQuadratic::c)
    .def_readwrite("v_star", &CmseQuadratic::v_star)
    .def("__call__", &CmseQuadratic::operator());

  m.def(
    "cmse_quadratic",
    [](const std::string& spec, const Eigen::VectorXd& a, double sigma, bool location_only) {
      return cmse_quadratic(parse_density(spec), a, location_design(a.size()), sigma, location_only);
    },
    py::arg("dist"), py::arg("ancillary"), py::arg("sigma") = 1.0, py::arg("location_only") = false);

  m.def(
    "minimax", [](const CmseQuadratic& f, const CmseQuadratic& g) { return minimax(f, g).v; },
    py::arg("qF"), py::arg("qG"));
  m.def(
    "bioptimal",
    [](const CmseQuadratic& f, const CmseQuadratic& g, double pf, double pg) {
      return bioptimal(f, g, pf, pg).v;
    },
    py::arg("qF"), py::arg("qG"), py::arg("P_F") = 1.0, py::arg("P_G") = 1.0);
}
