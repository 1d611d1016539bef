//! condinf: command-line front end for fitting, conditional intervals,
//! coverage studies, polysampling tables and score diagnostics.

#include "condinf/error.hpp"
#include "condinf/intervals.hpp"
#include "condinf/parallel.hpp"
#include "condinf/polysampling.hpp"
#include "condinf/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace condinf;

namespace {

struct Common
{
  std::string data;
  std::string model = "regscale";
  std::string estimator = "ls";
  std::string out;
  std::optional<std::uint64_t> seed;
  int workers = default_workers();
};

//! Splits on commas outside parentheses: "t(5),cbeta(0.5,0.5)" has two items.
std::vector<std::string>
split_list(const std::string& s)
{
  std::vector<std::string> items;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(')
      ++depth;
    else if (c == ')')
      --depth;
    if (c == ',' && depth == 0) {
      items.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty())
    items.push_back(cur);
  return items;
}

std::vector<double>
parse_numbers(const std::string& s)
{
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty())
      fail(ErrorKind::parse_error, "not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::uint64_t
require_seed(const Common& c, const char* command)
{
  if (!c.seed)
    fail(ErrorKind::invalid_argument, std::string(command) + " needs an explicit --seed");
  return *c.seed;
}

void
emit(const Common& c, const std::string& text)
{
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream os(c.out, std::ios::binary);
  if (!os)
    fail(ErrorKind::invalid_argument, "cannot write " + c.out);
  os << text;
}

void
add_common(CLI::App* cmd, Common& c, bool data, bool seed)
{
  if (data)
    cmd->add_option("--data", c.data, "CSV with columns y, x1..xp");
  cmd->add_option("--model", c.model, "reg or regscale")->capture_default_str();
  cmd->add_option("--estimator", c.estimator, "ls or median")->capture_default_str();
  cmd->add_option("--out", c.out, "output file (default stdout)");
  if (seed)
    cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--workers", c.workers, "worker threads")->capture_default_str();
}

Dataset
load(const Common& c)
{
  if (c.data.empty())
    fail(ErrorKind::invalid_argument, "--data is required");
  return read_csv_file(c.data);
}

// fit

void
cmd_fit(const Common& c)
{
  Dataset d = load(c);
  ModelKind kind = parse_model_kind(c.model);
  Estimator est = parse_estimator(c.estimator);
  FitResult f = fit(d, est, kind);
  emit(c, fit_report(d, f, kind, est).dump(2) + "\n");
}

// interval

struct IntervalOpts
{
  std::string method;
  double alpha = 0.05;
  std::string levels;
  std::size_t B = 0;
  double h = std::numeric_limits<double>::quiet_NaN();
  double h0 = std::numeric_limits<double>::quiet_NaN();
  double h1 = std::numeric_limits<double>::quiet_NaN();
  std::string kernel = "gaussian";
  std::string dist;
};

std::vector<double>
alphas_from(const IntervalOpts& o)
{
  if (o.levels.empty())
    return { o.alpha };
  std::vector<double> alphas;
  for (double l : parse_numbers(o.levels))
    alphas.push_back(1.0 - l);
  return alphas;
}

MethodSpec
method_spec(const std::string& name, const IntervalOpts& o, Estimator est)
{
  MethodSpec m;
  std::string base = name;
  if (name == "pi-oracle")
    base = "pi";
  m.method = parse_interval_method(base);
  m.draws = o.B;
  m.h = o.h;
  m.kernel = parse_kernel(o.kernel);
  m.estimator = est;
  if (!std::isnan(o.h0) || !std::isnan(o.h1)) {
    if (std::isnan(o.h0) || std::isnan(o.h1))
      fail(ErrorKind::bad_bandwidth, "--h0 and --h1 go together");
    Bandwidths bw;
    bw.h0 = o.h0;
    bw.h1 = o.h1;
    bw.trim = default_trim(2, o.h0);
    m.npi_bandwidths = bw;
  }
  bool wants_density = m.method == IntervalMethod::exact_unconditional || name == "pi-oracle";
  if (wants_density && o.dist.empty())
    fail(ErrorKind::invalid_argument, name + " needs the true density via --dist");
  if (wants_density || (m.method == IntervalMethod::npi && !o.dist.empty()))
    m.density = parse_density(o.dist);
  m.tag = name;
  return m;
}

void
cmd_interval(const Common& c, const IntervalOpts& o)
{
  Dataset d = load(c);
  ModelKind kind = parse_model_kind(c.model);
  Estimator est = parse_estimator(c.estimator);
  MethodSpec spec = method_spec(o.method, o, est);
  if (spec.method != IntervalMethod::npi)
    require_seed(c, "interval");
  std::uint64_t seed = c.seed.value_or(0);
  FitResult f = fit(d, est, kind);
  Eigen::VectorXd a = ancillary(f, kind);
  if (spec.npi_bandwidths)
    spec.npi_bandwidths->trim = default_trim(static_cast<std::size_t>(d.n()), spec.npi_bandwidths->h0);
  if (spec.method == IntervalMethod::pi && !spec.density && std::isnan(spec.h))
    spec.h = default_pi_bandwidth(a);

  PivotLaw law(spec, f, d.X(), kind, SeedTree(seed).derive("interval", 0), c.workers);
  json out;
  out["command"] = "interval";
  out["method"] = spec.label();
  out["model"] = to_string(kind);
  out["estimator"] = to_string(est);
  out["n"] = d.n();
  out["seed"] = seed;
  out["beta_hat"] = to_json(f.beta_hat);
  out["sigma_hat"] = f.sigma_hat;
  if (spec.method == IntervalMethod::pi && !spec.density)
    out["h"] = spec.h;
  if (law.draws())
    out["draws"] = law.draws()->count();
  json list = json::array();
  for (double alpha : alphas_from(o))
    list.push_back(to_json(law.interval(f, alpha)));
  out["intervals"] = list;
  out["warnings"] = law.warnings();
  emit(c, out.dump(2) + "\n");
}

// coverage

struct CoverageOpts
{
  IntervalOpts iv;
  std::string methods = "exact,pi";
  std::string levels = "0.90,0.91,0.92,0.93,0.94,0.95,0.96,0.97,0.98,0.99";
  std::size_t R = 5000;
  Eigen::Index n = 30;
  std::string ancillary_dist = "t(5)";
  std::optional<std::uint64_t> ancillary_seed;
  double outlier = 0.0;
  double beta = 0.0;
  double sigma = 1.0;
  std::string format = "json";
};

Eigen::VectorXd
fixed_ancillary(const Common& c,
                const std::string& dist,
                Eigen::Index n,
                std::optional<std::uint64_t> anc_seed,
                ModelKind kind,
                Estimator est,
                Eigen::MatrixXd& X)
{
  if (!c.data.empty()) {
    Dataset d = load(c);
    X = d.X();
    return ancillary(fit(d, est, kind), kind);
  }
  X = location_design(n);
  std::uint64_t s = anc_seed.value_or(c.seed.value_or(0));
  Stream stream = SeedTree(s).derive("ancillary", 0).stream();
  DensityPtr density = parse_density(dist);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i)
    y(i) = density->sample_one(stream);
  return ancillary(fit(Dataset(X, y), est, kind), kind);
}

void
cmd_coverage(const Common& c, const CoverageOpts& o)
{
  std::uint64_t seed = require_seed(c, "coverage");
  ModelKind kind = parse_model_kind(c.model);
  Estimator est = parse_estimator(c.estimator);
  if (o.iv.dist.empty())
    fail(ErrorKind::invalid_argument, "coverage needs the true density via --dist");
  Eigen::MatrixXd X;
  Eigen::VectorXd a = fixed_ancillary(c, o.ancillary_dist, o.n, o.ancillary_seed, kind, est, X);
  if (o.outlier != 0.0)
    a = with_outlier(a, X, o.outlier, kind, est);
  std::vector<double> levels = parse_numbers(o.levels);
  double min_alpha = 1.0;
  for (double l : levels)
    min_alpha = std::min(min_alpha, 1.0 - l);
  std::vector<MethodSpec> methods;
  for (const auto& name : split_list(o.methods)) {
    MethodSpec m = method_spec(name, o.iv, est);
    // enough draws for the most extreme level
    if (m.method != IntervalMethod::npi && o.iv.B == 0)
      m.draws = std::max<std::size_t>(m.draw_count(),
                                      static_cast<std::size_t>(std::ceil(20.0 / min_alpha)));
    if (m.method == IntervalMethod::pi && !m.density && std::isnan(m.h))
      m.h = default_pi_bandwidth(a);
    methods.push_back(m);
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Constant(X.cols(), o.beta);
  CoverageReport r = conditional_coverage(a, X, beta, o.sigma, parse_density(o.iv.dist), kind,
                                          methods, levels, o.R, seed, c.workers);
  if (o.format == "csv") {
    std::ostringstream os;
    write_coverage_csv(os, r);
    emit(c, os.str());
  } else if (o.format == "json") {
    emit(c, to_json(r).dump(2) + "\n");
  } else {
    fail(ErrorKind::invalid_argument, "unknown format '" + o.format + "'");
  }
}

// polysample

struct PolyOpts
{
  std::string confrontations = "i,ii,iii";
  std::string C = "0.1,0.5,1.0,1.5,2.0,2.5";
  double ha = 0.1;
  double hb = 2.0;
  std::string dists = "cauchy,cbeta(0.5,0.5),cbeta(2,2)";
  std::size_t R = 10000;
  Eigen::Index n = 15;
  std::string ancillary_dist = "normal";
  std::optional<std::uint64_t> ancillary_seed;
  std::string prices;
  bool location_only = false;
  std::string kernel = "gaussian";
  std::string format = "csv";
};

void
cmd_polysample(const Common& c, const PolyOpts& o)
{
  std::uint64_t seed = require_seed(c, "polysample");
  ModelKind kind = o.location_only ? ModelKind::regression : ModelKind::regression_scale;
  Eigen::MatrixXd X;
  Eigen::VectorXd a = fixed_ancillary(c, o.ancillary_dist, o.n,
                                      o.ancillary_seed ? o.ancillary_seed : std::optional<std::uint64_t>(1),
                                      kind, Estimator::least_squares, X);
  ConfrontationParams params;
  params.h_a = o.ha;
  params.h_b = o.hb;
  params.kernel = parse_kernel(o.kernel);
  if (!o.prices.empty()) {
    std::vector<double> p = parse_numbers(o.prices);
    if (p.size() != 2)
      fail(ErrorKind::parse_error, "--prices takes two numbers");
    params.prices = std::make_pair(p[0], p[1]);
  }

  std::vector<RuleSpec> rules{ { "LS", "v=0", 0.0 } };
  for (const auto& name : split_list(o.confrontations)) {
    ConfrontationKind kind_c = parse_confrontation(name);
    std::vector<double> Cs{ params.C };
    if (kind_c == ConfrontationKind::ls_vs_pi)
      Cs = parse_numbers(o.C);
    for (double C : Cs) {
      params.C = C;
      Confrontation conf = build_confrontation(kind_c, params, a);
      ConfrontationRules r = confrontation_rules(conf, a, X, o.location_only);
      rules.push_back({ conf.label(), conf.params + ";minimax", r.minimax.v });
      if (r.bioptimal)
        rules.push_back({ conf.label(), conf.params + ";bioptimal", r.bioptimal->v });
    }
  }

  std::vector<CmseRow> rows;
  for (const auto& spec : split_list(o.dists)) {
    auto part = cmse_simulation(rules, a, X, parse_density(spec), o.R, seed, c.workers,
                                o.location_only);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (o.format == "csv") {
    std::ostringstream os;
    write_cmse_csv(os, rows);
    emit(c, os.str());
  } else if (o.format == "json") {
    json list = json::array();
    for (const auto& r : rows)
      list.push_back(to_json(r));
    emit(c, list.dump(2) + "\n");
  } else {
    fail(ErrorKind::invalid_argument, "unknown format '" + o.format + "'");
  }
}

// darwin

struct DarwinOpts
{
  std::size_t B = 50000;
  std::size_t draws = 5000;
  std::string multipliers = "0.2,0.5,0.7,1.0,1.3,1.5";
  double alpha = 0.05;
  std::string kernel = "gaussian";
};

void
cmd_darwin(const Common& c, const DarwinOpts& o)
{
  std::uint64_t seed = require_seed(c, "darwin");
  Dataset d = load(c);
  if (d.n() != 15)
    fail(ErrorKind::invalid_argument, "darwin expects 15 rows, got " + std::to_string(d.n()));
  if (d.p() != 1)
    fail(ErrorKind::invalid_argument, "darwin expects a y-only file");
  const ModelKind kind = ModelKind::regression_scale;
  const KernelSpec k = parse_kernel(o.kernel);
  std::vector<double> ms = parse_numbers(o.multipliers);
  SeedTree tree(seed);

  json cases = json::array();
  std::size_t case_index = 0;
  for (Estimator est : { Estimator::least_squares, Estimator::median }) {
    FitResult f = fit(d, est, kind);
    Eigen::VectorXd a = ancillary(f, kind);
    double h_ref = default_pi_bandwidth(a);
    SeedTree ct = tree.derive(to_string(est), case_index++);
    json cs;
    cs["case"] = est == Estimator::least_squares ? "mean" : "median";
    cs["beta_hat"] = f.beta_hat(0);
    cs["sigma_hat"] = f.sigma_hat;
    cs["h_reference"] = h_ref;

    MethodSpec rb;
    rb.method = IntervalMethod::rb;
    rb.draws = o.B;
    rb.estimator = est;
    PivotLaw rb_law(rb, f, d.X(), kind, ct.derive("rb", 0), c.workers);
    ConfidenceInterval rci = rb_law.interval(f, o.alpha);
    cs["rb"] = { { "B", o.B }, { "lower", rci.lower(0) }, { "upper", rci.upper(0) } };

    json npi = json::array();
    json pi = json::array();
    for (std::size_t j = 0; j < ms.size(); ++j) {
      double h = ms[j] * h_ref;
      MethodSpec sn;
      sn.method = IntervalMethod::npi;
      sn.kernel = k;
      sn.estimator = est;
      Bandwidths bw;
      bw.h0 = h;
      bw.h1 = h;
      bw.trim = default_trim(static_cast<std::size_t>(d.n()), h);
      sn.npi_bandwidths = bw;
      json rec = { { "m", ms[j] }, { "h0", h }, { "h1", h } };
      try {
        PivotLaw nl(sn, f, d.X(), kind, ct.derive("npi", j), c.workers);
        ConfidenceInterval ci = nl.interval(f, o.alpha);
        rec["lower"] = ci.lower(0);
        rec["upper"] = ci.upper(0);
      } catch (const Error& e) {
        rec["error"] = e.what();
      }
      npi.push_back(rec);

      MethodSpec sp;
      sp.method = IntervalMethod::pi;
      sp.h = h;
      sp.kernel = k;
      sp.draws = o.draws;
      sp.estimator = est;
      // common random numbers across multipliers
      PivotLaw pl(sp, f, d.X(), kind, ct.derive("pi", 0), c.workers);
      ConfidenceInterval pci = pl.interval(f, o.alpha);
      pi.push_back({ { "m", ms[j] }, { "h", h }, { "lower", pci.lower(0) }, { "upper", pci.upper(0) } });
    }
    cs["npi"] = npi;
    cs["pi"] = pi;
    cases.push_back(cs);
  }
  json out;
  out["command"] = "darwin";
  out["n"] = d.n();
  out["level"] = 1.0 - o.alpha;
  out["seed"] = seed;
  out["cases"] = cases;
  emit(c, out.dump(2) + "\n");
}

// score

struct ScoreOpts
{
  double h0 = std::numeric_limits<double>::quiet_NaN();
  double h1 = std::numeric_limits<double>::quiet_NaN();
  std::string kernel = "gaussian";
  std::string dist;
};

void
cmd_score(const Common& c, const ScoreOpts& o)
{
  Dataset d = load(c);
  ModelKind kind = parse_model_kind(c.model);
  Estimator est = parse_estimator(c.estimator);
  FitResult f = fit(d, est, kind);
  Eigen::VectorXd a = ancillary(f, kind);
  std::span<const double> pts(a.data(), static_cast<std::size_t>(a.size()));
  double scale = kind == ModelKind::regression_scale ? 1.0 : sample_sd(pts);
  Bandwidths bw = rate_bandwidths(pts.size(), 2, scale);
  if (!std::isnan(o.h0))
    bw.h0 = o.h0;
  if (!std::isnan(o.h1))
    bw.h1 = o.h1;
  bw.trim = default_trim(pts.size(), bw.h0);
  KernelSpec k = parse_kernel(o.kernel);

  json points = json::array();
  for (std::size_t i = 0; i < pts.size(); ++i)
    points.push_back({ { "a", pts[i] }, { "score", score_estimate(pts, i, bw, k) } });
  json out;
  out["command"] = "score";
  out["model"] = to_string(kind);
  out["n"] = d.n();
  out["h0"] = bw.h0;
  out["h1"] = bw.h1;
  out["kernel"] = k.name();
  out["points"] = points;
  out["plugin"] = to_json(plugin_quantities(a, d.X(), bw, k, kind));
  if (!o.dist.empty())
    out["exact"] = to_json(theorem1_quantities(a, d.X(), *parse_density(o.dist), kind));
  emit(c, out.dump(2) + "\n");
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Conditional inference for regression and location-scale models" };
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  Common fit_c, int_c, cov_c, poly_c, dar_c, score_c;

  auto* fit_cmd = app.add_subcommand("fit", "least-squares or median fit with residuals");
  add_common(fit_cmd, fit_c, true, false);

  IntervalOpts iv;
  auto* int_cmd = app.add_subcommand("interval", "confidence intervals by exact, rb, pi or npi");
  add_common(int_cmd, int_c, true, true);
  int_cmd->add_option("--method", iv.method, "exact, rb, pi, pi-oracle or npi")->required();
  int_cmd->add_option("--alpha", iv.alpha, "1 - level")->capture_default_str();
  int_cmd->add_option("--levels", iv.levels, "comma-separated levels (overrides --alpha)");
  int_cmd->add_option("--B", iv.B, "pivot draws (default 5000, rb 1000)");
  int_cmd->add_option("--h", iv.h, "plug-in bandwidth (default normal reference)");
  int_cmd->add_option("--h0", iv.h0, "npi density bandwidth");
  int_cmd->add_option("--h1", iv.h1, "npi derivative bandwidth");
  int_cmd->add_option("--kernel", iv.kernel, "gaussian, quartic or triweight")->capture_default_str();
  int_cmd->add_option("--dist", iv.dist, "true error density, e.g. t(5); npi then uses exact scores");

  CoverageOpts co;
  auto* cov_cmd = app.add_subcommand("coverage", "conditional coverage given a fixed ancillary");
  add_common(cov_cmd, cov_c, true, true);
  cov_cmd->add_option("--method", co.methods, "comma-separated methods")->capture_default_str();
  cov_cmd->add_option("--levels", co.levels, "comma-separated levels")->capture_default_str();
  cov_cmd->add_option("--R", co.R, "conditional replicates")->capture_default_str();
  cov_cmd->add_option("--B", co.iv.B, "pivot draws per method");
  cov_cmd->add_option("--h", co.iv.h, "plug-in bandwidth");
  cov_cmd->add_option("--h0", co.iv.h0, "npi density bandwidth");
  cov_cmd->add_option("--h1", co.iv.h1, "npi derivative bandwidth");
  cov_cmd->add_option("--kernel", co.iv.kernel, "kernel")->capture_default_str();
  cov_cmd->add_option("--dist", co.iv.dist, "true error density")->required();
  cov_cmd->add_option("--n", co.n, "sample size of a seeded ancillary")->capture_default_str();
  cov_cmd->add_option("--ancillary-dist", co.ancillary_dist, "density of the seeded ancillary sample")
    ->capture_default_str();
  cov_cmd->add_option("--ancillary-seed", co.ancillary_seed, "seed of the ancillary sample (default --seed)");
  cov_cmd->add_option("--outlier", co.outlier, "move the largest residual to this size");
  cov_cmd->add_option("--beta", co.beta, "true coefficient")->capture_default_str();
  cov_cmd->add_option("--sigma", co.sigma, "true scale")->capture_default_str();
  cov_cmd->add_option("--format", co.format, "json or csv")->capture_default_str();

  PolyOpts po;
  auto* poly_cmd = app.add_subcommand("polysample", "conditional MSE table of compromise estimators");
  add_common(poly_cmd, poly_c, true, true);
  poly_cmd->add_option("--confrontation", po.confrontations, "subset of i,ii,iii")->capture_default_str();
  poly_cmd->add_option("--C", po.C, "constants of (ii), h = C n^(-1/9)")->capture_default_str();
  poly_cmd->add_option("--ha", po.ha, "first bandwidth of (iii)")->capture_default_str();
  poly_cmd->add_option("--hb", po.hb, "second bandwidth of (iii)")->capture_default_str();
  poly_cmd->add_option("--dist", po.dists, "true error densities")->capture_default_str();
  poly_cmd->add_option("--R", po.R, "conditional replicates")->capture_default_str();
  poly_cmd->add_option("--n", po.n, "sample size of the seeded ancillary")->capture_default_str();
  poly_cmd->add_option("--ancillary-dist", po.ancillary_dist, "density of the seeded ancillary sample")
    ->capture_default_str();
  poly_cmd->add_option("--ancillary-seed", po.ancillary_seed, "seed of the ancillary sample (default 1)");
  poly_cmd->add_option("--prices", po.prices, "shadow prices P_F,P_G for bioptimal rows");
  poly_cmd->add_flag("--location-only", po.location_only, "V(Y) = beta_hat + v with raw residuals");
  poly_cmd->add_option("--kernel", po.kernel, "kernel")->capture_default_str();
  poly_cmd->add_option("--format", po.format, "csv or json")->capture_default_str();

  DarwinOpts dopts;
  auto* dar_cmd = app.add_subcommand("darwin", "RB, NPI and PI intervals for a 15-point sample");
  add_common(dar_cmd, dar_c, true, true);
  dar_cmd->add_option("--B", dopts.B, "bootstrap resamples")->capture_default_str();
  dar_cmd->add_option("--draws", dopts.draws, "PI pivot draws")->capture_default_str();
  dar_cmd->add_option("--multipliers", dopts.multipliers, "bandwidth multipliers")->capture_default_str();
  dar_cmd->add_option("--alpha", dopts.alpha, "1 - level")->capture_default_str();
  dar_cmd->add_option("--kernel", dopts.kernel, "kernel")->capture_default_str();

  ScoreOpts so;
  auto* score_cmd = app.add_subcommand("score", "plug-in score estimates and conditional-normal quantities");
  add_common(score_cmd, score_c, true, false);
  score_cmd->add_option("--h0", so.h0, "density bandwidth (default rate rule)");
  score_cmd->add_option("--h1", so.h1, "derivative bandwidth (default rate rule)");
  score_cmd->add_option("--kernel", so.kernel, "kernel")->capture_default_str();
  score_cmd->add_option("--dist", so.dist, "density for the exact-score quantities");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit_cmd)
      cmd_fit(fit_c);
    else if (*int_cmd)
      cmd_interval(int_c, iv);
    else if (*cov_cmd)
      cmd_coverage(cov_c, co);
    else if (*poly_cmd)
      cmd_polysample(poly_c, po);
    else if (*dar_cmd)
      cmd_darwin(dar_c, dopts);
    else if (*score_cmd)
      cmd_score(score_c, so);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
