#include "condinf/polysampling.hpp"

#include "condinf/error.hpp"
#include "condinf/intervals.hpp"
#include "condinf/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace condinf {

CmseQuadratic
cmse_quadratic(const DensityPtr& F,
               const Eigen::VectorXd& anc,
               const Eigen::MatrixXd& X,
               double sigma,
               bool location_only)
{
  if (X.cols() != 1)
    fail(ErrorKind::dimension_too_high, "polysampling supports p = 1");
  if (!(sigma > 0.0))
    fail(ErrorKind::invalid_argument, "sigma must be positive");
  CmseQuadratic q;
  q.tag = F->name();
  if (location_only) {
    ConditionalLaw law(LawKind::u_given_atilde, anc, X, F);
    auto [m1, m2] = pivot_moments_u(law);
    q.v_star = -m1;
    q.c = 1.0;
    q.K = std::max(m2 - m1 * m1, 0.0);
    return q;
  }
  ConditionalLaw law(LawKind::st_given_a, anc, X, F);
  ConditionalMoments m = conditional_moments(law);
  double s2 = sigma * sigma;
  q.v_star = -m.e_s2t / m.e_s2;
  q.c = s2 * m.e_s2;
  q.K = std::max(s2 * (m.e_s2t2 - m.e_s2t * m.e_s2t / m.e_s2), 0.0);
  return q;
}

double
realize(double v, const FitResult& fit, bool location_only)
{
  if (fit.beta_hat.size() != 1)
    fail(ErrorKind::dimension_too_high, "polysampling supports p = 1");
  return fit.beta_hat(0) + (location_only ? v : fit.sigma_hat * v);
}

EquivariantEstimate
pitman_estimate(const DensityPtr& F,
                const FitResult& fit,
                const Eigen::MatrixXd& X,
                bool location_only)
{
  ModelKind kind = location_only ? ModelKind::regression : ModelKind::regression_scale;
  CmseQuadratic q = cmse_quadratic(F, ancillary(fit, kind), X, 1.0, location_only);
  EquivariantEstimate e;
  e.v = q.v_star;
  e.value = realize(e.v, fit, location_only);
  e.method = "pitman(" + F->name() + ")";
  return e;
}

EquivariantEstimate
bioptimal(const CmseQuadratic& qF, const CmseQuadratic& qG, double P_F, double P_G)
{
  if (!(P_F > 0.0) || !(P_G > 0.0))
    fail(ErrorKind::invalid_argument, "shadow prices must be positive");
  EquivariantEstimate e;
  double wf = P_F * qF.c;
  double wg = P_G * qG.c;
  e.v = (wf * qF.v_star + wg * qG.v_star) / (wf + wg);
  e.method = "bioptimal";
  return e;
}

EquivariantEstimate
minimax(const CmseQuadratic& qF, const CmseQuadratic& qG)
{
  if (!(qF.c > 0.0) || !(qG.c > 0.0))
    fail(ErrorKind::invalid_argument, "cMSE curvatures must be positive");
  auto worst = [&](double v) { return std::max(qF(v), qG(v)); };
  auto diff = [&](double v) { return qF(v) - qG(v); };

  struct Candidate
  {
    double v;
    const char* kind;
  };
  std::vector<Candidate> cands{ { qF.v_star, "vertex" }, { qG.v_star, "vertex" } };
  // qF - qG = A v^2 + B v + C
  double A = qF.c - qG.c;
  double B = -2.0 * (qF.c * qF.v_star - qG.c * qG.v_star);
  double C = qF.c * qF.v_star * qF.v_star - qG.c * qG.v_star * qG.v_star + qF.K - qG.K;
  double scale = std::max(qF.c, qG.c);
  std::vector<double> roots;
  if (std::abs(A) <= 1e-14 * scale) {
    if (B != 0.0)
      roots.push_back(-C / B);
  } else {
    double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      double sq = std::sqrt(disc);
      double qq = -0.5 * (B + std::copysign(sq, B));
      if (qq != 0.0) {
        roots.push_back(qq / A);
        roots.push_back(C / qq);
      } else {
        roots.push_back(0.0);
      }
    }
  }
  for (double r : roots) {
    // one Newton step on qF - qG tightens the equalization
    double slope = 2.0 * A * r + B;
    if (slope != 0.0 && std::isfinite(slope))
      r -= diff(r) / slope;
    if (std::isfinite(r))
      cands.push_back({ r, "intersection" });
  }
  Candidate best = cands.front();
  double best_val = worst(best.v);
  for (const auto& c : cands) {
    double w = worst(c.v);
    if (w < best_val) {
      best = c;
      best_val = w;
    }
  }
  EquivariantEstimate e;
  e.v = best.v;
  e.method = std::string("minimax-") + best.kind;
  return e;
}

const char*
to_string(ConfrontationKind k)
{
  switch (k) {
    case ConfrontationKind::normal_vs_slash:
      return "i";
    case ConfrontationKind::ls_vs_pi:
      return "ii";
    case ConfrontationKind::bandwidth_pair:
      return "iii";
    case ConfrontationKind::custom:
      return "custom";
  }
  return "unknown";
}

ConfrontationKind
parse_confrontation(const std::string& s)
{
  if (s == "i" || s == "1" || s == "normal-slash")
    return ConfrontationKind::normal_vs_slash;
  if (s == "ii" || s == "2" || s == "ls-pi")
    return ConfrontationKind::ls_vs_pi;
  if (s == "iii" || s == "3" || s == "bandwidths")
    return ConfrontationKind::bandwidth_pair;
  fail(ErrorKind::parse_error, "unknown confrontation '" + s + "'");
}

std::string
Confrontation::label() const
{
  return to_string(kind);
}

namespace {

std::string
fmt(double x)
{
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

} // namespace

Confrontation
build_confrontation(ConfrontationKind kind,
                    const ConfrontationParams& params,
                    const Eigen::VectorXd& anc)
{
  Confrontation c;
  c.kind = kind;
  c.prices = params.prices;
  if (params.prices && (!(params.prices->first > 0.0) || !(params.prices->second > 0.0)))
    fail(ErrorKind::invalid_argument, "shadow prices must be positive");
  const double n = static_cast<double>(anc.size());
  auto check_h = [](double h) {
    if (!(h > 0.0) || !std::isfinite(h))
      fail(ErrorKind::bad_bandwidth, "bandwidth must be positive and finite");
  };
  switch (kind) {
    case ConfrontationKind::normal_vs_slash:
      c.F = std::make_shared<NormalDensity>();
      c.G = std::make_shared<SlashDensity>();
      c.params = "normal/slash";
      break;
    case ConfrontationKind::ls_vs_pi: {
      double h = params.C * std::pow(n, -1.0 / 9.0);
      check_h(h);
      c.F = std::make_shared<NormalDensity>();
      c.G = plugin_density(anc, h, params.kernel);
      c.params = "C=" + fmt(params.C) + ";h=" + fmt(h);
      break;
    }
    case ConfrontationKind::bandwidth_pair:
      check_h(params.h_a);
      check_h(params.h_b);
      if (params.h_a == params.h_b)
        fail(ErrorKind::invalid_argument, "a confrontation needs two different densities");
      c.F = plugin_density(anc, params.h_a, params.kernel);
      c.G = plugin_density(anc, params.h_b, params.kernel);
      c.params = "ha=" + fmt(params.h_a) + ";hb=" + fmt(params.h_b);
      break;
    case ConfrontationKind::custom:
      fail(ErrorKind::invalid_argument, "custom confrontations are built directly");
  }
  return c;
}

ConfrontationRules
confrontation_rules(const Confrontation& c,
                    const Eigen::VectorXd& anc,
                    const Eigen::MatrixXd& X,
                    bool location_only)
{
  if (!c.F || !c.G)
    fail(ErrorKind::invalid_argument, "confrontation needs two densities");
  if (c.F == c.G || c.F->name() == c.G->name())
    fail(ErrorKind::invalid_argument, "a confrontation needs two different densities");
  ConfrontationRules r;
  r.qF = cmse_quadratic(c.F, anc, X, 1.0, location_only);
  r.qG = cmse_quadratic(c.G, anc, X, 1.0, location_only);
  r.minimax = minimax(r.qF, r.qG);
  if (c.prices)
    r.bioptimal = bioptimal(r.qF, r.qG, c.prices->first, c.prices->second);
  return r;
}

std::vector<CmseRow>
cmse_simulation(const std::vector<RuleSpec>& rules,
                const Eigen::VectorXd& anc,
                const Eigen::MatrixXd& X,
                const DensityPtr& true_density,
                std::size_t R,
                std::uint64_t seed,
                int workers,
                bool location_only)
{
  if (X.cols() != 1)
    fail(ErrorKind::dimension_too_high, "polysampling supports p = 1");
  if (R < 2)
    fail(ErrorKind::invalid_argument, "R must be at least 2");
  const ModelKind kind = location_only ? ModelKind::regression : ModelKind::regression_scale;
  ConditionalLaw law(law_kind_for(kind), anc, X, true_density);
  ConditionalGenerator gen(law);
  const Eigen::VectorXd beta = Eigen::VectorXd::Zero(1);
  SeedTree tree(seed);

  const std::size_t M = rules.size();
  std::vector<double> sq(R * M, std::numeric_limits<double>::quiet_NaN());
  parallel_for(R, workers, [&](std::size_t r) {
    Stream stream = tree.derive("rep", r).stream();
    Dataset d = gen.draw(beta, 1.0, stream);
    FitResult f;
    try {
      f = fit_least_squares(d, kind);
    } catch (const Error&) {
      return;
    }
    for (std::size_t m = 0; m < M; ++m) {
      double e = realize(rules[m].v, f, location_only);
      sq[r * M + m] = e * e;
    }
  });

  std::vector<CmseRow> rows;
  for (std::size_t m = 0; m < M; ++m) {
    double sum = 0.0, sum2 = 0.0;
    std::size_t used = 0;
    for (std::size_t r = 0; r < R; ++r) {
      double v = sq[r * M + m];
      if (std::isnan(v))
        continue;
      sum += v;
      sum2 += v * v;
      ++used;
    }
    CmseRow row;
    row.confrontation = rules[m].confrontation;
    row.params = rules[m].params;
    row.error_dist = true_density->name();
    row.n = X.rows();
    row.R = R;
    row.seed = seed;
    row.v = rules[m].v;
    row.failures = R - used;
    double u = static_cast<double>(used);
    row.cmse = used > 0 ? sum / u : std::numeric_limits<double>::quiet_NaN();
    row.mc_se = used > 1 ? std::sqrt(std::max(sum2 / u - row.cmse * row.cmse, 0.0) / (u - 1.0))
                         : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  return rows;
}

Eigen::VectorXd
seeded_ancillary(const DensityPtr& density, Eigen::Index n, std::uint64_t seed, ModelKind kind)
{
  Stream stream = SeedTree(seed).derive("ancillary", 0).stream();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i)
    y(i) = density->sample_one(stream);
  Dataset d(location_design(n), y);
  return ancillary(fit_least_squares(d, kind), kind);
}

} // namespace condinf
