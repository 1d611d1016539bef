#include <doctest.h>

#include "condinf/error.hpp"
#include "condinf/polysampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

using namespace condinf;

namespace {

Eigen::VectorXd
location_ancillary(const char* dist, Eigen::Index n, std::uint64_t seed)
{
  return seeded_ancillary(parse_density(dist), n, seed);
}

CmseQuadratic
quad(double K, double c, double v)
{
  CmseQuadratic q;
  q.K = K;
  q.c = c;
  q.v_star = v;
  return q;
}

//! argmin over an evenly spaced grid of `points` values on [lo, hi]
template<class F>
std::pair<double, double>
grid_min(F f, double lo, double hi, int points = 100001)
{
  double best = std::numeric_limits<double>::infinity(), arg = lo;
  for (int i = 0; i < points; ++i) {
    double v = lo + (hi - lo) * i / (points - 1.0);
    double val = f(v);
    if (val < best) {
      best = val;
      arg = v;
    }
  }
  return { arg, best };
}

//! grid argmin refined by golden section on the bracketing cells
template<class F>
double
refined_min(F f, double lo, double hi)
{
  double step = (hi - lo) / 100000.0;
  double arg = grid_min(f, lo, hi).first;
  double a = arg - step, b = arg + step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) < f(d))
      b = d;
    else
      a = c;
  }
  return 0.5 * (a + b);
}

} // namespace

TEST_CASE("cmse quadratic of the normal law")
{
  Eigen::VectorXd a = location_ancillary("normal", 15, 1);
  Eigen::MatrixXd X = location_design(15);
  CmseQuadratic q = cmse_quadratic(parse_density("normal"), a, X);
  CHECK(std::abs(q.v_star) < 1e-6);
  CHECK(q.c > 0.0);

  CmseQuadratic q2 = cmse_quadratic(parse_density("normal"), a, X, 2.0);
  CHECK(q2.K == doctest::Approx(4 * q.K).epsilon(1e-12));
  CHECK(q2.c == doctest::Approx(4 * q.c).epsilon(1e-12));
  CHECK(q2.v_star == doctest::Approx(q.v_star).epsilon(1e-12));

  Eigen::VectorXd b = location_ancillary("t(5)", 15, 2);
  ConditionalLaw law(LawKind::st_given_a, b, X, parse_density("t(5)"));
  ConditionalMoments m = conditional_moments(law);
  CmseQuadratic qt = cmse_quadratic(parse_density("t(5)"), b, X);
  auto cmse = [&](double v) { return m.e_s2t2 + 2 * v * m.e_s2t + v * v * m.e_s2; };
  CHECK(std::abs(grid_min(cmse, -2.0, 2.0).second - qt.K) < 1e-5);
  for (double v : { -0.5, 0.1, 0.7 })
    CHECK(qt(v) == doctest::Approx(cmse(v)).epsilon(1e-10));

  Eigen::MatrixXd X2(15, 2);
  X2.col(0).setOnes();
  X2.col(1).setLinSpaced(-1, 1);
  CHECK_THROWS_AS(cmse_quadratic(parse_density("normal"), b, X2), Error);
}

TEST_CASE("Pitman estimates")
{
  Eigen::MatrixXd X = location_design(15);
  std::vector<double> e = parse_density("normal")->sample(15, 3);
  Dataset d(X, Eigen::Map<Eigen::VectorXd>(e.data(), 15));
  FitResult f = fit_least_squares(d);
  EquivariantEstimate p = pitman_estimate(parse_density("normal"), f, X);
  REQUIRE(p.value);
  CHECK(*p.value == doctest::Approx(f.beta_hat(0)).epsilon(1e-6));
  CHECK(*p.value == realize(p.v, f));

  Eigen::VectorXd a = location_ancillary("t(5)", 15, 4);
  double v = cmse_quadratic(parse_density("t(5)"), a, X).v_star;
  double w = cmse_quadratic(parse_density("t(5)"), -a, X).v_star;
  CHECK(w == doctest::Approx(-v).epsilon(1e-6));

  // Monte Carlo ratio with a delta-method standard error
  ConditionalLaw law(LawKind::st_given_a, a, X, parse_density("t(5)"));
  Stream s(5);
  const std::size_t N = 200000;
  LawDraws draws = sample_law(law, N, s, SampleMethod::grid_inverse_cdf);
  Eigen::ArrayXd s2 = draws.s.array().square();
  Eigen::ArrayXd s2t = s2 * draws.pivot.col(0).array();
  double m1 = s2.mean(), m2 = s2t.mean();
  double ratio = -m2 / m1;
  Eigen::ArrayXd infl = (s2t - m2) / m1 - (m2 / (m1 * m1)) * (s2 - m1);
  double se = std::sqrt(infl.square().sum() / (N - 1.0) / N);
  CHECK(std::abs(ratio - v) < 3 * se);
}

TEST_CASE("bioptimal rule")
{
  EquivariantEstimate b = bioptimal(quad(0, 1, 0), quad(0, 1, 2));
  CHECK(b.v == doctest::Approx(1.0));
  EquivariantEstimate lim = bioptimal(quad(0.3, 1.2, 0.4), quad(0.1, 2.0, -1.0), 1.0, 1e-12);
  CHECK(lim.v == doctest::Approx(0.4).epsilon(1e-9));
  CHECK_THROWS_AS(bioptimal(quad(0, 1, 0), quad(0, 1, 1), 0.0, 1.0), Error);

  Stream s(6);
  for (int i = 0; i < 100; ++i) {
    CmseQuadratic f = quad(s.uniform(), 0.1 + 3 * s.uniform(), 2 * s.uniform() - 1);
    CmseQuadratic g = quad(s.uniform(), 0.1 + 3 * s.uniform(), 2 * s.uniform() - 1);
    double pf = 0.1 + s.uniform(), pg = 0.1 + s.uniform();
    double v = bioptimal(f, g, pf, pg).v;
    double oracle = refined_min([&](double x) { return pf * f(x) + pg * g(x); }, -1.5, 1.5);
    CHECK(std::abs(v - oracle) < 1e-6);
    CHECK(v >= std::min(f.v_star, g.v_star) - 1e-15);
    CHECK(v <= std::max(f.v_star, g.v_star) + 1e-15);
  }
}

TEST_CASE("minimax rule")
{
  CmseQuadratic q = quad(0.2, 1.5, 0.3);
  CHECK(minimax(q, q).v == doctest::Approx(0.3));

  CmseQuadratic f = quad(0, 1, 0), g = quad(0, 100, 0.1);
  EquivariantEstimate m = minimax(f, g);
  CHECK(m.v == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
  CHECK(f(m.v) == doctest::Approx(1.0 / 121.0).epsilon(1e-12));
  CHECK(std::abs(f(m.v) - g(m.v)) < 1e-9);
  auto grid = grid_min([&](double v) { return std::max(f(v), g(v)); }, -1.0, 1.0);
  CHECK(std::abs(grid.first - m.v) < 1e-4);
  CHECK(m.method == "minimax-intersection");

  CmseQuadratic big = quad(100.0, 1.0, 0.5);
  EquivariantEstimate dom = minimax(big, quad(0.0, 2.0, -0.2));
  CHECK(dom.v == doctest::Approx(0.5));
  CHECK(big(dom.v) == doctest::Approx(100.0));
  CHECK(dom.method == "minimax-vertex");

  Stream s(7);
  for (int i = 0; i < 100; ++i) {
    CmseQuadratic a = quad(s.uniform(), 0.1 + 3 * s.uniform(), 2 * s.uniform() - 1);
    CmseQuadratic b = quad(s.uniform(), 0.1 + 3 * s.uniform(), 2 * s.uniform() - 1);
    EquivariantEstimate r = minimax(a, b);
    auto worst = [&](double v) { return std::max(a(v), b(v)); };
    double oracle = refined_min(worst, -1.5, 1.5);
    CHECK(std::abs(r.v - oracle) < 1e-6);
    if (r.method == "minimax-intersection")
      CHECK(std::abs(a(r.v) - b(r.v)) < 1e-9);
    for (int k = 0; k <= 1000; ++k) {
      double v = -2.0 + 4.0 * k / 1000.0;
      CHECK(worst(v) >= worst(r.v) - 1e-9);
    }
    CHECK(a(r.v) <= a(b.v_star) + 1e-12);
    CHECK(b(r.v) <= b(a.v_star) + 1e-12);
  }
}

TEST_CASE("confrontations")
{
  Eigen::VectorXd a = location_ancillary("normal", 15, 8);
  ConfrontationParams p;
  p.h_a = p.h_b = 0.5;
  CHECK_THROWS_AS(build_confrontation(ConfrontationKind::bandwidth_pair, p, a), Error);

  ConfrontationParams c;
  c.C = 1.0;
  Confrontation ii = build_confrontation(ConfrontationKind::ls_vs_pi, c, a);
  auto g = std::dynamic_pointer_cast<const PluginDensity>(ii.G);
  REQUIRE(g);
  CHECK(g->bandwidth() == doctest::Approx(0.7401).epsilon(1e-4));
  CHECK(g->bandwidth() == doctest::Approx(std::pow(15.0, -1.0 / 9.0)).epsilon(1e-14));
  CHECK(ii.F->name() == "normal");

  Confrontation i = build_confrontation(ConfrontationKind::normal_vs_slash, {}, a);
  CHECK(i.F->name() == "normal");
  CHECK(i.G->name() == "slash");
  CHECK(parse_confrontation("iii") == ConfrontationKind::bandwidth_pair);
  CHECK(parse_confrontation("1") == ConfrontationKind::normal_vs_slash);

  ConfrontationParams bad;
  bad.C = -1.0;
  CHECK_THROWS_AS(build_confrontation(ConfrontationKind::ls_vs_pi, bad, a), Error);

  ConfrontationRules rules = confrontation_rules(i, a, location_design(15));
  CHECK(std::abs(rules.minimax.v - minimax(rules.qF, rules.qG).v) < 1e-15);
}

TEST_CASE("least squares cMSE by simulation")
{
  Eigen::VectorXd a = location_ancillary("normal", 15, 9);
  Eigen::MatrixXd X = location_design(15);
  CmseQuadratic q = cmse_quadratic(parse_density("normal"), a, X);
  std::vector<RuleSpec> rules{ { "LS", "", 0.0 } };
  std::vector<CmseRow> rows = cmse_simulation(rules, a, X, parse_density("normal"), 20000, 10);
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(rows[0].cmse - q(0.0)) < 3 * rows[0].mc_se);
  CHECK(rows[0].failures == 0);

  // worker count does not change the result
  std::vector<CmseRow> par = cmse_simulation(rules, a, X, parse_density("normal"), 20000, 10, 3);
  CHECK(par[0].cmse == rows[0].cmse);
}

TEST_CASE("location-only variant")
{
  Eigen::VectorXd a = seeded_ancillary(parse_density("t(5)"), 15, 11, ModelKind::regression);
  Eigen::MatrixXd X = location_design(15);
  CmseQuadratic q = cmse_quadratic(parse_density("t(5)"), a, X, 1.0, true);
  ConditionalLaw law(LawKind::u_given_atilde, a, X, parse_density("t(5)"));
  auto [m1, m2] = pivot_moments_u(law);
  CHECK(q.v_star == doctest::Approx(-m1).epsilon(1e-12));
  CHECK(q.c == 1.0);
  CHECK(q.K == doctest::Approx(m2 - m1 * m1).epsilon(1e-12));
}
