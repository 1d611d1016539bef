#include <doctest.h>

#include "condinf/bootstrap.hpp"
#include "condinf/error.hpp"
#include "oracle.hpp"

#include <boost/math/distributions/normal.hpp>
#include <algorithm>
#include <cmath>
#include <set>

using namespace condinf;

namespace {

std::vector<double>
column(const PivotDraws& d, Eigen::Index j = 0)
{
  return std::vector<double>(d.draws.col(j).data(), d.draws.col(j).data() + d.draws.rows());
}

Dataset
seeded_location(const char* dist, Eigen::Index n, std::uint64_t seed)
{
  std::vector<double> e = parse_density(dist)->sample(static_cast<std::size_t>(n), seed);
  return Dataset(location_design(n), Eigen::Map<Eigen::VectorXd>(e.data(), n));
}

double
variance(const std::vector<double>& x)
{
  double m = 0.0;
  for (double v : x)
    m += v;
  m /= x.size();
  double s = 0.0;
  for (double v : x)
    s += (v - m) * (v - m);
  return s / (x.size() - 1);
}

} // namespace

TEST_CASE("symmetrized empirical law")
{
  SymmetrizedEmpirical one({ 1.0 });
  CHECK(one.atoms() == std::vector<double>{ -1.0, 1.0 });
  CHECK(one.cdf(-1.0) == 0.5);
  CHECK(one.cdf(0.0) == 0.5);
  CHECK(one.cdf(1.0) == 1.0);
  CHECK(one.mean() == 0.0);

  std::vector<double> r{ 0.3, -1.2, 2.5, 0.0, 0.7 };
  SymmetrizedEmpirical law(r);
  Stream s(1);
  std::vector<double> x;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < 100000; ++i) {
    x.push_back(law.sample_one(s));
    sum += x.back();
    sq += x.back() * x.back();
  }
  double sd = std::sqrt(sq / 1e5);
  CHECK(std::abs(sum / 1e5) < 3 * sd / std::sqrt(1e5));

  // discrete KS: compare the two step functions at every atom
  std::sort(x.begin(), x.end());
  double ks = 0.0;
  for (double a : law.atoms()) {
    double emp = static_cast<double>(std::upper_bound(x.begin(), x.end(), a) - x.begin()) / x.size();
    double exact = 0.0;
    for (double v : r)
      exact += (v <= a) + (-v <= a);
    exact /= 2.0 * r.size();
    ks = std::max(ks, std::abs(emp - exact));
  }
  CHECK(ks < 0.01);
}

TEST_CASE("residual bootstrap")
{
  Dataset d = seeded_location("normal", 100, 2);
  FitResult f = fit_least_squares(d);
  PivotDraws a = residual_bootstrap(f, d.X(), 1, SeedTree(3), ModelKind::regression_scale);
  PivotDraws b = residual_bootstrap(f, d.X(), 1, SeedTree(3), ModelKind::regression_scale);
  CHECK(a.draws(0, 0) == b.draws(0, 0));
  CHECK(a.provenance == Provenance::residual_bootstrap);

  PivotDraws boot = residual_bootstrap(f, d.X(), 2000, SeedTree(4), ModelKind::regression_scale);
  PivotDraws exact =
    exact_unconditional(NormalDensity(), d.X(), 2000, SeedTree(5), ModelKind::regression_scale);
  CHECK(oracle::ks_two_sample(column(boot), column(exact)) < 0.05);

  // the draws do not depend on the worker count
  PivotDraws par = residual_bootstrap(f, d.X(), 2000, SeedTree(4), ModelKind::regression_scale,
                                      Estimator::least_squares, 3);
  CHECK(par.draws == boot.draws);
}

TEST_CASE("bootstrap support comes from the signed residuals")
{
  Eigen::VectorXd y(5);
  y << -1, -1, -1, -1, 4;
  Dataset d(location_design(5), y);
  FitResult f = fit_least_squares(d, ModelKind::regression);
  PivotDraws u = residual_bootstrap(f, d.X(), 4000, SeedTree(6), ModelKind::regression);
  bool double_outlier = false;
  for (double v : column(u)) {
    double k = 5.0 * v;
    CHECK(std::abs(k - std::round(k)) < 1e-9);
    double_outlier = double_outlier || std::abs(k) >= 8.0 - 1e-9;
  }
  CHECK(double_outlier);
}

TEST_CASE("exact unconditional draws")
{
  Eigen::MatrixXd X = location_design(20);
  PivotDraws u = exact_unconditional(NormalDensity(), X, 5000, SeedTree(7), ModelKind::regression);
  double sd = 1.0 / std::sqrt(20.0);
  auto cdf = [&](double v) { return boost::math::cdf(boost::math::normal(), v / sd); };
  CHECK(oracle::ks_statistic(column(u), cdf) < 0.03);
  CHECK(u.provenance == Provenance::exact_unconditional);

  PivotDraws shifted = exact_unconditional(NormalDensity(), X, 5000, SeedTree(7), ModelKind::regression,
                                           Estimator::least_squares, Eigen::VectorXd::Constant(1, 7.0));
  CHECK((shifted.draws - u.draws).cwiseAbs().maxCoeff() < 1e-12);

  StudentTDensity t5(5);
  Eigen::MatrixXd X15 = location_design(15);
  PivotDraws small = exact_unconditional(t5, X15, 5000, SeedTree(8), ModelKind::regression_scale);
  PivotDraws ref = exact_unconditional(t5, X15, 100000, SeedTree(9), ModelKind::regression_scale);
  CHECK(variance(column(small)) == doctest::Approx(variance(column(ref))).epsilon(0.10));

  PivotDraws med = exact_unconditional(t5, X15, 500, SeedTree(10), ModelKind::regression_scale,
                                       Estimator::median);
  CHECK(med.count() == 500);
}

TEST_CASE("bootstrap needs a nondegenerate fit")
{
  FitResult f;
  f.beta_hat = Eigen::VectorXd::Zero(1);
  f.sigma_hat = 0.0;
  f.residuals_raw = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(residual_bootstrap(f, location_design(4), 10, SeedTree(1), ModelKind::regression_scale),
                  Error);
}
