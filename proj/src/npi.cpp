#include "condinf/npi.hpp"

#include "condinf/error.hpp"

#include <cmath>
#include <span>

namespace condinf {

const char*
to_string(ScoreSource s)
{
  return s == ScoreSource::exact_score ? "exact_score" : "plugin_score";
}

namespace {

void
check_shapes(const Eigen::VectorXd& a, const Eigen::MatrixXd& X)
{
  if (a.size() != X.rows())
    fail(ErrorKind::invalid_argument, "ancillary length does not match X");
  if (a.size() < 2)
    fail(ErrorKind::invalid_argument, "need at least two residuals");
}

ConditionalNormalSummary
assemble(const Eigen::VectorXd& a,
         const Eigen::MatrixXd& X,
         const Eigen::VectorXd& l1,
         const Eigen::VectorXd& l2,
         ModelKind kind)
{
  const double n = static_cast<double>(a.size());
  ConditionalNormalSummary s;
  s.n = a.size();
  s.kind = kind;
  s.info = X.transpose() * X * (l1.squaredNorm() / (n * n));
  s.theta = X.transpose() * l1 / std::sqrt(n);
  double j = 0.0;
  double psi = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    j += a(i) * l1(i) + a(i) * a(i) * l2(i);
    psi += a(i) * l1(i) + 1.0;
  }
  s.scale_info = -j / n;
  s.scale_theta = psi / std::sqrt(n);
  return s;
}

} // namespace

ConditionalNormalSummary
theorem1_quantities(const Eigen::VectorXd& ancillary,
                    const Eigen::MatrixXd& X,
                    const ScoreFunction& score1,
                    const ScoreFunction& score2,
                    ModelKind kind)
{
  check_shapes(ancillary, X);
  Eigen::VectorXd l1(ancillary.size());
  Eigen::VectorXd l2(ancillary.size());
  for (Eigen::Index i = 0; i < ancillary.size(); ++i) {
    l1(i) = score1(ancillary(i));
    l2(i) = score2(ancillary(i));
    if (!std::isfinite(l1(i)))
      fail(ErrorKind::score_singularity,
           "score is not finite at residual " + std::to_string(i));
  }
  return assemble(ancillary, X, l1, l2, kind);
}

ConditionalNormalSummary
theorem1_quantities(const Eigen::VectorXd& ancillary,
                    const Eigen::MatrixXd& X,
                    const ErrorDensity& density,
                    ModelKind kind)
{
  auto guarded = [&](double z, int order) {
    try {
      return density.score(z, order);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::unsupported_point)
        return std::numeric_limits<double>::quiet_NaN();
      throw;
    }
  };
  return theorem1_quantities(
    ancillary, X, [&](double z) { return guarded(z, 1); },
    [&](double z) { return guarded(z, 2); }, kind);
}

double
rate_delta1(std::size_t n, double h0, double h1, int q)
{
  return std::pow(h0, q) + std::pow(h1, q) +
         (std::pow(h0, -0.5) + std::pow(h1, -1.5)) / std::sqrt(static_cast<double>(n));
}

double
rate_delta2(std::size_t n, double h0, double h1, int q)
{
  return std::pow(h0, q) + std::pow(h1, q) +
         (std::pow(h0, -1.5) + std::pow(h1, -2.5)) / std::sqrt(static_cast<double>(n));
}

ConditionalNormalSummary
plugin_quantities(const Eigen::VectorXd& ancillary,
                  const Eigen::MatrixXd& X,
                  const Bandwidths& bw,
                  const KernelSpec& k,
                  ModelKind kind,
                  int q)
{
  check_shapes(ancillary, X);
  if (ancillary.size() < 3)
    fail(ErrorKind::invalid_argument, "plug-in quantities need n >= 3");
  if (!(bw.h0 > 0.0) || !(bw.h1 > 0.0) || !std::isfinite(bw.h0) || !std::isfinite(bw.h1))
    fail(ErrorKind::bad_bandwidth, "bandwidths must be positive and finite");
  const std::size_t n = static_cast<std::size_t>(ancillary.size());
  std::span<const double> pts(ancillary.data(), n);
  const double trim = std::max(bw.trim, 0.0);

  Eigen::VectorXd l1(ancillary.size());
  Eigen::VectorXd l2(ancillary.size());
  for (std::size_t i = 0; i < n; ++i) {
    l1(static_cast<Eigen::Index>(i)) = score_estimate(pts, i, bw, k);
    auto second = [&](double z) {
      double f = std::max(kde_loo(pts, i, bw.h0, k, 0, z), trim);
      if (!(f > 0.0))
        return 0.0;
      double r1 = kde_loo(pts, i, bw.h1, k, 1, z) / f;
      double r2 = kde_loo(pts, i, bw.h1, k, 2, z) / f;
      return r2 - r1 * r1;
    };
    double a = pts[i];
    l2(static_cast<Eigen::Index>(i)) = 0.5 * (second(a) + second(-a));
  }
  ConditionalNormalSummary s = assemble(ancillary, X, l1, l2, kind);
  s.source = ScoreSource::plugin_score;
  s.delta1 = rate_delta1(n, bw.h0, bw.h1, q);
  s.delta2 = rate_delta2(n, bw.h0, bw.h1, q);

  const double nd = static_cast<double>(n);
  if (nd * std::pow(bw.h0, 3) < 1.0)
    s.warnings.push_back("n h0^3 < 1: density bandwidth too small for the sample size");
  if (nd * std::pow(bw.h1, 5) < 1.0)
    s.warnings.push_back("n h1^5 < 1: derivative bandwidth too small for the sample size");
  double scale = kind == ModelKind::regression_scale ? 1.0 : sample_sd(pts);
  if (bw.h0 >= scale || bw.h1 >= scale)
    s.warnings.push_back("bandwidth not small relative to the residual scale");
  return s;
}

NormalApprox
NormalApprox::to_pivot_scale() const
{
  if (!root_n_scaled)
    return *this;
  NormalApprox out = *this;
  double r = std::sqrt(static_cast<double>(n));
  out.mean = mean / r;
  out.cov = cov / static_cast<double>(n);
  out.root_n_scaled = false;
  return out;
}

NormalApprox
NormalApprox::to_root_n_scale() const
{
  if (root_n_scaled)
    return *this;
  NormalApprox out = *this;
  double r = std::sqrt(static_cast<double>(n));
  out.mean = mean * r;
  out.cov = cov * static_cast<double>(n);
  out.root_n_scaled = true;
  return out;
}

NormalApprox
normal_approx(const ConditionalNormalSummary& s)
{
  Eigen::LLT<Eigen::MatrixXd> llt(s.info);
  if (s.info.size() == 0 || llt.info() != Eigen::Success)
    fail(ErrorKind::singular_information, "information matrix is not positive definite");
  Eigen::Index p = s.info.rows();
  NormalApprox out;
  out.cov = llt.solve(Eigen::MatrixXd::Identity(p, p));
  out.mean = llt.solve(s.theta);
  out.kind = s.kind;
  out.n = s.n;
  out.root_n_scaled = true;
  if (!out.cov.allFinite() || !out.mean.allFinite())
    fail(ErrorKind::singular_information, "information matrix is numerically singular");
  return out;
}

NormalApprox
scale_normal_approx(const ConditionalNormalSummary& s)
{
  if (s.kind != ModelKind::regression_scale)
    fail(ErrorKind::invalid_argument, "the scale law needs the regression-scale model");
  if (!(s.scale_info > 0.0) || !std::isfinite(s.scale_info))
    fail(ErrorKind::singular_information, "scale information must be positive");
  NormalApprox out;
  out.mean = Eigen::VectorXd::Constant(1, s.scale_theta / s.scale_info);
  out.cov = Eigen::MatrixXd::Constant(1, 1, 1.0 / s.scale_info);
  out.kind = s.kind;
  out.n = s.n;
  out.root_n_scaled = true;
  return out;
}

} // namespace condinf
