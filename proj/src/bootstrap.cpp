#include "condinf/bootstrap.hpp"

#include "condinf/error.hpp"
#include "condinf/parallel.hpp"

#include <algorithm>

namespace condinf {

const char*
to_string(Provenance p)
{
  switch (p) {
    case Provenance::residual_bootstrap:
      return "residual_bootstrap";
    case Provenance::exact_unconditional:
      return "exact_unconditional";
    case Provenance::conditional_pi:
      return "conditional_pi";
    case Provenance::conditional_npi:
      return "conditional_npi";
  }
  return "unknown";
}

SymmetrizedEmpirical::SymmetrizedEmpirical(std::vector<double> residuals)
  : residuals_(std::move(residuals))
{
  if (residuals_.empty())
    fail(ErrorKind::invalid_argument, "symmetrized empirical law needs residuals");
  atoms_.reserve(2 * residuals_.size());
  for (double r : residuals_) {
    atoms_.push_back(r);
    atoms_.push_back(-r);
  }
  std::sort(atoms_.begin(), atoms_.end());
}

double
SymmetrizedEmpirical::sample_one(Stream& stream) const
{
  std::uint64_t k = stream.below(2 * residuals_.size());
  double r = residuals_[k >> 1];
  return (k & 1) ? -r : r;
}

double
SymmetrizedEmpirical::cdf(double x) const
{
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
  return static_cast<double>(it - atoms_.begin()) / static_cast<double>(atoms_.size());
}

namespace {

// Refits until the scale estimate is positive; the stream keeps advancing
// so the draw stays a function of the sub-seed alone.
template<class Noise>
Eigen::VectorXd
pivot_draw(const Refitter& refit,
           const Eigen::VectorXd& mean,
           double noise_scale,
           const Eigen::VectorXd& centre,
           ModelKind kind,
           Noise&& noise,
           Stream& stream)
{
  const Eigen::Index n = mean.size();
  Eigen::VectorXd y(n);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (Eigen::Index i = 0; i < n; ++i)
      y(i) = mean(i) + noise_scale * noise(stream);
    PointFit pf = refit(y);
    if (kind == ModelKind::regression)
      return pf.beta_hat - centre;
    if (pf.sigma_hat > 0.0)
      return (pf.beta_hat - centre) / pf.sigma_hat;
  }
  fail(ErrorKind::degenerate_fit, "resampled data keep giving a perfect fit");
}

} // namespace

PivotDraws
residual_bootstrap(const FitResult& fit,
                   const Eigen::MatrixXd& X,
                   std::size_t B,
                   const SeedTree& tree,
                   ModelKind kind,
                   Estimator estimator,
                   int workers)
{
  if (B < 1)
    fail(ErrorKind::invalid_argument, "B must be at least 1");
  if (X.rows() != fit.residuals_raw.size())
    fail(ErrorKind::invalid_argument, "fit does not match X");
  if (kind == ModelKind::regression_scale && !(fit.sigma_hat > 0.0))
    fail(ErrorKind::degenerate_fit, "bootstrap needs sigma_hat > 0");
  const Eigen::VectorXd& res =
    kind == ModelKind::regression_scale ? fit.residuals_studentized : fit.residuals_raw;
  SymmetrizedEmpirical law(std::vector<double>(res.data(), res.data() + res.size()));
  Refitter refit(X, estimator);
  Eigen::VectorXd mean = X * fit.beta_hat;
  double noise_scale = kind == ModelKind::regression_scale ? fit.sigma_hat : 1.0;

  PivotDraws out;
  out.kind = kind;
  out.provenance = Provenance::residual_bootstrap;
  out.seed = tree.master();
  out.seed_path = tree.path() + "/boot";
  out.draws.resize(static_cast<Eigen::Index>(B), X.cols());
  parallel_for(B, workers, [&](std::size_t b) {
    Stream stream = tree.derive("boot", b).stream();
    out.draws.row(static_cast<Eigen::Index>(b)) =
      pivot_draw(refit, mean, noise_scale, fit.beta_hat, kind,
                 [&](Stream& s) { return law.sample_one(s); }, stream)
        .transpose();
  });
  return out;
}

PivotDraws
exact_unconditional(const ErrorDensity& density,
                    const Eigen::MatrixXd& X,
                    std::size_t B,
                    const SeedTree& tree,
                    ModelKind kind,
                    Estimator estimator,
                    const Eigen::VectorXd& beta0,
                    int workers)
{
  if (B < 1)
    fail(ErrorKind::invalid_argument, "B must be at least 1");
  Eigen::VectorXd beta = beta0.size() == 0 ? Eigen::VectorXd::Zero(X.cols()) : beta0;
  if (beta.size() != X.cols())
    fail(ErrorKind::invalid_argument, "beta0 has the wrong length");
  Refitter refit(X, estimator);
  Eigen::VectorXd mean = X * beta;

  PivotDraws out;
  out.kind = kind;
  out.provenance = Provenance::exact_unconditional;
  out.seed = tree.master();
  out.seed_path = tree.path() + "/exact";
  out.draws.resize(static_cast<Eigen::Index>(B), X.cols());
  parallel_for(B, workers, [&](std::size_t b) {
    Stream stream = tree.derive("exact", b).stream();
    out.draws.row(static_cast<Eigen::Index>(b)) =
      pivot_draw(refit, mean, 1.0, beta, kind,
                 [&](Stream& s) { return density.sample_one(s); }, stream)
        .transpose();
  });
  return out;
}

} // namespace condinf
