#include "condinf/intervals.hpp"

#include "condinf/error.hpp"
#include "condinf/parallel.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstring>
#include <span>

namespace condinf {

IntervalMethod
parse_interval_method(const std::string& s)
{
  if (s == "exact" || s == "exact_unconditional")
    return IntervalMethod::exact_unconditional;
  if (s == "rb" || s == "bootstrap")
    return IntervalMethod::rb;
  if (s == "pi")
    return IntervalMethod::pi;
  if (s == "npi")
    return IntervalMethod::npi;
  fail(ErrorKind::parse_error, "unknown interval method '" + s + "'");
}

const char*
to_string(IntervalMethod m)
{
  switch (m) {
    case IntervalMethod::exact_unconditional:
      return "exact";
    case IntervalMethod::rb:
      return "rb";
    case IntervalMethod::pi:
      return "pi";
    case IntervalMethod::npi:
      return "npi";
  }
  return "unknown";
}

double
sorted_quantile(const std::vector<double>& sorted, double prob)
{
  if (sorted.empty())
    fail(ErrorKind::insufficient_draws, "no draws");
  double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  auto lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double
normal_quantile(double prob)
{
  return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

namespace {

void
check_alpha(double alpha)
{
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorKind::invalid_argument, "alpha must lie in (0, 1)");
}

ConfidenceInterval
invert(const Eigen::VectorXd& q_lo,
       const Eigen::VectorXd& q_hi,
       const FitResult& fit,
       ModelKind kind,
       double alpha,
       const std::string& method)
{
  double scale = kind == ModelKind::regression_scale ? fit.sigma_hat : 1.0;
  ConfidenceInterval ci;
  ci.lower = fit.beta_hat - scale * q_hi;
  ci.upper = fit.beta_hat - scale * q_lo;
  ci.level = 1.0 - alpha;
  ci.method = method;
  if (!ci.lower.allFinite() || !ci.upper.allFinite())
    fail(ErrorKind::invalid_argument, "interval endpoints are not finite");
  return ci;
}

std::vector<std::vector<double>>
sorted_columns(const Eigen::MatrixXd& draws)
{
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(draws.cols()));
  for (Eigen::Index j = 0; j < draws.cols(); ++j) {
    auto& c = cols[static_cast<std::size_t>(j)];
    c.assign(draws.col(j).data(), draws.col(j).data() + draws.rows());
    std::sort(c.begin(), c.end());
  }
  return cols;
}

ConfidenceInterval
interval_from_sorted(const std::vector<std::vector<double>>& cols,
                     const FitResult& fit,
                     ModelKind kind,
                     double alpha,
                     const std::string& method)
{
  check_alpha(alpha);
  std::size_t B = cols.empty() ? 0 : cols.front().size();
  if (static_cast<double>(B) < 20.0 / alpha)
    fail(ErrorKind::insufficient_draws,
         std::to_string(B) + " draws are too few for alpha = " + std::to_string(alpha));
  auto p = static_cast<Eigen::Index>(cols.size());
  if (fit.beta_hat.size() != p)
    fail(ErrorKind::invalid_argument, "draws and fit have different dimensions");
  Eigen::VectorXd lo(p), hi(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    lo(j) = sorted_quantile(cols[static_cast<std::size_t>(j)], alpha / 2.0);
    hi(j) = sorted_quantile(cols[static_cast<std::size_t>(j)], 1.0 - alpha / 2.0);
  }
  return invert(lo, hi, fit, kind, alpha, method);
}

} // namespace

ConfidenceInterval
interval_from_draws(const PivotDraws& draws,
                    const FitResult& fit,
                    double alpha,
                    const std::string& method)
{
  if (!draws.draws.allFinite())
    fail(ErrorKind::invalid_argument, "pivot draws must be finite");
  return interval_from_sorted(sorted_columns(draws.draws), fit, draws.kind, alpha,
                              method.empty() ? to_string(draws.provenance) : method);
}

ConfidenceInterval
interval_from_normal(const NormalApprox& approx,
                     const FitResult& fit,
                     double alpha,
                     const std::string& method)
{
  check_alpha(alpha);
  NormalApprox a = approx.to_pivot_scale();
  if (a.mean.size() != fit.beta_hat.size())
    fail(ErrorKind::invalid_argument, "approximation and fit have different dimensions");
  Eigen::LLT<Eigen::MatrixXd> llt(a.cov);
  if (llt.info() != Eigen::Success)
    fail(ErrorKind::singular_information, "covariance is not positive definite");
  double z = normal_quantile(1.0 - alpha / 2.0);
  Eigen::VectorXd sd = a.cov.diagonal().cwiseSqrt();
  return invert(a.mean - z * sd, a.mean + z * sd, fit, a.kind, alpha, method);
}

std::string
MethodSpec::label() const
{
  if (!tag.empty())
    return tag;
  std::string s = to_string(method);
  if ((method == IntervalMethod::pi || method == IntervalMethod::npi) && density)
    s += "-oracle";
  return s;
}

std::size_t
MethodSpec::draw_count() const
{
  if (draws > 0)
    return draws;
  return method == IntervalMethod::rb ? 1000 : 5000;
}

double
default_pi_bandwidth(const Eigen::VectorXd& ancillary)
{
  std::span<const double> pts(ancillary.data(), static_cast<std::size_t>(ancillary.size()));
  return normal_reference_bandwidth(pts.size(), sample_sd(pts));
}

DensityPtr
plugin_density(const Eigen::VectorXd& ancillary, double h, const KernelSpec& k)
{
  std::vector<double> pts(ancillary.data(), ancillary.data() + ancillary.size());
  return std::make_shared<PluginDensity>(std::move(pts), h, k, true);
}

PivotDraws
conditional_draws(const Eigen::VectorXd& ancillary,
                  const Eigen::MatrixXd& X,
                  const DensityPtr& density,
                  ModelKind kind,
                  std::size_t B,
                  const SeedTree& tree,
                  Provenance provenance)
{
  ConditionalLaw law(law_kind_for(kind), ancillary, X, density);
  SeedTree sub = tree.derive("law", 0);
  Stream stream = sub.stream();
  PivotDraws out;
  out.kind = kind;
  if (X.cols() == 1) {
    // the pivot alone; its marginal is already integrated over s
    GridSampler sampler(law);
    out.draws.resize(static_cast<Eigen::Index>(B), 1);
    for (std::size_t b = 0; b < B; ++b)
      out.draws(static_cast<Eigen::Index>(b), 0) = sampler.draw_pivot(stream);
  } else {
    out.draws = sample_law(law, B, stream, SampleMethod::metropolis).pivot;
  }
  out.provenance = provenance;
  out.seed = tree.master();
  out.seed_path = sub.path();
  return out;
}

PivotLaw::PivotLaw(const MethodSpec& spec,
                   const FitResult& fit,
                   const Eigen::MatrixXd& X,
                   ModelKind kind,
                   const SeedTree& tree,
                   int workers)
  : label_(spec.label())
{
  Eigen::VectorXd a = ancillary(fit, kind);
  switch (spec.method) {
    case IntervalMethod::exact_unconditional: {
      if (!spec.density)
        fail(ErrorKind::invalid_argument, "the exact method needs the true error density");
      draws_ = exact_unconditional(*spec.density, X, spec.draw_count(), tree, kind,
                                   spec.estimator, {}, workers);
      break;
    }
    case IntervalMethod::rb:
      draws_ = residual_bootstrap(fit, X, spec.draw_count(), tree, kind, spec.estimator, workers);
      break;
    case IntervalMethod::pi: {
      DensityPtr density = spec.density;
      if (!density) {
        double h = std::isnan(spec.h) ? default_pi_bandwidth(a) : spec.h;
        density = plugin_density(a, h, spec.kernel);
      }
      draws_ = conditional_draws(a, X, density, kind, spec.draw_count(), tree);
      break;
    }
    case IntervalMethod::npi: {
      if (spec.density) {
        normal_ = normal_approx(theorem1_quantities(a, X, *spec.density, kind));
        break;
      }
      Bandwidths bw;
      if (spec.npi_bandwidths) {
        bw = *spec.npi_bandwidths;
      } else {
        std::span<const double> pts(a.data(), static_cast<std::size_t>(a.size()));
        double scale = kind == ModelKind::regression_scale ? 1.0 : sample_sd(pts);
        bw = rate_bandwidths(pts.size(), 2, scale);
      }
      ConditionalNormalSummary s = plugin_quantities(a, X, bw, spec.kernel, kind);
      warnings_ = s.warnings;
      normal_ = normal_approx(s);
      break;
    }
  }
  if (draws_)
    sorted_ = sorted_columns(draws_->draws);
  kind_ = kind;
}

ConfidenceInterval
PivotLaw::interval(const FitResult& fit, double alpha) const
{
  if (normal_)
    return interval_from_normal(*normal_, fit, alpha, label_);
  return interval_from_sorted(sorted_, fit, kind_, alpha, label_);
}

Eigen::VectorXd
with_outlier(const Eigen::VectorXd& anc,
             const Eigen::MatrixXd& X,
             double size,
             ModelKind kind,
             Estimator estimator)
{
  if (anc.size() == 0)
    fail(ErrorKind::invalid_argument, "empty ancillary");
  Eigen::Index k = 0;
  anc.cwiseAbs().maxCoeff(&k);
  Eigen::VectorXd y = anc;
  y(k) = anc(k) < 0.0 ? -std::abs(size) : std::abs(size);
  return ancillary(fit(Dataset(X, y), estimator, kind), kind);
}

std::string
ancillary_hash(const Eigen::VectorXd& a)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    unsigned char bytes[sizeof(double)];
    double v = a(i);
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CoverageReport
conditional_coverage(const Eigen::VectorXd& anc,
                     const Eigen::MatrixXd& X,
                     const Eigen::VectorXd& beta_true,
                     double sigma_true,
                     const DensityPtr& true_density,
                     ModelKind kind,
                     const std::vector<MethodSpec>& methods,
                     const std::vector<double>& levels,
                     std::size_t R,
                     std::uint64_t seed,
                     int workers,
                     Eigen::Index coordinate)
{
  if (methods.empty() || levels.empty())
    fail(ErrorKind::invalid_argument, "coverage needs methods and levels");
  if (R < 1)
    fail(ErrorKind::invalid_argument, "R must be at least 1");
  if (beta_true.size() != X.cols() || coordinate < 0 || coordinate >= X.cols())
    fail(ErrorKind::invalid_argument, "beta_true or coordinate does not match X");
  for (double l : levels)
    if (!(l > 0.0 && l < 1.0))
      fail(ErrorKind::invalid_argument, "levels must lie in (0, 1)");
  const Estimator estimator = methods.front().estimator;
  for (const auto& m : methods)
    if (m.estimator != estimator)
      fail(ErrorKind::invalid_argument, "all methods must share the estimator");

  // a dataset whose fit has exactly this ancillary
  Dataset reference(X, anc);
  FitResult ref_fit = fit(reference, estimator, kind);
  Eigen::VectorXd check = ancillary(ref_fit, kind);
  if ((check - anc).cwiseAbs().maxCoeff() > 1e-8)
    fail(ErrorKind::invalid_argument,
         "ancillary is not a residual configuration of the estimator");

  SeedTree tree(seed);
  std::vector<PivotLaw> laws;
  laws.reserve(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m)
    laws.emplace_back(methods[m], ref_fit, X, kind, tree.derive("method", m), workers);

  ConditionalLaw law(law_kind_for(kind), anc, X, true_density);
  ConditionalGenerator gen(law);

  const std::size_t M = methods.size();
  const std::size_t L = levels.size();
  // 0 = missed, 1 = covered, 2 = failed
  std::vector<std::uint8_t> outcome(R * M * L, 2);
  parallel_for(R, workers, [&](std::size_t r) {
    Stream stream = tree.derive("rep", r).stream();
    Dataset d = gen.draw(beta_true, sigma_true, stream);
    FitResult f;
    try {
      f = fit(d, estimator, kind);
    } catch (const Error&) {
      return;
    }
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t l = 0; l < L; ++l) {
        try {
          ConfidenceInterval ci = laws[m].interval(f, 1.0 - levels[l]);
          double b = beta_true(coordinate);
          outcome[(r * M + m) * L + l] = ci.lower(coordinate) <= b && b <= ci.upper(coordinate);
        } catch (const Error&) {
        }
      }
    }
  });

  CoverageReport report;
  report.n = X.rows();
  report.R = R;
  report.seed = seed;
  report.ancillary_hash = ancillary_hash(anc);
  report.coordinate = coordinate;
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t l = 0; l < L; ++l) {
      std::size_t covered = 0, failures = 0;
      for (std::size_t r = 0; r < R; ++r) {
        std::uint8_t o = outcome[(r * M + m) * L + l];
        covered += o == 1;
        failures += o == 2;
      }
      CoverageRecord rec;
      rec.level = levels[l];
      rec.covered = covered;
      rec.failures = failures;
      rec.method = methods[m].label();
      std::size_t used = R - failures;
      rec.coverage = used > 0 ? static_cast<double>(covered) / static_cast<double>(used)
                              : std::numeric_limits<double>::quiet_NaN();
      rec.se = used > 0 ? std::sqrt(rec.coverage * (1.0 - rec.coverage) / static_cast<double>(used))
                        : std::numeric_limits<double>::quiet_NaN();
      report.records.push_back(rec);
    }
  }
  return report;
}

} // namespace condinf
