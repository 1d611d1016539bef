#include "condinf/conddist.hpp"

#include "condinf/error.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstring>
#include <unordered_map>

namespace condinf {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr double pos_inf = std::numeric_limits<double>::infinity();

Eigen::VectorXd
scalar(double v)
{
  return Eigen::VectorXd::Constant(1, v);
}

// Memoizes a scalar log function; GK passes over the same pieces reuse
// the expensive inner integrals.
class MemoLog
{
public:
  explicit MemoLog(std::function<double(double)> f)
    : f_(std::move(f))
  {}

  double operator()(double x) const
  {
    std::uint64_t key;
    std::memcpy(&key, &x, sizeof key);
    auto it = cache_.find(key);
    if (it != cache_.end())
      return it->second;
    double v = f_(x);
    cache_.emplace(key, v);
    return v;
  }

private:
  std::function<double(double)> f_;
  mutable std::unordered_map<std::uint64_t, double> cache_;
};

// Maximizes g over [lo, hi] starting from a coarse scan.
double
maximize_1d(const std::function<double(double)>& g, double centre, double spread, double lo, double hi)
{
  const int half = 40;
  double step = spread / 4.0;
  double best_x = centre;
  double best_v = neg_inf;
  for (int k = -half; k <= half; ++k) {
    double x = centre + k * step;
    if (!(x > lo && x < hi))
      continue;
    double v = g(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  if (!std::isfinite(best_v)) {
    if (std::isfinite(lo) && std::isfinite(hi)) {
      // fall back to a scan of the bounded range
      for (int k = 1; k < 2 * half; ++k) {
        double x = lo + (hi - lo) * k / (2.0 * half);
        double v = g(x);
        if (v > best_v) {
          best_v = v;
          best_x = x;
        }
      }
    }
    if (!std::isfinite(best_v))
      fail(ErrorKind::integration_failure, "pivot density vanishes near its expected location");
    step = (hi - lo) / (2.0 * half);
  }
  double a = std::max(best_x - step, lo);
  double b = std::min(best_x + step, hi);
  auto neg = [&](double x) {
    double v = g(x);
    return std::isfinite(v) ? -v : pos_inf;
  };
  auto r = boost::math::tools::brent_find_minima(neg, a, b, 40);
  return -r.second >= best_v ? r.first : best_x;
}

} // namespace

LawKind
law_kind_for(ModelKind kind)
{
  return kind == ModelKind::regression ? LawKind::u_given_atilde : LawKind::st_given_a;
}

ConditionalLaw::ConditionalLaw(LawKind kind,
                               Eigen::VectorXd ancillary,
                               Eigen::MatrixXd X,
                               DensityPtr density)
  : kind_(kind)
  , a_(std::move(ancillary))
  , X_(std::move(X))
  , density_(std::move(density))
{
  if (!density_)
    fail(ErrorKind::invalid_argument, "conditional law needs an error density");
  if (X_.rows() != a_.size())
    fail(ErrorKind::invalid_argument, "ancillary length does not match X");
  if (a_.size() < X_.cols() + 1)
    fail(ErrorKind::invalid_argument, "need n >= p + 1");
}

double
ConditionalLaw::sum_log_density(const Eigen::VectorXd& z) const
{
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    double v = density_->log_density(z(i));
    if (!(v > neg_inf))
      return neg_inf;
    total += v;
  }
  return total;
}

double
ConditionalLaw::log_kappa(double s, const Eigen::VectorXd& t) const
{
  if (kind_ != LawKind::st_given_a)
    fail(ErrorKind::invalid_argument, "log_kappa needs the (S, T) law");
  if (!(s > 0.0))
    fail(ErrorKind::out_of_domain, "kappa needs s > 0");
  Eigen::VectorXd z = s * (a_ + X_ * t);
  return static_cast<double>(n() - 1) * std::log(s) + sum_log_density(z);
}

double
ConditionalLaw::log_g_u(const Eigen::VectorXd& u) const
{
  if (kind_ != LawKind::u_given_atilde)
    fail(ErrorKind::invalid_argument, "log_g_u needs the U law");
  return sum_log_density(a_ + X_ * u);
}

double
ConditionalLaw::log_w_integrand(double w, const Eigen::VectorXd& b, int power) const
{
  double s = std::exp(w);
  double total = static_cast<double>(n() + power) * w;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    double v = density_->log_density(s * b(i));
    if (!(v > neg_inf))
      return neg_inf;
    total += v;
  }
  return total;
}

double
ConditionalLaw::log_s_upper(const Eigen::VectorXd& b) const
{
  Support sup = density_->support();
  double w_max = pos_inf;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (b(i) > 0.0 && std::isfinite(sup.upper))
      w_max = std::min(w_max, std::log(sup.upper / b(i)));
    else if (b(i) < 0.0 && std::isfinite(sup.lower))
      w_max = std::min(w_max, std::log(sup.lower / b(i)));
  }
  return w_max;
}

ScanOptions
ConditionalLaw::log_s_scan(const Eigen::VectorXd& b) const
{
  ScanOptions opts;
  opts.step = 0.1 / std::sqrt(static_cast<double>(n()));
  opts.linear_steps = 400;
  opts.growth = 1.25;
  opts.upper = log_s_upper(b);
  opts.singular_upper = std::isfinite(opts.upper);
  opts.rel_tol = 1e-10;
  return opts;
}

double
ConditionalLaw::log_s_integral(const Eigen::VectorXd& t, int power) const
{
  if (kind_ != LawKind::st_given_a)
    fail(ErrorKind::invalid_argument, "s-integral needs the (S, T) law");
  Eigen::VectorXd b = a_ + X_ * t;
  ScanOptions opts = log_s_scan(b);
  double rms = std::sqrt(b.squaredNorm() / static_cast<double>(b.size()));
  double centre = rms > 0.0 ? -std::log(rms) : 0.0;
  if (centre >= opts.upper)
    centre = opts.upper - 10.0 * opts.step;
  auto logf = [&](double w) { return log_w_integrand(w, b, power); };
  return log_integrate(logf, centre, opts);
}

double
ConditionalLaw::log_marginal(const Eigen::VectorXd& t) const
{
  if (t.size() != p())
    fail(ErrorKind::invalid_argument, "pivot has the wrong dimension");
  return kind_ == LawKind::st_given_a ? log_s_integral(t, 0) : log_g_u(t);
}

double
ConditionalLaw::marginal_g_t(const Eigen::VectorXd& t) const
{
  if (kind_ != LawKind::st_given_a)
    fail(ErrorKind::invalid_argument, "marginal_g_t needs the (S, T) law");
  return std::exp(log_s_integral(t, 0));
}

Eigen::VectorXd
ConditionalLaw::scale_guess() const
{
  Eigen::MatrixXd gram = X_.transpose() * X_;
  Eigen::VectorXd d = gram.inverse().diagonal();
  double rms = std::sqrt(a_.squaredNorm() / static_cast<double>(n()));
  if (!(rms > 0.0))
    rms = 1.0;
  return d.cwiseSqrt() * rms;
}

Region
ConditionalLaw::pivot_support() const
{
  Region r;
  Support sup = density_->support();
  if (kind_ != LawKind::u_given_atilde || p() != 1 || !sup.bounded())
    return r;
  for (Eigen::Index i = 0; i < n(); ++i) {
    double x = X_(i, 0);
    double lo = neg_inf, hi = pos_inf;
    if (x > 0.0) {
      lo = (sup.lower - a_(i)) / x;
      hi = (sup.upper - a_(i)) / x;
    } else if (x < 0.0) {
      lo = (sup.upper - a_(i)) / x;
      hi = (sup.lower - a_(i)) / x;
    } else if (!sup.contains(a_(i))) {
      fail(ErrorKind::integration_failure, "ancillary incompatible with the density support");
    }
    r.lower = std::max(r.lower, lo);
    r.upper = std::min(r.upper, hi);
  }
  if (!(r.lower < r.upper))
    fail(ErrorKind::integration_failure, "ancillary incompatible with the density support");
  return r;
}

ScanOptions
ConditionalLaw::pivot_scan(double sd, const Region& region) const
{
  Region sup = pivot_support();
  ScanOptions opts;
  opts.step = sd / 10.0;
  opts.linear_steps = 60;
  opts.growth = 1.15;
  opts.lower = std::max(region.lower, sup.lower);
  opts.upper = std::min(region.upper, sup.upper);
  opts.singular_lower = std::isfinite(opts.lower);
  opts.singular_upper = std::isfinite(opts.upper);
  // the integrand carries the error of the inner s-integral
  opts.rel_tol = 1e-7;
  opts.max_depth = 6;
  return opts;
}

LaplaceApprox
ConditionalLaw::laplace() const
{
  Eigen::VectorXd sd0 = scale_guess();
  LaplaceApprox out;
  const Eigen::Index dim = p();
  out.mode = Eigen::VectorXd::Zero(dim);
  Region sup = pivot_support();

  auto along = [&](Eigen::Index j, double v) {
    Eigen::VectorXd t = out.mode;
    t(j) = v;
    return log_marginal(t);
  };
  for (int sweep = 0; sweep < (dim == 1 ? 1 : 4); ++sweep) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      double lo = dim == 1 ? sup.lower : neg_inf;
      double hi = dim == 1 ? sup.upper : pos_inf;
      out.mode(j) = maximize_1d([&](double v) { return along(j, v); }, out.mode(j), sd0(j), lo, hi);
    }
  }

  // curvature by central differences, with a fallback to the rough scale
  out.cov = sd0.cwiseAbs2().asDiagonal();
  Eigen::MatrixXd H(dim, dim);
  double f0 = log_marginal(out.mode);
  bool ok = std::isfinite(f0);
  Eigen::VectorXd delta = sd0 / 10.0;
  if (dim == 1 && std::isfinite(sup.lower))
    delta(0) = std::min(delta(0), 0.25 * std::min(out.mode(0) - sup.lower, sup.upper - out.mode(0)));
  for (Eigen::Index j = 0; j < dim && ok; ++j) {
    for (Eigen::Index k = j; k < dim && ok; ++k) {
      auto at = [&](double dj, double dk) {
        Eigen::VectorXd t = out.mode;
        t(j) += dj;
        t(k) += dk;
        return log_marginal(t);
      };
      double h;
      if (j == k) {
        h = (at(delta(j), 0) - 2.0 * f0 + at(-delta(j), 0)) / (delta(j) * delta(j));
      } else {
        h = (at(delta(j), delta(k)) - at(delta(j), -delta(k)) - at(-delta(j), delta(k)) +
             at(-delta(j), -delta(k))) /
            (4.0 * delta(j) * delta(k));
      }
      if (!std::isfinite(h))
        ok = false;
      H(j, k) = H(k, j) = h;
    }
  }
  if (ok) {
    Eigen::LLT<Eigen::MatrixXd> llt(-H);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
      // guard against a curvature that is far off the rough scale
      bool sane = true;
      for (Eigen::Index j = 0; j < dim; ++j)
        sane = sane && cov(j, j) > 1e-6 * sd0(j) * sd0(j) && cov(j, j) < 1e6 * sd0(j) * sd0(j);
      if (sane)
        out.cov = cov;
    }
  }
  return out;
}

double
ConditionalLaw::normalize(const Region& region)
{
  const Eigen::Index dim = p();
  if (dim > 2)
    fail(ErrorKind::dimension_too_high,
         "grid normalization supports p <= 2; use the Metropolis sampler for p = " +
           std::to_string(dim));
  LaplaceApprox lap = laplace();
  if (dim == 1) {
    double sd = std::sqrt(lap.cov(0, 0));
    auto logf = [&](double t) { return log_marginal(scalar(t)); };
    log_normalizer_ = log_integrate(logf, lap.mode(0), pivot_scan(sd, region));
    return *log_normalizer_;
  }
  const Eigen::MatrixXd& C = lap.cov;
  double sd1 = std::sqrt(C(0, 0));
  double slope = C(1, 0) / C(0, 0);
  double sd2 = std::sqrt(std::max(C(1, 1) - C(1, 0) * slope, 1e-12 * C(1, 1)));
  auto inner = [&](double t1) {
    Eigen::VectorXd t(2);
    t(0) = t1;
    auto logf = [&](double t2) {
      t(1) = t2;
      return log_marginal(t);
    };
    ScanOptions opts = pivot_scan(sd2, {});
    opts.rel_tol = 1e-9;
    try {
      return log_integrate(logf, lap.mode(1) + slope * (t1 - lap.mode(0)), opts);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::integration_failure)
        return neg_inf;
      throw;
    }
  };
  MemoLog memo(inner);
  ScanOptions outer = pivot_scan(sd1, {});
  outer.rel_tol = 1e-8;
  log_normalizer_ = log_integrate([&](double t1) { return memo(t1); }, lap.mode(0), outer);
  return *log_normalizer_;
}

double
ConditionalLaw::log_normalizer() const
{
  if (!log_normalizer_)
    fail(ErrorKind::invalid_argument, "law is not normalized");
  return *log_normalizer_;
}

double
ConditionalLaw::density_at(const Eigen::VectorXd& t) const
{
  return std::exp(log_marginal(t) - log_normalizer());
}

// moments

ConditionalMoments
conditional_moments(const ConditionalLaw& law)
{
  if (law.kind() != LawKind::st_given_a)
    fail(ErrorKind::invalid_argument, "moments of (S, T) need the (S, T) law");
  if (law.p() != 1)
    fail(ErrorKind::dimension_too_high, "conditional moments support p = 1");
  LaplaceApprox lap = law.laplace();
  double sd = std::sqrt(lap.cov(0, 0));
  ScanOptions opts = law.pivot_scan(sd, {});

  auto l0 = [&](double t) { return law.log_s_integral(scalar(t), 0); };
  double log_z = log_integrate(l0, lap.mode(0), opts);

  MemoLog l2([&](double t) { return law.log_s_integral(scalar(t), 2); });
  auto logf = [&](double t) { return l2(t); };
  ScanGrid grid = scan_log_function(logf, lap.mode(0), opts);
  // centre the weights at the mode so the odd moment is not a difference
  // of two large numbers
  double c = lap.mode(0);
  double m0 = integrate_scaled(logf, [](double) { return 1.0; }, grid, opts);
  double m1 = integrate_scaled(logf, [&](double t) { return t - c; }, grid, opts);
  double m2 = integrate_scaled(logf, [&](double t) { return (t - c) * (t - c); }, grid, opts);
  double factor = std::exp(grid.max_log - log_z);
  ConditionalMoments out;
  out.e_s2 = m0 * factor;
  double e1 = m1 * factor;
  double e2 = m2 * factor;
  out.e_s2t = e1 + c * out.e_s2;
  out.e_s2t2 = e2 + 2.0 * c * e1 + c * c * out.e_s2;
  if (!(out.e_s2 > 0.0) || !std::isfinite(out.e_s2t2))
    fail(ErrorKind::integration_failure, "conditional moments are not finite");
  return out;
}

ConditionalMoments
conditional_moments_mc(const ConditionalLaw& law, std::size_t draws, Stream& stream)
{
  if (law.kind() != LawKind::st_given_a || law.p() != 1)
    fail(ErrorKind::invalid_argument, "Monte Carlo moments need the (S, T) law with p = 1");
  if (draws < 2)
    fail(ErrorKind::invalid_argument, "need at least two draws");
  GridSampler sampler(law);
  double sum[3] = { 0, 0, 0 };
  double sq[3] = { 0, 0, 0 };
  for (std::size_t r = 0; r < draws; ++r) {
    auto [s, t] = sampler.draw_st(stream);
    double s2 = s * s;
    double v[3] = { s2, s2 * t, s2 * t * t };
    for (int k = 0; k < 3; ++k) {
      sum[k] += v[k];
      sq[k] += v[k] * v[k];
    }
  }
  double m = static_cast<double>(draws);
  auto se = [&](int k) {
    double mean = sum[k] / m;
    return std::sqrt(std::max(sq[k] / m - mean * mean, 0.0) / (m - 1.0));
  };
  ConditionalMoments out;
  out.e_s2 = sum[0] / m;
  out.e_s2t = sum[1] / m;
  out.e_s2t2 = sum[2] / m;
  out.se_s2 = se(0);
  out.se_s2t = se(1);
  out.se_s2t2 = se(2);
  out.monte_carlo = true;
  return out;
}

std::pair<double, double>
pivot_moments_u(const ConditionalLaw& law)
{
  if (law.kind() != LawKind::u_given_atilde || law.p() != 1)
    fail(ErrorKind::invalid_argument, "U moments need the U law with p = 1");
  LaplaceApprox lap = law.laplace();
  double sd = std::sqrt(lap.cov(0, 0));
  ScanOptions opts = law.pivot_scan(sd, {});
  auto logf = [&](double u) { return law.log_g_u(scalar(u)); };
  ScanGrid grid = scan_log_function(logf, lap.mode(0), opts);
  double c = lap.mode(0);
  double z = integrate_scaled(logf, [](double) { return 1.0; }, grid, opts);
  double m1 = integrate_scaled(logf, [&](double u) { return u - c; }, grid, opts);
  double m2 = integrate_scaled(logf, [&](double u) { return (u - c) * (u - c); }, grid, opts);
  double e1 = m1 / z;
  double e2 = m2 / z;
  return { e1 + c, e2 + 2.0 * c * e1 + c * c };
}

// grid sampler

namespace {

struct LinearCdf
{
  std::vector<double> x, pdf, cum;

  void build(const ScanGrid& grid)
  {
    x = grid.x;
    pdf.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      double v = grid.logf[k];
      pdf[k] = std::isnan(v) ? 0.0 : std::exp(v - grid.max_log);
    }
    // an unevaluated limit node inherits its neighbour
    if (!pdf.empty() && std::isnan(grid.logf.front()) && pdf.size() > 1)
      pdf.front() = pdf[1];
    if (!pdf.empty() && std::isnan(grid.logf.back()) && pdf.size() > 1)
      pdf.back() = pdf[pdf.size() - 2];
    cum.assign(x.size(), 0.0);
    for (std::size_t k = 1; k < x.size(); ++k)
      cum[k] = cum[k - 1] + 0.5 * (pdf[k] + pdf[k - 1]) * (x[k] - x[k - 1]);
    if (!(cum.back() > 0.0))
      fail(ErrorKind::integration_failure, "grid has no mass");
  }

  double invert(double u) const
  {
    double target = u * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t k = it == cum.begin() ? 0 : static_cast<std::size_t>(it - cum.begin()) - 1;
    if (k + 1 >= x.size())
      return x.back();
    double width = x[k + 1] - x[k];
    double r = target - cum[k];
    double p0 = pdf[k];
    double slope = (pdf[k + 1] - p0) / width;
    double d;
    if (std::abs(slope) * width < 1e-12 * std::max(p0, 1e-300))
      d = p0 > 0.0 ? r / p0 : 0.5 * width;
    else {
      double disc = std::max(p0 * p0 + 2.0 * slope * r, 0.0);
      double denom = p0 + std::sqrt(disc);
      d = denom > 0.0 ? 2.0 * r / denom : std::sqrt(std::max(2.0 * r / slope, 0.0));
    }
    return x[k] + std::clamp(d, 0.0, width);
  }

  double cdf(double t) const
  {
    if (t <= x.front())
      return 0.0;
    if (t >= x.back())
      return 1.0;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
    double width = x[k + 1] - x[k];
    double d = t - x[k];
    double slope = (pdf[k + 1] - pdf[k]) / width;
    return (cum[k] + pdf[k] * d + 0.5 * slope * d * d) / cum.back();
  }
};

} // namespace

GridSampler::GridSampler(const ConditionalLaw& law, double nodes_per_sd)
  : law_(&law)
{
  if (law.p() != 1)
    fail(ErrorKind::dimension_too_high, "grid sampling supports p = 1; use metropolis");
  LaplaceApprox lap = law.laplace();
  double sd = std::sqrt(lap.cov(0, 0));
  ScanOptions opts = law.pivot_scan(sd, {});
  opts.step = sd / nodes_per_sd;
  opts.linear_steps = static_cast<std::size_t>(nodes_per_sd * 12.0);
  opts.growth = 1.1;
  auto logf = [&](double t) { return law.log_marginal(scalar(t)); };
  ScanGrid grid = scan_log_function(logf, lap.mode(0), opts);
  LinearCdf lc;
  lc.build(grid);
  x_ = std::move(lc.x);
  pdf_ = std::move(lc.pdf);
  cum_ = std::move(lc.cum);
}

double
GridSampler::invert(double u) const
{
  LinearCdf lc{ x_, pdf_, cum_ };
  return lc.invert(u);
}

double
GridSampler::draw_pivot(Stream& stream) const
{
  return invert(stream.uniform());
}

std::pair<double, double>
GridSampler::draw_st(Stream& stream) const
{
  if (law_->kind() != LawKind::st_given_a)
    fail(ErrorKind::invalid_argument, "the U law has no scale component");
  double t = draw_pivot(stream);
  Eigen::VectorXd b = law_->ancillary() + law_->X().col(0) * t;
  ScanOptions opts = law_->log_s_scan(b);
  opts.step *= 0.5;
  double rms = std::sqrt(b.squaredNorm() / static_cast<double>(b.size()));
  double centre = rms > 0.0 ? -std::log(rms) : 0.0;
  if (centre >= opts.upper)
    centre = opts.upper - 10.0 * opts.step;
  auto logf = [&](double w) { return law_->log_w_integrand(w, b, 0); };
  ScanGrid grid = scan_log_function(logf, centre, opts);
  LinearCdf lc;
  lc.build(grid);
  double w = lc.invert(stream.uniform());
  return { std::exp(w), t };
}

double
GridSampler::cdf(double t) const
{
  LinearCdf lc{ x_, pdf_, cum_ };
  return lc.cdf(t);
}

double
GridSampler::quantile(double prob) const
{
  if (!(prob >= 0.0 && prob <= 1.0))
    fail(ErrorKind::invalid_argument, "probability must lie in [0, 1]");
  return invert(prob);
}

// Metropolis

namespace {

LawDraws
metropolis(const ConditionalLaw& law,
           std::size_t n_draws,
           Stream& stream,
           const MetropolisOptions& opts)
{
  const bool st = law.kind() == LawKind::st_given_a;
  const Eigen::Index p = law.p();
  const Eigen::Index dim = p + (st ? 1 : 0);
  LaplaceApprox lap = law.laplace();

  // state: (t, w) or u
  Eigen::VectorXd x(dim);
  x.head(p) = lap.mode;
  Eigen::VectorXd step(dim);
  for (Eigen::Index j = 0; j < p; ++j)
    step(j) = 2.4 * std::sqrt(lap.cov(j, j));
  if (st) {
    Eigen::VectorXd b = law.ancillary() + law.X() * lap.mode;
    ScanOptions so = law.log_s_scan(b);
    double rms = std::sqrt(b.squaredNorm() / static_cast<double>(b.size()));
    double centre = rms > 0.0 ? -std::log(rms) : 0.0;
    if (centre >= so.upper)
      centre = so.upper - 10.0 * so.step;
    ScanGrid g = scan_log_function([&](double w) { return law.log_w_integrand(w, b, 0); }, centre, so);
    x(p) = g.argmax;
    step(p) = 2.4 / std::sqrt(2.0 * static_cast<double>(law.n()));
  }
  auto target = [&](const Eigen::VectorXd& state) {
    if (st) {
      Eigen::VectorXd b = law.ancillary() + law.X() * state.head(p);
      return law.log_w_integrand(state(p), b, 0);
    }
    return law.log_g_u(state);
  };
  double current = target(x);
  if (!std::isfinite(current))
    fail(ErrorKind::chain_diagnostics_failure, "chain starts outside the support");

  Eigen::VectorXd accepted = Eigen::VectorXd::Zero(dim);
  std::size_t window = 0;
  auto sweep = [&](bool adapt) {
    std::size_t acc = 0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      Eigen::VectorXd y = x;
      y(j) += step(j) * stream.normal();
      double proposal = target(y);
      if (std::isfinite(proposal) && std::log(stream.uniform()) < proposal - current) {
        x = std::move(y);
        current = proposal;
        ++acc;
        if (adapt)
          accepted(j) += 1.0;
      }
    }
    return acc;
  };

  for (std::size_t it = 0; it < opts.burn_in; ++it) {
    sweep(true);
    if (++window == 50) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        double rate = accepted(j) / 50.0;
        if (rate < opts.target_low)
          step(j) *= 0.7;
        else if (rate > opts.target_high)
          step(j) *= 1.3;
      }
      accepted.setZero();
      window = 0;
    }
  }

  LawDraws out;
  out.pivot.resize(static_cast<Eigen::Index>(n_draws), p);
  if (st)
    out.s.resize(static_cast<Eigen::Index>(n_draws));
  std::size_t total_acc = 0;
  std::size_t total_prop = 0;
  const std::size_t thin = std::max<std::size_t>(opts.thin, 1);
  for (std::size_t r = 0; r < n_draws; ++r) {
    for (std::size_t k = 0; k < thin; ++k) {
      total_acc += sweep(false);
      total_prop += static_cast<std::size_t>(dim);
    }
    out.pivot.row(static_cast<Eigen::Index>(r)) = x.head(p).transpose();
    if (st)
      out.s(static_cast<Eigen::Index>(r)) = std::exp(x(p));
  }
  out.acceptance_rate =
    total_prop > 0 ? static_cast<double>(total_acc) / static_cast<double>(total_prop) : 0.0;
  // too few proposals for a meaningful rate: single draws from a fresh chain
  if (total_prop >= 100 && (out.acceptance_rate < 0.05 || out.acceptance_rate > 0.95))
    fail(ErrorKind::chain_diagnostics_failure,
         "post burn-in acceptance rate " + std::to_string(out.acceptance_rate) +
           " outside [0.05, 0.95]");
  return out;
}

} // namespace

LawDraws
sample_law(const ConditionalLaw& law,
           std::size_t n_draws,
           Stream& stream,
           SampleMethod method,
           const MetropolisOptions& opts)
{
  if (method == SampleMethod::metropolis)
    return metropolis(law, n_draws, stream, opts);
  GridSampler sampler(law);
  LawDraws out;
  out.pivot.resize(static_cast<Eigen::Index>(n_draws), 1);
  const bool st = law.kind() == LawKind::st_given_a;
  if (st)
    out.s.resize(static_cast<Eigen::Index>(n_draws));
  for (std::size_t r = 0; r < n_draws; ++r) {
    auto i = static_cast<Eigen::Index>(r);
    if (st) {
      auto [s, t] = sampler.draw_st(stream);
      out.s(i) = s;
      out.pivot(i, 0) = t;
    } else {
      out.pivot(i, 0) = sampler.draw_pivot(stream);
    }
  }
  return out;
}

// dataset generation

ConditionalGenerator::ConditionalGenerator(const ConditionalLaw& law)
  : law_(&law)
{
  if (law.p() == 1)
    grid_.emplace(law);
}

Dataset
ConditionalGenerator::draw(const Eigen::VectorXd& beta, double sigma, Stream& stream) const
{
  const auto& X = law_->X();
  const auto& a = law_->ancillary();
  Eigen::VectorXd pivot;
  double s = 1.0;
  if (grid_) {
    if (law_->kind() == LawKind::st_given_a) {
      auto st = grid_->draw_st(stream);
      s = st.first;
      pivot = scalar(st.second);
    } else {
      pivot = scalar(grid_->draw_pivot(stream));
    }
  } else {
    MetropolisOptions opts;
    opts.burn_in = 1000;
    opts.thin = 1;
    LawDraws d = metropolis(*law_, 1, stream, opts);
    pivot = d.pivot.row(0).transpose();
    if (law_->kind() == LawKind::st_given_a)
      s = d.s(0);
  }
  Eigen::VectorXd y;
  if (law_->kind() == LawKind::st_given_a)
    y = X * beta + sigma * s * (X * pivot + a);
  else
    y = X * beta + X * pivot + a;
  return Dataset(X, std::move(y));
}

Dataset
rejection_conditional_dataset(const Eigen::VectorXd& ancillary,
                              const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& beta,
                              double sigma,
                              const ErrorDensity& density,
                              ModelKind kind,
                              const Refitter& refit,
                              double tolerance,
                              std::size_t max_tries,
                              Stream& stream,
                              std::size_t* tries)
{
  const Eigen::Index n = X.rows();
  Eigen::VectorXd mean = X * beta;
  Eigen::VectorXd y(n);
  for (std::size_t k = 1; k <= max_tries; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double e = density.sample_one(stream);
      y(i) = mean(i) + (kind == ModelKind::regression_scale ? sigma * e : e);
    }
    PointFit pf = refit(y);
    Eigen::VectorXd resid = y - X * pf.beta_hat;
    if (kind == ModelKind::regression_scale) {
      if (!(pf.sigma_hat > 0.0))
        continue;
      resid /= pf.sigma_hat;
    }
    if ((resid - ancillary).cwiseAbs().maxCoeff() <= tolerance) {
      if (tries)
        *tries = k;
      return Dataset(X, y);
    }
  }
  fail(ErrorKind::rejection_budget_exceeded,
       "no acceptance within " + std::to_string(max_tries) + " tries");
}

Dataset
generate_conditional_dataset(const Eigen::VectorXd& ancillary,
                             const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& beta,
                             double sigma,
                             const DensityPtr& density,
                             ModelKind kind,
                             Stream& stream,
                             const GenerationOptions& opts)
{
  if (opts.method == GenerationMethod::rejection) {
    Refitter refit(X, opts.estimator);
    return rejection_conditional_dataset(ancillary, X, beta, sigma, *density, kind, refit,
                                         opts.tolerance, opts.max_tries, stream);
  }
  ConditionalLaw law(law_kind_for(kind), ancillary, X, density);
  ConditionalGenerator gen(law);
  return gen.draw(beta, sigma, stream);
}

} // namespace condinf
