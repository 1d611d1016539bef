#include "condinf/kernel.hpp"

#include "condinf/error.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <numeric>

namespace condinf {

namespace {

constexpr double inv_sqrt_2pi = 0.39894228040143267794;

void
check_bandwidth(double h)
{
  if (!(h > 0.0) || !std::isfinite(h))
    fail(ErrorKind::bad_bandwidth, "bandwidth must be positive and finite");
}

void
check_order(int m)
{
  if (m < 0 || m > 2)
    fail(ErrorKind::invalid_argument, "kernel derivative order must be 0, 1 or 2");
}

double
kernel_sum(std::span<const double> points,
           std::size_t skip,
           double h,
           const KernelSpec& k,
           int m,
           double z)
{
  double sum = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (j == skip)
      continue;
    sum += k.eval((z - points[j]) / h, m);
  }
  return sum;
}

} // namespace

double
KernelSpec::half_width() const
{
  return id == KernelId::gaussian ? std::numeric_limits<double>::infinity() : 1.0;
}

double
KernelSpec::eval(double u, int m) const
{
  switch (id) {
    case KernelId::gaussian: {
      double phi = inv_sqrt_2pi * std::exp(-0.5 * u * u);
      if (m == 0)
        return phi;
      if (m == 1)
        return -u * phi;
      return (u * u - 1.0) * phi;
    }
    case KernelId::quartic: {
      if (std::abs(u) >= 1.0)
        return 0.0;
      double w = 1.0 - u * u;
      if (m == 0)
        return 15.0 / 16.0 * w * w;
      if (m == 1)
        return -15.0 / 4.0 * u * w;
      return -15.0 / 4.0 * (1.0 - 3.0 * u * u);
    }
    case KernelId::triweight: {
      if (std::abs(u) >= 1.0)
        return 0.0;
      double w = 1.0 - u * u;
      if (m == 0)
        return 35.0 / 32.0 * w * w * w;
      if (m == 1)
        return -105.0 / 16.0 * u * w * w;
      return -105.0 / 16.0 * w * (1.0 - 5.0 * u * u);
    }
  }
  return 0.0;
}

double
KernelSpec::sample(Stream& stream) const
{
  switch (id) {
    case KernelId::gaussian:
      return stream.normal();
    case KernelId::quartic:
      // Beta(3, 3) on [-1, 1] has density proportional to (1 - u^2)^2.
      return 2.0 * stream.beta(3.0, 3.0) - 1.0;
    case KernelId::triweight:
      return 2.0 * stream.beta(4.0, 4.0) - 1.0;
  }
  return 0.0;
}

std::string
KernelSpec::name() const
{
  switch (id) {
    case KernelId::gaussian:
      return "gaussian";
    case KernelId::quartic:
      return "quartic";
    case KernelId::triweight:
      return "triweight";
  }
  return "gaussian";
}

KernelSpec
parse_kernel(const std::string& s)
{
  if (s == "gaussian" || s == "normal")
    return KernelSpec::gaussian();
  if (s == "quartic" || s == "biweight")
    return KernelSpec::quartic();
  if (s == "triweight")
    return KernelSpec::triweight();
  fail(ErrorKind::parse_error, "unknown kernel '" + s + "'");
}

double
kde(std::span<const double> points, double h, const KernelSpec& k, int m, double z)
{
  check_bandwidth(h);
  check_order(m);
  if (points.empty())
    fail(ErrorKind::invalid_argument, "kde needs at least one point");
  double n = static_cast<double>(points.size());
  return kernel_sum(points, points.size(), h, k, m, z) / (n * std::pow(h, m + 1));
}

double
kde_loo(std::span<const double> points,
        std::size_t i,
        double h,
        const KernelSpec& k,
        int m,
        double z)
{
  check_bandwidth(h);
  check_order(m);
  if (points.size() < 2)
    fail(ErrorKind::invalid_argument, "leave-one-out kde needs n >= 2");
  if (i >= points.size())
    fail(ErrorKind::index_out_of_range, "index " + std::to_string(i) + " out of range");
  double n1 = static_cast<double>(points.size() - 1);
  return kernel_sum(points, i, h, k, m, z) / (n1 * std::pow(h, m + 1));
}

double
symmetrize(std::span<const double> points, double h, const KernelSpec& k, double z)
{
  return 0.5 * (kde(points, h, k, 0, z) + kde(points, h, k, 0, -z));
}

double
score_estimate(std::span<const double> points,
               std::size_t i,
               const Bandwidths& bw,
               const KernelSpec& k)
{
  check_bandwidth(bw.h0);
  check_bandwidth(bw.h1);
  if (points.size() < 2)
    fail(ErrorKind::invalid_argument, "score estimate needs n >= 2");
  if (i >= points.size())
    fail(ErrorKind::index_out_of_range, "index " + std::to_string(i) + " out of range");
  double trim = std::max(bw.trim, 0.0);
  auto ratio = [&](double z) {
    double num = kde_loo(points, i, bw.h1, k, 1, z);
    double den = std::max(kde_loo(points, i, bw.h0, k, 0, z), trim);
    return den > 0.0 ? num / den : 0.0;
  };
  double a = points[i];
  return 0.5 * (ratio(a) - ratio(-a));
}

Bandwidths
rate_bandwidths(std::size_t n, int q, double scale, double c0, double c1)
{
  if (n < 2)
    fail(ErrorKind::invalid_argument, "rate bandwidths need n >= 2");
  if (q < 2)
    fail(ErrorKind::invalid_argument, "kernel order q must be >= 2");
  if (!(scale > 0.0))
    fail(ErrorKind::bad_bandwidth, "residual scale must be positive");
  double rate = std::pow(static_cast<double>(n), -1.0 / (5.0 + 2.0 * q));
  Bandwidths bw;
  bw.h0 = c0 * scale * rate;
  bw.h1 = c1 * scale * rate;
  bw.trim = default_trim(n, bw.h0);
  return bw;
}

double
default_trim(std::size_t n, double h0)
{
  return 0.01 / std::sqrt(static_cast<double>(n) * h0);
}

double
normal_reference_bandwidth(std::size_t n, double scale)
{
  return 1.06 * scale * std::pow(static_cast<double>(n), -0.2);
}

double
sample_sd(std::span<const double> x)
{
  if (x.size() < 2)
    return 0.0;
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x)
    ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

// PluginDensity

namespace {

// node count from which Gaussian estimates are tabulated
constexpr std::size_t table_min_nodes = 128;

} // namespace

PluginDensity::PluginDensity(std::vector<double> points,
                             double h,
                             KernelSpec k,
                             bool symmetrized)
  : h_(h)
  , k_(k)
  , symmetrized_(symmetrized)
{
  check_bandwidth(h);
  if (points.empty())
    fail(ErrorKind::invalid_argument, "plug-in density needs at least one point");
  nodes_ = points;
  if (symmetrized) {
    for (double a : points)
      nodes_.push_back(-a);
  }
  std::sort(nodes_.begin(), nodes_.end());
  log_norm_ = -std::log(static_cast<double>(nodes_.size()) * h_);
  if (k_.id == KernelId::gaussian && nodes_.size() >= table_min_nodes) {
    double reach = std::max(std::abs(nodes_.front()), std::abs(nodes_.back())) + 8.0 * h_;
    table_step_ = h_ / 20.0;
    auto half = static_cast<std::size_t>(std::ceil(reach / table_step_));
    table_half_ = static_cast<double>(half) * table_step_;
    table_.reserve(2 * half + 1);
    for (std::size_t i = 0; i <= 2 * half; ++i)
      table_.push_back(
        exact_log_derivs((static_cast<double>(i) - static_cast<double>(half)) * table_step_));
  }
}

std::array<double, 3>
PluginDensity::exact_log_derivs(double z) const
{
  double s0, s1, s2, shift;
  kernel_sums(z, s0, s1, s2, shift);
  double r1 = s1 / s0;
  return { log_norm_ + shift + std::log(s0), r1 / h_, (s2 / s0 - r1 * r1) / (h_ * h_) };
}

std::string
PluginDensity::name() const
{
  std::string s = symmetrized_ ? "plugin-sym(" : "plugin(";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", h_);
  return s + k_.name() + ",h=" + buf + ",n=" +
         std::to_string(symmetrized_ ? nodes_.size() / 2 : nodes_.size()) + ")";
}

void
PluginDensity::kernel_sums(double z, double& s0, double& s1, double& s2, double& shift) const
{
  s0 = s1 = s2 = 0.0;
  shift = 0.0;
  if (k_.id == KernelId::gaussian) {
    // Gaussian terms are exp(-u^2/2); factor out the largest one and skip
    // nodes whose terms are below e^-37 of it.
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), z);
    double best = std::numeric_limits<double>::infinity();
    if (it != nodes_.end())
      best = std::min(best, (*it - z) / h_ * ((*it - z) / h_));
    if (it != nodes_.begin())
      best = std::min(best, (z - *(it - 1)) / h_ * ((z - *(it - 1)) / h_));
    shift = -0.5 * best;
    double reach = h_ * std::sqrt(best + 74.0);
    auto lo = std::lower_bound(nodes_.begin(), it, z - reach);
    auto hi = std::upper_bound(it, nodes_.end(), z + reach);
    for (auto p = lo; p != hi; ++p) {
      double u = (z - *p) / h_;
      double w = std::exp(-0.5 * u * u - shift);
      s0 += w;
      s1 += -u * w;
      s2 += (u * u - 1.0) * w;
    }
    s0 *= inv_sqrt_2pi;
    s1 *= inv_sqrt_2pi;
    s2 *= inv_sqrt_2pi;
    return;
  }
  double c = k_.half_width() * h_;
  auto lo = std::lower_bound(nodes_.begin(), nodes_.end(), z - c);
  auto hi = std::upper_bound(lo, nodes_.end(), z + c);
  for (auto p = lo; p != hi; ++p) {
    double u = (z - *p) / h_;
    s0 += k_.eval(u, 0);
    s1 += k_.eval(u, 1);
    s2 += k_.eval(u, 2);
  }
}

double
PluginDensity::log_density(double z) const
{
  if (!std::isfinite(z))
    return -std::numeric_limits<double>::infinity();
  if (!table_.empty() && std::abs(z) < table_half_) {
    double x = (z + table_half_) / table_step_;
    auto i = std::min(static_cast<std::size_t>(x), table_.size() - 2);
    double t = x - static_cast<double>(i);
    const auto& a = table_[i];
    const auto& b = table_[i + 1];
    double d = table_step_;
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
    double h3 = 0.5 * (t3 - 2 * t4 + t5);
    double h4 = -4 * t3 + 7 * t4 - 3 * t5;
    double h5 = 10 * t3 - 15 * t4 + 6 * t5;
    return a[0] * h0 + d * a[1] * h1 + d * d * a[2] * h2 + d * d * b[2] * h3 + d * b[1] * h4 +
           b[0] * h5;
  }
  double s0, s1, s2, shift;
  kernel_sums(z, s0, s1, s2, shift);
  if (!(s0 > 0.0))
    return -std::numeric_limits<double>::infinity();
  return log_norm_ + shift + std::log(s0);
}

double
PluginDensity::score1(double z) const
{
  double s0, s1, s2, shift;
  kernel_sums(z, s0, s1, s2, shift);
  return s1 / (s0 * h_);
}

double
PluginDensity::score2(double z) const
{
  double s0, s1, s2, shift;
  kernel_sums(z, s0, s1, s2, shift);
  double r1 = s1 / s0;
  return (s2 / s0 - r1 * r1) / (h_ * h_);
}

double
PluginDensity::sample_one(Stream& stream) const
{
  double centre = nodes_[stream.below(nodes_.size())];
  return centre + h_ * k_.sample(stream);
}

Support
PluginDensity::support() const
{
  double c = k_.half_width();
  if (!std::isfinite(c))
    return {};
  auto [lo, hi] = std::minmax_element(nodes_.begin(), nodes_.end());
  return { *lo - c * h_, *hi + c * h_ };
}

double
PluginDensity::variance() const
{
  double mean = 0.0;
  for (double a : nodes_)
    mean += a;
  mean /= static_cast<double>(nodes_.size());
  double ss = 0.0;
  for (double a : nodes_)
    ss += (a - mean) * (a - mean);
  double kernel_var = k_.id == KernelId::gaussian ? 1.0
                      : k_.id == KernelId::quartic ? 1.0 / 7.0
                                                    : 1.0 / 9.0;
  return ss / static_cast<double>(nodes_.size()) + h_ * h_ * kernel_var;
}

} // namespace condinf
