#include "condinf/quadrature.hpp"

#include "condinf/error.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

namespace condinf {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

struct SideScan
{
  std::vector<double> x;
  std::vector<double> logf;
};

void
scan_side(const LogFunction& logf,
          double start,
          int direction,
          const ScanOptions& opts,
          double& running_max,
          double& argmax,
          SideScan& out)
{
  const double limit = direction > 0 ? opts.upper : opts.lower;
  double x = start;
  double step = opts.step;
  std::size_t below = 0;
  for (std::size_t k = 1; k <= opts.max_nodes; ++k) {
    if (k > opts.linear_steps)
      step *= opts.growth;
    double next = x + direction * step;
    if ((direction > 0 && next >= limit) || (direction < 0 && next <= limit)) {
      out.x.push_back(limit);
      out.logf.push_back(std::numeric_limits<double>::quiet_NaN());
      return;
    }
    x = next;
    double v = logf(x);
    if (std::isnan(v))
      v = neg_inf;
    out.x.push_back(x);
    out.logf.push_back(v);
    if (v > running_max && std::isfinite(v)) {
      running_max = v;
      argmax = x;
    }
    if (!(v > running_max - opts.drop)) {
      if (++below >= 3 && std::isfinite(running_max))
        return;
    } else {
      below = 0;
    }
  }
  fail(ErrorKind::integration_failure,
       "integrand does not decay within the scan budget (tails too heavy)");
}

} // namespace

double
log_add(double a, double b)
{
  if (a == neg_inf)
    return b;
  if (b == neg_inf)
    return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

ScanGrid
scan_log_function(const LogFunction& logf, double centre, const ScanOptions& opts)
{
  if (!(opts.lower < opts.upper))
    fail(ErrorKind::integration_failure, "empty integration range");
  double c = centre;
  if (!(c > opts.lower && c < opts.upper)) {
    if (std::isfinite(opts.lower) && std::isfinite(opts.upper))
      c = 0.5 * (opts.lower + opts.upper);
    else if (std::isfinite(opts.lower))
      c = opts.lower + opts.step;
    else
      c = opts.upper - opts.step;
  }
  ScanOptions local = opts;
  if (std::isfinite(opts.lower) && std::isfinite(opts.upper))
    local.step = std::min(opts.step, (opts.upper - opts.lower) / 8.0);

  double running_max = neg_inf;
  double argmax = c;
  double v0 = logf(c);
  if (std::isnan(v0))
    v0 = neg_inf;
  if (std::isfinite(v0)) {
    running_max = v0;
  }
  SideScan right, left;
  scan_side(logf, c, +1, local, running_max, argmax, right);
  scan_side(logf, c, -1, local, running_max, argmax, left);
  if (!std::isfinite(running_max))
    fail(ErrorKind::integration_failure, "integrand vanishes on the scanned range");

  ScanGrid grid;
  grid.x.reserve(left.x.size() + right.x.size() + 1);
  for (std::size_t k = left.x.size(); k-- > 0;) {
    grid.x.push_back(left.x[k]);
    grid.logf.push_back(left.logf[k]);
  }
  grid.x.push_back(c);
  grid.logf.push_back(v0);
  for (std::size_t k = 0; k < right.x.size(); ++k) {
    grid.x.push_back(right.x[k]);
    grid.logf.push_back(right.logf[k]);
  }
  grid.max_log = running_max;
  grid.argmax = argmax;
  return grid;
}

double
integrate_scaled(const LogFunction& logf,
                 const std::function<double(double)>& weight,
                 const ScanGrid& grid,
                 const ScanOptions& opts)
{
  const double cutoff = grid.max_log - opts.drop - 5.0;
  auto integrand = [&](double x) {
    double v = logf(x);
    if (!(v > neg_inf))
      return 0.0;
    return weight(x) * std::exp(v - grid.max_log);
  };
  auto negligible = [&](double v) { return !std::isnan(v) && !(v > cutoff); };

  const std::size_t m = grid.x.size();
  const std::size_t stride = std::max<std::size_t>(opts.nodes_per_piece, 1);
  // trapezoid mass per grid cell; piece tolerances are set against the
  // whole integral instead of the piece itself
  auto node_value = [&](std::size_t j) {
    double v = grid.logf[j];
    if (std::isnan(v))
      v = j == 0 ? grid.logf[std::min<std::size_t>(1, m - 1)] : grid.logf[j - 1];
    return std::isnan(v) ? 0.0 : std::abs(weight(grid.x[j])) * std::exp(v - grid.max_log);
  };
  auto trapezoid = [&](std::size_t from, std::size_t to) {
    double sum = 0.0;
    for (std::size_t j = from; j < to; ++j)
      sum += 0.5 * (node_value(j) + node_value(j + 1)) * (grid.x[j + 1] - grid.x[j]);
    return sum;
  };
  const double overall = m > 1 ? trapezoid(0, m - 1) : 0.0;
  auto piece_tol = [&](std::size_t from, std::size_t to) {
    double local = trapezoid(from, to);
    if (!(local > 0.0) || !(overall > 0.0))
      return opts.rel_tol;
    return std::clamp(opts.rel_tol * overall / local, opts.rel_tol, 1e-3);
  };
  const unsigned depth = opts.max_depth;

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < m;) {
    std::size_t e = std::min(k + stride, m - 1);
    // a piece never swallows a limit node from the inside
    if (e + 1 == m - 1 && std::isnan(grid.logf[m - 1]))
      e = m - 1;
    double a = grid.x[k];
    double b = grid.x[e];
    bool all_small = true;
    for (std::size_t j = k; j <= e && all_small; ++j)
      all_small = negligible(grid.logf[j]);
    if (!(b > a) || all_small) {
      k = e;
      continue;
    }
    bool singular_end = (k == 0 && opts.singular_lower && std::isnan(grid.logf[k])) ||
                        (e == m - 1 && opts.singular_upper && std::isnan(grid.logf[e]));
    double piece = 0.0;
    const double tol = piece_tol(k, e);
    if (singular_end) {
      // keep the singular limit inside a short tanh-sinh piece
      double inner = std::isnan(grid.logf[k]) && k == 0 ? grid.x[k + 1] : grid.x[e - 1];
      boost::math::quadrature::tanh_sinh<double> ts(15);
      double err = 0.0;
      if (k == 0 && std::isnan(grid.logf[k])) {
        piece = ts.integrate(integrand, a, inner, tol, &err);
        if (inner < b)
          piece += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            integrand, inner, b, depth, tol, &err);
      } else {
        if (a < inner)
          piece = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            integrand, a, inner, depth, tol, &err);
        piece += ts.integrate(integrand, inner, b, tol, &err);
      }
    } else {
      double err = 0.0;
      piece = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, a, b, depth, tol, &err);
    }
    if (!std::isfinite(piece))
      fail(ErrorKind::integration_failure, "non-finite quadrature piece");
    total += piece;
    k = e;
  }
  return total;
}

double
log_integrate(const LogFunction& logf, double centre, const ScanOptions& opts)
{
  ScanGrid grid = scan_log_function(logf, centre, opts);
  double scaled = integrate_scaled(logf, [](double) { return 1.0; }, grid, opts);
  if (!(scaled > 0.0))
    fail(ErrorKind::integration_failure, "integral is not positive");
  return grid.max_log + std::log(scaled);
}

} // namespace condinf
