#include <doctest.h>

#include "condinf/error.hpp"
#include "condinf/kernel.hpp"
#include "oracle.hpp"

#include <algorithm>
#include <cmath>

using namespace condinf;

namespace {

std::vector<double>
normal_points(std::size_t n, std::uint64_t seed)
{
  return NormalDensity().sample(n, seed);
}

std::vector<KernelSpec>
kernels()
{
  return { KernelSpec::gaussian(), KernelSpec::quartic(), KernelSpec::triweight() };
}

} // namespace

TEST_CASE("kernel moments")
{
  for (const auto& k : kernels()) {
    double c = std::isfinite(k.half_width()) ? k.half_width() : 12.0;
    INFO(k.name());
    CHECK(oracle::integrate([&](double u) { return k.eval(u); }, -c, c) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(oracle::integrate([&](double u) { return u * k.eval(u); }, -c, c)) < 1e-12);
    CHECK(oracle::integrate([&](double u) { return u * u * k.eval(u); }, -c, c) > 0.0);
    CHECK(k.eval(0.7) == k.eval(-0.7));
    if (std::isfinite(k.half_width()))
      CHECK(k.eval(1.01) == 0.0);
  }
}

TEST_CASE("kde")
{
  std::vector<double> one{ 0.0 };
  CHECK(kde(one, 1.0, KernelSpec::gaussian(), 0, 0.0) == doctest::Approx(0.398942).epsilon(1e-6));
  CHECK_THROWS_AS(kde(one, 0.0, KernelSpec::gaussian(), 0, 0.0), Error);

  std::vector<double> pts = normal_points(30, 2);
  for (const auto& k : kernels()) {
    double total = oracle::integrate([&](double z) { return kde(pts, 0.4, k, 0, z); }, -12, 12, 0.1);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
  for (double z = -2.5; z <= 2.5; z += 0.5) {
    double e = 1e-5;
    double fd = (kde(pts, 0.6, KernelSpec::gaussian(), 0, z + e) -
                 kde(pts, 0.6, KernelSpec::gaussian(), 0, z - e)) /
                (2 * e);
    CHECK(std::abs(kde(pts, 0.6, KernelSpec::gaussian(), 1, z) - fd) < 1e-5);
    double fd2 = (kde(pts, 0.6, KernelSpec::gaussian(), 1, z + e) -
                  kde(pts, 0.6, KernelSpec::gaussian(), 1, z - e)) /
                 (2 * e);
    CHECK(std::abs(kde(pts, 0.6, KernelSpec::gaussian(), 2, z) - fd2) < 1e-5);
  }
}

TEST_CASE("kde is continuous in h")
{
  std::vector<double> pts = normal_points(20, 3);
  for (double h : { 0.2, 0.7, 1.5 })
    CHECK(kde(pts, h + 1e-9, KernelSpec::quartic(), 0, 0.3) ==
          doctest::Approx(kde(pts, h, KernelSpec::quartic(), 0, 0.3)).epsilon(1e-7));
}

TEST_CASE("leave one out")
{
  std::vector<double> two{ -1.0, 1.0 };
  std::vector<double> rest{ -1.0 };
  for (double z : { -2.0, -1.0, 0.0, 0.5 })
    CHECK(kde_loo(two, 1, 0.8, KernelSpec::gaussian(), 0, z) ==
          doctest::Approx(kde(rest, 0.8, KernelSpec::gaussian(), 0, z)).epsilon(1e-15));
  CHECK_THROWS_AS(kde_loo(two, 2, 0.8, KernelSpec::gaussian(), 0, 0.0), Error);

  std::vector<double> pts = normal_points(100, 4);
  double worst = 0.0;
  for (double z = -3; z <= 3; z += 0.25) {
    double avg = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      avg += kde_loo(pts, i, 0.5, KernelSpec::gaussian(), 0, z);
    avg /= static_cast<double>(pts.size());
    worst = std::max(worst, std::abs(avg - kde(pts, 0.5, KernelSpec::gaussian(), 0, z)));
  }
  CHECK(worst < 1e-2);

  std::vector<double> far{ 0.0, 0.1, 10.0 };
  CHECK(kde_loo(far, 2, 0.5, KernelSpec::quartic(), 0, 10.0) == 0.0);
}

TEST_CASE("symmetrize")
{
  std::vector<double> sym{ -1.0, 0.0, 1.0 };
  for (double z = -3; z <= 3; z += 0.3)
    CHECK(std::abs(symmetrize(sym, 0.7, KernelSpec::gaussian(), z) -
                   kde(sym, 0.7, KernelSpec::gaussian(), 0, z)) <= 1e-12);
  std::vector<double> pts = normal_points(15, 6);
  for (auto& v : pts)
    v += 0.8;
  for (double z = -3; z <= 3; z += 0.3)
    CHECK(symmetrize(pts, 0.5, KernelSpec::triweight(), z) ==
          symmetrize(pts, 0.5, KernelSpec::triweight(), -z));
  CHECK(oracle::integrate([&](double z) { return symmetrize(pts, 0.5, KernelSpec::gaussian(), z); },
                          -12, 12, 0.1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("score estimate")
{
  std::vector<double> pts = normal_points(2000, 7);
  Bandwidths bw = rate_bandwidths(pts.size(), 2, sample_sd(pts));
  std::vector<double> sorted = pts;
  std::sort(sorted.begin(), sorted.end());
  double lo = sorted[100], hi = sorted[1899];
  double err = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i] < lo || pts[i] > hi)
      continue;
    err += std::abs(score_estimate(pts, i, bw, KernelSpec::gaussian()) + pts[i]);
    ++count;
  }
  CHECK(err / count <= 0.15);

  std::vector<double> mirror{ -2.0, -0.5, 0.3, 0.5, 2.0, -0.3 };
  Bandwidths b{ 0.6, 0.8, 0.0 };
  CHECK(score_estimate(mirror, 1, b, KernelSpec::gaussian()) ==
        -score_estimate(mirror, 3, b, KernelSpec::gaussian()));

  Bandwidths big{ 0.6, 0.8, 10.0 };
  for (std::size_t i = 0; i < mirror.size(); ++i) {
    double bound = 0.0;
    for (double z : { mirror[i], -mirror[i] })
      bound = std::max(bound, std::abs(kde_loo(mirror, i, 0.8, KernelSpec::gaussian(), 1, z)));
    CHECK(std::abs(score_estimate(mirror, i, big, KernelSpec::gaussian())) <= bound / 10 + 1e-15);
  }
}

TEST_CASE("score estimate converges")
{
  double prev = 1e9;
  for (std::size_t n : { 200, 800, 3200 }) {
    std::vector<double> errs;
    for (std::uint64_t r = 0; r < 50; ++r) {
      std::vector<double> pts = normal_points(n, 1000 + r);
      Bandwidths bw = rate_bandwidths(n, 2, sample_sd(pts));
      bw.trim = 0.0;
      std::vector<double> e;
      for (std::size_t i = 0; i < n; i += n / 100)
        e.push_back(std::abs(score_estimate(pts, i, bw, KernelSpec::gaussian()) + pts[i]));
      std::nth_element(e.begin(), e.begin() + e.size() / 2, e.end());
      errs.push_back(e[e.size() / 2]);
    }
    std::nth_element(errs.begin(), errs.begin() + 25, errs.end());
    CHECK(errs[25] < prev);
    prev = errs[25];
  }
}

TEST_CASE("rate bandwidths")
{
  Bandwidths a = rate_bandwidths(100, 2, 1.0);
  Bandwidths b = rate_bandwidths(200, 2, 1.0);
  Bandwidths c = rate_bandwidths(100, 2, 2.0);
  CHECK(a.h1 == doctest::Approx(default_bandwidth_constant * std::pow(100.0, -1.0 / 9.0)));
  CHECK(b.h1 / a.h1 == doctest::Approx(std::pow(2.0, -1.0 / 9.0)).epsilon(1e-14));
  CHECK(c.h0 == doctest::Approx(2 * a.h0).epsilon(1e-14));
  CHECK(c.h1 == doctest::Approx(2 * a.h1).epsilon(1e-14));
  CHECK(a.trim == doctest::Approx(default_trim(100, a.h0)));
  CHECK(default_trim(100, a.h0) == doctest::Approx(0.01 / std::sqrt(100 * a.h0)));
}

TEST_CASE("plug-in density")
{
  std::vector<double> pts = normal_points(25, 9);
  PluginDensity f(pts, 0.5);
  for (double z = -4; z <= 4; z += 0.35) {
    CHECK(f.density(z) == doctest::Approx(symmetrize(pts, 0.5, KernelSpec::gaussian(), z)).epsilon(1e-12));
    double e = 1e-5;
    CHECK(f.score(z) ==
          doctest::Approx((f.log_density(z + e) - f.log_density(z - e)) / (2 * e)).epsilon(1e-6));
  }
  // far tail is finite in log space
  CHECK(std::isfinite(f.log_density(60.0)));
  CHECK(f.score(60.0) == doctest::Approx(-(60.0 - *std::max_element(f.points().begin(), f.points().end())) / 0.25).epsilon(1e-6));
  PluginDensity q(pts, 0.5, KernelSpec::quartic());
  CHECK(q.log_density(50.0) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(PluginDensity(pts, -1.0), Error);
}
