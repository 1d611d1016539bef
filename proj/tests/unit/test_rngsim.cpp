#include <doctest.h>

#include "condinf/parallel.hpp"
#include "condinf/rng.hpp"
#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

using namespace condinf;

TEST_CASE("philox block matches the published known answer")
{
  auto out = Stream::philox({ 0, 0, 0, 0 }, { 0, 0 });
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  auto ones = Stream::philox({ 0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu },
                             { 0xffffffffu, 0xffffffffu });
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("derived streams differ by index and repeat by path")
{
  SeedTree s(42);
  Stream a = s.derive("rep", 1).stream();
  Stream b = s.derive("rep", 2).stream();
  CHECK(a() != b());

  Stream c = s.derive("rep", 1).stream();
  Stream d = s.derive("rep", 1).stream();
  for (int i = 0; i < 100; ++i)
    CHECK(c() == d());

  CHECK(s.derive("rep", 1).key() != s.derive("draw", 1).key());
  CHECK(s.derive("rep", 1).derive("x", 0).key() == SeedTree(42).derive("rep", 1).derive("x", 0).key());
  CHECK(SeedTree(1).derive("rep", 1).key() != SeedTree(2).derive("rep", 1).key());
}

TEST_CASE("ten thousand derived streams have distinct first outputs")
{
  SeedTree s(7);
  std::unordered_set<std::uint64_t> seen;
  std::size_t collisions = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    Stream st = s.derive("rep", i).stream();
    if (!seen.insert(st()).second)
      ++collisions;
  }
  CHECK(collisions == 0);
}

TEST_CASE("uniform draws have mean one half")
{
  Stream st = SeedTree(11).derive("u", 0).stream();
  auto u = uniforms(st, 1000000);
  double mean = std::accumulate(u.begin(), u.end(), 0.0) / u.size();
  CHECK(std::abs(mean - 0.5) < 0.002);
  CHECK(*std::min_element(u.begin(), u.end()) > 0.0);
  CHECK(*std::max_element(u.begin(), u.end()) < 1.0);
}

TEST_CASE("normal draws match the standard normal law")
{
  Stream st = SeedTree(12).derive("z", 0).stream();
  auto z = normals(st, 1000000);
  double mean = std::accumulate(z.begin(), z.end(), 0.0) / z.size();
  double ss = 0.0;
  for (double v : z)
    ss += (v - mean) * (v - mean);
  double var = ss / (z.size() - 1);
  CHECK(std::abs(var - 1.0) < 0.01);
  CHECK(oracle::ks_statistic(z, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }) < 0.002);
}

TEST_CASE("streams are independent values")
{
  Stream a = SeedTree(3).stream();
  a();
  Stream b = a;
  CHECK(a() == b());
  CHECK(a.uniform() == b.uniform());
}

TEST_CASE("parallel reduction over derived streams ignores worker count")
{
  SeedTree s(99);
  auto run = [&](int workers) {
    std::vector<double> slot(257);
    parallel_for(slot.size(), workers, [&](std::size_t i) {
      Stream st = s.derive("rep", i).stream();
      double acc = 0.0;
      for (int k = 0; k < 100; ++k)
        acc += st.normal();
      slot[i] = acc;
    });
    return std::accumulate(slot.begin(), slot.end(), 0.0);
  };
  double seq = run(1);
  CHECK(run(2) == seq);
  CHECK(run(4) == seq);
  CHECK(run(7) == seq);
}

TEST_CASE("parallel_for rethrows task errors")
{
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 5)
                                   throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}
