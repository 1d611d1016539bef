#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace condinf {

//! Counter-based random stream (Philox4x32-10 keyed by a 64-bit key).
//!
//! A stream holds only its key, a block counter and a small output buffer,
//! so copies are independent and a stream can be handed to any thread.
//! Satisfies UniformRandomBitGenerator.
class Stream
{
public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{ 0 }; }

  result_type operator()();

  //! Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  //! Standard normal by the Box-Muller transform of two consecutive
  //! uniforms; the second variate of each pair is cached.
  double normal();
  //! Gamma(shape, 1): Marsaglia-Tsang squeeze, with the shape + 1 boost
  //! for shape < 1.
  double gamma(double shape);
  //! log of a Gamma(shape, 1) draw; stable for tiny shapes.
  double log_gamma_draw(double shape);
  //! Beta(a, b) through two gamma draws in log space.
  double beta(double a, double b);
  //! Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t key() const { return key_; }

  //! Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key);

private:
  void refill();

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

//! A master seed plus a path of (label, index) steps. Every node maps to a
//! fixed stream key, so sub-streams are a pure function of the path and do
//! not depend on execution order.
class SeedTree
{
public:
  explicit SeedTree(std::uint64_t master = 0);

  SeedTree derive(std::string_view label, std::uint64_t index) const;
  Stream stream() const { return Stream(key_); }

  std::uint64_t master() const { return master_; }
  std::uint64_t key() const { return key_; }
  const std::string& path() const { return path_; }

private:
  std::uint64_t master_;
  std::uint64_t key_;
  std::string path_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t hash_label(std::string_view label);

std::vector<double> uniforms(Stream& stream, std::size_t n);
std::vector<double> normals(Stream& stream, std::size_t n);

} // namespace condinf
