#include "condinf/rng.hpp"

#include <cmath>
#include <numbers>

namespace condinf {

namespace {

constexpr std::uint32_t philox_m0 = 0xD2511F53u;
constexpr std::uint32_t philox_m1 = 0xCD9E8D57u;
constexpr std::uint32_t philox_w0 = 0x9E3779B9u;
constexpr std::uint32_t philox_w1 = 0xBB67AE85u;

inline void
mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
  std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

} // namespace

std::array<std::uint32_t, 4>
Stream::philox(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
{
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += philox_w0;
      key[1] += philox_w1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(philox_m0, ctr[0], hi0, lo0);
    mulhilo(philox_m1, ctr[2], hi1, lo1);
    ctr = { hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0 };
  }
  return ctr;
}

Stream::Stream(std::uint64_t key)
  : key_(key)
{}

void
Stream::refill()
{
  std::array<std::uint32_t, 4> ctr = { static_cast<std::uint32_t>(counter_),
                                       static_cast<std::uint32_t>(counter_ >> 32),
                                       0u,
                                       0u };
  std::array<std::uint32_t, 2> key = { static_cast<std::uint32_t>(key_),
                                       static_cast<std::uint32_t>(key_ >> 32) };
  auto out = philox(ctr, key);
  buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  buffered_ = 2;
  ++counter_;
}

Stream::result_type
Stream::operator()()
{
  if (buffered_ == 0)
    refill();
  return buffer_[2 - buffered_--];
}

double
Stream::uniform()
{
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double
Stream::normal()
{
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

double
Stream::log_gamma_draw(double shape)
{
  if (shape < 1.0) {
    // G(a) = G(a + 1) * U^(1/a)
    double log_u = std::log(uniform());
    return log_gamma_draw(shape + 1.0) + log_u / shape;
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0)
      continue;
    v = v * v * v;
    double u = uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2)
      return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
      return std::log(d * v);
  }
}

double
Stream::gamma(double shape)
{
  return std::exp(log_gamma_draw(shape));
}

double
Stream::beta(double a, double b)
{
  double lx = log_gamma_draw(a);
  double ly = log_gamma_draw(b);
  return 1.0 / (1.0 + std::exp(ly - lx));
}

std::uint64_t
Stream::below(std::uint64_t n)
{
  // Lemire's multiply-shift with rejection of the biased low range.
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
  std::uint64_t low = static_cast<std::uint64_t>(m);
  if (low < n) {
    std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t
splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t
hash_label(std::string_view label)
{
  // FNV-1a, then finalized.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return splitmix64(h);
}

SeedTree::SeedTree(std::uint64_t master)
  : master_(master)
  , key_(splitmix64(master))
{}

SeedTree
SeedTree::derive(std::string_view label, std::uint64_t index) const
{
  SeedTree child = *this;
  std::uint64_t mixed = splitmix64(key_ ^ hash_label(label));
  child.key_ = splitmix64(mixed + splitmix64(index ^ 0xA0761D6478BD642Full));
  child.path_ += "/";
  child.path_ += label;
  child.path_ += ":";
  child.path_ += std::to_string(index);
  return child;
}

std::vector<double>
uniforms(Stream& stream, std::size_t n)
{
  std::vector<double> out(n);
  for (auto& u : out)
    u = stream.uniform();
  return out;
}

std::vector<double>
normals(Stream& stream, std::size_t n)
{
  std::vector<double> out(n);
  for (auto& z : out)
    z = stream.normal();
  return out;
}

} // namespace condinf
