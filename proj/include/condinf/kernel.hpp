#pragma once

#include "condinf/distributions.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace condinf {

enum class KernelId
{
  gaussian,
  quartic,
  triweight
};

//! Symmetric second-order kernel. gaussian has unbounded support; quartic
//! and triweight live on [-1, 1].
struct KernelSpec
{
  KernelId id = KernelId::gaussian;

  static KernelSpec gaussian() { return { KernelId::gaussian }; }
  static KernelSpec quartic() { return { KernelId::quartic }; }
  static KernelSpec triweight() { return { KernelId::triweight }; }

  //! Order q: first nonvanishing moment beyond the zeroth.
  int order() const { return 2; }
  //! Support half-width c (+inf for gaussian).
  double half_width() const;
  //! k^{(m)}(u) for m = 0, 1, 2.
  double eval(double u, int m = 0) const;
  //! Draw from the kernel itself.
  double sample(Stream& stream) const;
  std::string name() const;
};

KernelSpec parse_kernel(const std::string& s);

struct Bandwidths
{
  double h0; //!< density bandwidth
  double h1; //!< derivative bandwidth
  double trim = 0.0; //!< floor applied to the density in score denominators
};

//! (n h^{m+1})^{-1} sum_i k^{(m)}((z - a_i) / h)
double kde(std::span<const double> points,
           double h,
           const KernelSpec& k,
           int m,
           double z);

//! kde with point i left out and divisor n - 1.
double kde_loo(std::span<const double> points,
               std::size_t i,
               double h,
               const KernelSpec& k,
               int m,
               double z);

//! (kde(z) + kde(-z)) / 2 for m = 0.
double symmetrize(std::span<const double> points,
                  double h,
                  const KernelSpec& k,
                  double z);

//! Anti-symmetrized leave-one-out score estimate at A_i:
//!   (1/2) { f'_{h1}(A_i)/f_{h0}(A_i) - f'_{h1}(-A_i)/f_{h0}(-A_i) }
//! over A_{-i}, each denominator floored at bw.trim. A zero denominator
//! (possible only with trim = 0) contributes a zero ratio.
double score_estimate(std::span<const double> points,
                      std::size_t i,
                      const Bandwidths& bw,
                      const KernelSpec& k);

//! Default multiplier of the rate bandwidths.
inline constexpr double default_bandwidth_constant = 0.45;

//! h_m = c_m * scale * n^{-1/(5 + 2q)}; trim from default_trim.
Bandwidths rate_bandwidths(std::size_t n,
                           int q,
                           double scale,
                           double c0 = default_bandwidth_constant,
                           double c1 = default_bandwidth_constant);

//! 0.01 (n h0)^{-1/2}
double default_trim(std::size_t n, double h0);

//! Classic normal-reference bandwidth 1.06 * scale * n^{-1/5}.
double normal_reference_bandwidth(std::size_t n, double scale);

//! Sample standard deviation (divisor n - 1).
double sample_sd(std::span<const double> x);

//! Kernel density estimate as an ErrorDensity. With symmetrized = true the
//! estimate is the symmetrized version (f_h(z) + f_h(-z)) / 2, i.e. the
//! kernel estimate over the 2n points {+a_i, -a_i}.
class PluginDensity final : public ErrorDensity
{
public:
  PluginDensity(std::vector<double> points,
                double h,
                KernelSpec k = KernelSpec::gaussian(),
                bool symmetrized = true);

  std::string name() const override;
  double log_density(double z) const override;
  double sample_one(Stream& stream) const override;
  Support support() const override;
  bool symmetric() const override { return symmetrized_; }
  double variance() const override;

  double bandwidth() const { return h_; }
  const std::vector<double>& points() const { return nodes_; }

protected:
  double score1(double z) const override;
  double score2(double z) const override;

private:
  // sums of k^{(m)}((z - a_i)/h) for m = 0, 1, 2 scaled by a common factor
  // exp(-shift); shift is returned through the reference.
  void kernel_sums(double z, double& s0, double& s1, double& s2, double& shift) const;
  // log f, l' and l'' evaluated directly.
  std::array<double, 3> exact_log_derivs(double z) const;

  std::vector<double> nodes_;
  // Gaussian estimates over many nodes tabulate (log f, l', l'') on a
  // symmetric grid and interpolate by quintic Hermite pieces.
  std::vector<std::array<double, 3>> table_;
  double table_step_ = 0.0;
  double table_half_ = 0.0;
  double h_;
  KernelSpec k_;
  bool symmetrized_;
  double log_norm_;
};

} // namespace condinf
