#pragma once

#include "condinf/bootstrap.hpp"
#include "condinf/conddist.hpp"
#include "condinf/kernel.hpp"
#include "condinf/npi.hpp"

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace condinf {

enum class IntervalMethod
{
  exact_unconditional,
  rb,
  pi,
  npi
};

IntervalMethod parse_interval_method(const std::string& s);
const char* to_string(IntervalMethod m);

struct ConfidenceInterval
{
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  double level = 0.95;
  std::string method;
};

//! Equal-tailed interval from pivot draws (type-7 quantiles).
//! U pivot: [b - q_hi, b - q_lo]; T pivot: [b - s q_hi, b - s q_lo].
//! InsufficientDraws when B < 20 / alpha.
ConfidenceInterval interval_from_draws(const PivotDraws& draws,
                                       const FitResult& fit,
                                       double alpha,
                                       const std::string& method = "");

//! Equal-tailed interval from a normal pivot law (either scale convention).
ConfidenceInterval interval_from_normal(const NormalApprox& approx,
                                        const FitResult& fit,
                                        double alpha,
                                        const std::string& method = "npi");

//! Type-7 sample quantile of a sorted vector.
double sorted_quantile(const std::vector<double>& sorted, double prob);

//! Standard normal quantile.
double normal_quantile(double prob);

//! How a method turns the fitted ancillary into a pivot law.
struct MethodSpec
{
  IntervalMethod method = IntervalMethod::pi;
  //! pivot draws; 0 picks the default (exact 5000, rb 1000, pi 5000)
  std::size_t draws = 0;
  //! plug-in bandwidth; NaN means the normal-reference rule on the ancillary
  double h = std::numeric_limits<double>::quiet_NaN();
  //! NPI bandwidths; rate bandwidths when absent
  std::optional<Bandwidths> npi_bandwidths;
  KernelSpec kernel = KernelSpec::gaussian();
  //! exact: the true error density (required). pi: replaces the kernel
  //! estimate, giving the oracle conditional law. npi: exact scores.
  DensityPtr density;
  Estimator estimator = Estimator::least_squares;
  //! tag used in reports; derived from the method when empty
  std::string tag;

  std::string label() const;
  std::size_t draw_count() const;
};

//! Plug-in density of the conditional law for a fitted ancillary.
DensityPtr plugin_density(const Eigen::VectorXd& ancillary,
                          double h,
                          const KernelSpec& k = KernelSpec::gaussian());

//! Normal-reference bandwidth of the ancillary (used when h is NaN).
double default_pi_bandwidth(const Eigen::VectorXd& ancillary);

//! Pivot draws from the conditional law with `density` (grid sampler for
//! p = 1, Metropolis otherwise).
PivotDraws conditional_draws(const Eigen::VectorXd& ancillary,
                             const Eigen::MatrixXd& X,
                             const DensityPtr& density,
                             ModelKind kind,
                             std::size_t B,
                             const SeedTree& tree,
                             Provenance provenance = Provenance::conditional_pi);

//! Pivot law of a method for one fitted dataset; reusable across levels.
class PivotLaw
{
public:
  PivotLaw(const MethodSpec& spec,
           const FitResult& fit,
           const Eigen::MatrixXd& X,
           ModelKind kind,
           const SeedTree& tree,
           int workers = 1);

  //! Interval at level 1 - alpha for a fit with the same ancillary.
  ConfidenceInterval interval(const FitResult& fit, double alpha) const;
  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::optional<PivotDraws>& draws() const { return draws_; }
  const std::optional<NormalApprox>& normal() const { return normal_; }

private:
  std::string label_;
  ModelKind kind_ = ModelKind::regression_scale;
  std::optional<PivotDraws> draws_;
  std::vector<std::vector<double>> sorted_;
  std::optional<NormalApprox> normal_;
  std::vector<std::string> warnings_;
};

struct CoverageRecord
{
  double level;
  double coverage;
  double se;
  std::size_t covered;
  std::size_t failures;
  std::string method;
};

struct CoverageReport
{
  std::vector<CoverageRecord> records;
  Eigen::Index n = 0;
  std::size_t R = 0;
  std::uint64_t seed = 0;
  std::string ancillary_hash;
  Eigen::Index coordinate = 0;
};

//! Moves the residual of largest magnitude to `size` (same sign), refits
//! and returns the new ancillary. With a studentized ancillary, size = 4
//! is a 4 sigma_hat residual.
Eigen::VectorXd with_outlier(const Eigen::VectorXd& ancillary,
                             const Eigen::MatrixXd& X,
                             double size,
                             ModelKind kind,
                             Estimator estimator = Estimator::least_squares);

//! FNV-1a of the ancillary bytes, hex.
std::string ancillary_hash(const Eigen::VectorXd& a);

//! Conditional coverage of beta_true[coordinate] over R datasets drawn from
//! the exact conditional generator with the fixed ancillary. Every method's
//! pivot law depends on the data only through the ancillary, so it is built
//! once and reused for all replicates. Replicate r uses
//! tree.derive("rep", r); counts are summed in index order.
CoverageReport conditional_coverage(const Eigen::VectorXd& ancillary,
                                    const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& beta_true,
                                    double sigma_true,
                                    const DensityPtr& true_density,
                                    ModelKind kind,
                                    const std::vector<MethodSpec>& methods,
                                    const std::vector<double>& levels,
                                    std::size_t R,
                                    std::uint64_t seed,
                                    int workers = 1,
                                    Eigen::Index coordinate = 0);

} // namespace condinf
