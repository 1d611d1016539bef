#pragma once

#include "condinf/distributions.hpp"
#include "condinf/model.hpp"
#include "condinf/rng.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace condinf {

enum class Provenance
{
  residual_bootstrap,
  exact_unconditional,
  conditional_pi,
  conditional_npi
};

const char* to_string(Provenance p);

//! B draws of the pivot T = (beta* - beta)/sigma* or U = beta* - beta.
struct PivotDraws
{
  ModelKind kind = ModelKind::regression_scale;
  Eigen::MatrixXd draws; //!< B x p
  Provenance provenance = Provenance::residual_bootstrap;
  std::uint64_t seed = 0;
  std::string seed_path;

  Eigen::Index count() const { return draws.rows(); }
};

//! Uniform law on the 2n signed residuals +-r_i.
class SymmetrizedEmpirical
{
public:
  explicit SymmetrizedEmpirical(std::vector<double> residuals);

  double sample_one(Stream& stream) const;
  //! P(E <= x)
  double cdf(double x) const;
  //! Exactly zero.
  double mean() const { return 0.0; }
  const std::vector<double>& atoms() const { return atoms_; }

private:
  std::vector<double> residuals_;
  std::vector<double> atoms_; //!< sorted +-r_i
};

//! Residual bootstrap with the symmetrized empirical law of the ancillary.
//! Regression-scale: Y* = X beta_hat + sigma_hat e*, draws of
//! (beta* - beta_hat) / sigma*. Regression: Y* = X beta_hat + e* with e*
//! from +-raw residuals, draws of beta* - beta_hat. Draw b uses the
//! sub-stream tree.derive("boot", b), so the result does not depend on the
//! worker count.
PivotDraws residual_bootstrap(const FitResult& fit,
                              const Eigen::MatrixXd& X,
                              std::size_t B,
                              const SeedTree& tree,
                              ModelKind kind,
                              Estimator estimator = Estimator::least_squares,
                              int workers = 1);

//! Unconditional pivot draws with errors from `density`:
//! Y = X beta0 + e, refit, emit T or U. beta0 defaults to zero.
PivotDraws exact_unconditional(const ErrorDensity& density,
                               const Eigen::MatrixXd& X,
                               std::size_t B,
                               const SeedTree& tree,
                               ModelKind kind,
                               Estimator estimator = Estimator::least_squares,
                               const Eigen::VectorXd& beta0 = {},
                               int workers = 1);

} // namespace condinf
