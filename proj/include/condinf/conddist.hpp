#pragma once

#include "condinf/distributions.hpp"
#include "condinf/model.hpp"
#include "condinf/quadrature.hpp"
#include "condinf/rng.hpp"

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

namespace condinf {

//! st_given_a: joint law of S = sigma_hat/sigma and T = (beta_hat - beta)/sigma_hat
//! given the studentized residuals, kappa(s, t | a) proportional to
//! s^{n-1} prod_i f0(s (a_i + x_i't)).
//! u_given_atilde: law of U = beta_hat - beta given the raw residuals,
//! proportional to prod_i f(a_i + x_i'u).
enum class LawKind
{
  st_given_a,
  u_given_atilde
};

LawKind law_kind_for(ModelKind kind);

//! Gaussian summary of a pivot law around its mode.
struct LaplaceApprox
{
  Eigen::VectorXd mode;
  Eigen::MatrixXd cov;
};

//! Optional truncation of the pivot range (p = 1 only).
struct Region
{
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

struct ConditionalMoments
{
  double e_s2;   //!< E[S^2 | A]
  double e_s2t;  //!< E[S^2 T | A]
  double e_s2t2; //!< E[S^2 T^2 | A]
  //! Monte Carlo standard errors; zero for quadrature results
  double se_s2 = 0.0;
  double se_s2t = 0.0;
  double se_s2t2 = 0.0;
  bool monte_carlo = false;
};

//! Conditional law of the pivot given the ancillary configuration, for a
//! parametric or plug-in error density. All densities are handled in log
//! space with a running maximum shift.
class ConditionalLaw
{
public:
  ConditionalLaw(LawKind kind,
                 Eigen::VectorXd ancillary,
                 Eigen::MatrixXd X,
                 DensityPtr density);

  LawKind kind() const { return kind_; }
  Eigen::Index n() const { return a_.size(); }
  Eigen::Index p() const { return X_.cols(); }
  const Eigen::VectorXd& ancillary() const { return a_; }
  const Eigen::MatrixXd& X() const { return X_; }
  const DensityPtr& density() const { return density_; }

  //! (n-1) log s + sum_i log f0(s (a_i + x_i't)), without the normalizer.
  double log_kappa(double s, const Eigen::VectorXd& t) const;
  //! sum_i log f(a_i + x_i'u), without the normalizer.
  double log_g_u(const Eigen::VectorXd& u) const;

  //! log int_0^inf s^power kappa(s, t) ds  (power 0 gives log g_T(t)),
  //! integrated over w = log s.
  double log_s_integral(const Eigen::VectorXd& t, int power = 0) const;

  //! Unnormalized log density of the pivot: log g_T(t) or log g_U(u).
  double log_marginal(const Eigen::VectorXd& t) const;
  //! exp(log_marginal) for the (S, T) law.
  double marginal_g_t(const Eigen::VectorXd& t) const;

  //! Computes and caches the log normalizer of the pivot density over
  //! `region`. Supports p <= 2; larger p raises DimensionTooHigh (use the
  //! Metropolis sampler instead).
  double normalize(const Region& region = {});
  bool normalized() const { return log_normalizer_.has_value(); }
  double log_normalizer() const;
  //! Normalized pivot density (requires normalize()).
  double density_at(const Eigen::VectorXd& t) const;

  //! Mode and curvature of the pivot marginal.
  LaplaceApprox laplace() const;

  //! Bounds of the pivot when the density has bounded support
  //! (u_given_atilde, p = 1); infinite otherwise.
  Region pivot_support() const;

  //! w = log s bounds at which some s (a_i + x_i't) leaves the support.
  double log_s_upper(const Eigen::VectorXd& b) const;

  //! Scan options for the pivot coordinate j around `centre`.
  ScanOptions pivot_scan(double sd, const Region& region) const;
  //! Scan options for w = log s.
  ScanOptions log_s_scan(const Eigen::VectorXd& b) const;
  //! log of the w-integrand: (n + power) w + sum_i log f0(e^w b_i)
  double log_w_integrand(double w, const Eigen::VectorXd& b, int power) const;
  //! Rough pivot standard deviations from (X'X)^{-1} and the residual scale.
  Eigen::VectorXd scale_guess() const;

private:
  double sum_log_density(const Eigen::VectorXd& z) const;

  LawKind kind_;
  Eigen::VectorXd a_;
  Eigen::MatrixXd X_;
  DensityPtr density_;
  std::optional<double> log_normalizer_;
};

//! Moments of (S, T) given A for p = 1, by nested adaptive quadrature.
ConditionalMoments conditional_moments(const ConditionalLaw& law);

//! Monte Carlo version from `draws` grid-sampled (S, T) pairs.
ConditionalMoments conditional_moments_mc(const ConditionalLaw& law,
                                          std::size_t draws,
                                          Stream& stream);

//! E[U | A~] and E[U^2 | A~] for the u_given_atilde law, p = 1.
std::pair<double, double> pivot_moments_u(const ConditionalLaw& law);

//! Inverse-CDF sampler on an adaptive grid of the pivot marginal (p = 1).
//! The CDF integrates a piecewise-linear interpolant of the density, and
//! draws are exact for that interpolant.
class GridSampler
{
public:
  explicit GridSampler(const ConditionalLaw& law, double nodes_per_sd = 25.0);

  double draw_pivot(Stream& stream) const;
  //! (S, T) pair; S is drawn from its conditional law given T on a w-grid.
  std::pair<double, double> draw_st(Stream& stream) const;
  double cdf(double t) const;
  double quantile(double prob) const;
  const std::vector<double>& nodes() const { return x_; }

private:
  double invert(double target) const;

  const ConditionalLaw* law_;
  std::vector<double> x_;
  std::vector<double> pdf_;
  std::vector<double> cum_;
};

enum class SampleMethod
{
  grid_inverse_cdf,
  metropolis
};

struct MetropolisOptions
{
  std::size_t burn_in = 2000;
  std::size_t thin = 10;
  //! steps adapt during burn-in towards this acceptance band
  double target_low = 0.2;
  double target_high = 0.5;
};

struct LawDraws
{
  Eigen::MatrixXd pivot; //!< draws x p
  Eigen::VectorXd s;     //!< empty for the U law
  double acceptance_rate = std::numeric_limits<double>::quiet_NaN();
};

//! Draws of T (with S) or U. Deterministic given the stream state.
//! Metropolis raises ChainDiagnosticsFailure when the post-burn-in
//! acceptance rate falls outside [0.05, 0.95].
LawDraws sample_law(const ConditionalLaw& law,
                    std::size_t n_draws,
                    Stream& stream,
                    SampleMethod method,
                    const MetropolisOptions& opts = {});

//! Draws conditional datasets that reproduce a fixed ancillary.
//! Regression-scale: Y = X beta + sigma S (X T + a).
//! Regression: Y = X beta + X U + a~ (sigma unused).
class ConditionalGenerator
{
public:
  explicit ConditionalGenerator(const ConditionalLaw& law);
  Dataset draw(const Eigen::VectorXd& beta, double sigma, Stream& stream) const;

private:
  const ConditionalLaw* law_;
  std::optional<GridSampler> grid_;
};

enum class GenerationMethod
{
  exact,
  rejection
};

struct GenerationOptions
{
  GenerationMethod method = GenerationMethod::exact;
  //! sup-norm tolerance of the rejection sampler
  double tolerance = 0.15;
  std::size_t max_tries = 50'000'000;
  Estimator estimator = Estimator::least_squares;
};

//! One conditional dataset. `exact` builds the conditional law; `rejection`
//! draws unconditional datasets until the refitted ancillary is within
//! `tolerance` of the target in sup norm (validation oracle only).
Dataset generate_conditional_dataset(const Eigen::VectorXd& ancillary,
                                     const Eigen::MatrixXd& X,
                                     const Eigen::VectorXd& beta,
                                     double sigma,
                                     const DensityPtr& density,
                                     ModelKind kind,
                                     Stream& stream,
                                     const GenerationOptions& opts = {});

//! Rejection sampler with a reusable refitter; returns the accepted dataset
//! and counts the tries.
Dataset rejection_conditional_dataset(const Eigen::VectorXd& ancillary,
                                      const Eigen::MatrixXd& X,
                                      const Eigen::VectorXd& beta,
                                      double sigma,
                                      const ErrorDensity& density,
                                      ModelKind kind,
                                      const Refitter& refit,
                                      double tolerance,
                                      std::size_t max_tries,
                                      Stream& stream,
                                      std::size_t* tries = nullptr);

} // namespace condinf
