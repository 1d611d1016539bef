#pragma once

#include "condinf/distributions.hpp"
#include "condinf/kernel.hpp"
#include "condinf/model.hpp"

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace condinf {

enum class ScoreSource
{
  exact_score,
  plugin_score
};

const char* to_string(ScoreSource s);

//! Conditional-normal quantities of the pivot given the ancillary.
//!   info  = n^-2 X'X sum_i l'(A_i)^2
//!   theta = n^-1/2 sum_i x_i l'(A_i)
//!   scale_info  = -n^-1 sum_i (A_i l'(A_i) + A_i^2 l''(A_i))
//!   scale_theta = n^-1/2 sum_i (A_i l'(A_i) + 1)
struct ConditionalNormalSummary
{
  Eigen::MatrixXd info;
  Eigen::VectorXd theta;
  double scale_info = 0.0;
  double scale_theta = 0.0;
  Eigen::Index n = 0;
  ModelKind kind = ModelKind::regression_scale;
  ScoreSource source = ScoreSource::exact_score;
  //! rate diagnostics (plug-in only, NaN otherwise)
  double delta1 = std::numeric_limits<double>::quiet_NaN();
  double delta2 = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;
};

using ScoreFunction = std::function<double(double)>;

//! Uses the given l' and l''. ScoreSingularity if any l'(A_i) is not finite.
ConditionalNormalSummary
theorem1_quantities(const Eigen::VectorXd& ancillary,
                    const Eigen::MatrixXd& X,
                    const ScoreFunction& score1,
                    const ScoreFunction& score2,
                    ModelKind kind);

ConditionalNormalSummary
theorem1_quantities(const Eigen::VectorXd& ancillary,
                    const Eigen::MatrixXd& X,
                    const ErrorDensity& density,
                    ModelKind kind);

//! Same sums with the leave-one-out anti-symmetrized kernel score at each
//! A_i. The second derivative of the log density is estimated as the
//! symmetrized leave-one-out f''/f - (f'/f)^2 with h1 in the numerators.
//! Needs n >= 3.
ConditionalNormalSummary
plugin_quantities(const Eigen::VectorXd& ancillary,
                  const Eigen::MatrixXd& X,
                  const Bandwidths& bw,
                  const KernelSpec& k,
                  ModelKind kind,
                  int q = 2);

//! h0^q + h1^q + n^-1/2 (h0^-1/2 + h1^-3/2)
double rate_delta1(std::size_t n, double h0, double h1, int q);
//! h0^q + h1^q + n^-1/2 (h0^-3/2 + h1^-5/2)
double rate_delta2(std::size_t n, double h0, double h1, int q);

//! Normal law of a pivot. With root_n_scaled the law is that of sqrt(n)
//! times the pivot; to_pivot_scale() undoes the factor.
struct NormalApprox
{
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  ModelKind kind = ModelKind::regression_scale;
  bool root_n_scaled = true;
  Eigen::Index n = 0;

  NormalApprox to_pivot_scale() const;
  NormalApprox to_root_n_scale() const;
};

//! N(info^-1 theta, info^-1) for sqrt(n) T (or sqrt(n) U).
NormalApprox normal_approx(const ConditionalNormalSummary& s);

//! N(psi / J, 1 / J) for sqrt(n) log S (1-dimensional).
NormalApprox scale_normal_approx(const ConditionalNormalSummary& s);

} // namespace condinf
