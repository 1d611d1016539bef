#pragma once

#include "condinf/conddist.hpp"
#include "condinf/distributions.hpp"
#include "condinf/kernel.hpp"
#include "condinf/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace condinf {

//! cMSE(v) = K + c (v - v_star)^2
struct CmseQuadratic
{
  double K = 0.0;
  double c = 1.0;
  double v_star = 0.0;
  std::string tag;

  double operator()(double v) const { return K + c * (v - v_star) * (v - v_star); }
};

//! V(Y) = beta_hat + sigma_hat v (location-scale) or beta_hat + v
//! (location only).
struct EquivariantEstimate
{
  double v = 0.0;
  std::optional<double> value;
  std::string method;
};

//! Conditional moment summary of an error density given the ancillary.
//! Location-scale: v* = -E[S^2 T]/E[S^2], c = sigma^2 E[S^2],
//! K = sigma^2 (E[S^2 T^2] - E[S^2 T]^2 / E[S^2]).
//! Location only (raw residuals, U law): v* = -E[U], c = 1,
//! K = Var(U).
CmseQuadratic cmse_quadratic(const DensityPtr& F,
                             const Eigen::VectorXd& ancillary,
                             const Eigen::MatrixXd& X,
                             double sigma = 1.0,
                             bool location_only = false);

//! Realized value for a fit: beta_hat + sigma_hat v (or beta_hat + v).
double realize(double v, const FitResult& fit, bool location_only = false);

//! Pitman rule v = v*(F), realized on the fit.
EquivariantEstimate pitman_estimate(const DensityPtr& F,
                                    const FitResult& fit,
                                    const Eigen::MatrixXd& X,
                                    bool location_only = false);

//! argmin P_F cMSE_F + P_G cMSE_G.
EquivariantEstimate bioptimal(const CmseQuadratic& qF,
                              const CmseQuadratic& qG,
                              double P_F = 1.0,
                              double P_G = 1.0);

//! argmin max(cMSE_F, cMSE_G), in closed form.
EquivariantEstimate minimax(const CmseQuadratic& qF, const CmseQuadratic& qG);

enum class ConfrontationKind
{
  normal_vs_slash,
  ls_vs_pi,
  bandwidth_pair,
  custom
};

const char* to_string(ConfrontationKind k);

struct Confrontation
{
  ConfrontationKind kind = ConfrontationKind::custom;
  DensityPtr F;
  DensityPtr G;
  std::string params;
  std::optional<std::pair<double, double>> prices;

  std::string label() const;
};

struct ConfrontationParams
{
  double C = 1.0;   //!< (ii): h = C n^{-1/9}
  double h_a = 0.1; //!< (iii)
  double h_b = 2.0; //!< (iii)
  KernelSpec kernel = KernelSpec::gaussian();
  std::optional<std::pair<double, double>> prices;
};

//! (i) normal vs slash; (ii) normal vs the symmetrized kernel estimate with
//! h = C n^{-1/9}; (iii) kernel estimates with h_a and h_b.
Confrontation build_confrontation(ConfrontationKind kind,
                                  const ConfrontationParams& params,
                                  const Eigen::VectorXd& ancillary);

ConfrontationKind parse_confrontation(const std::string& s);

//! Rules fixed by the ancillary, evaluated once.
struct ConfrontationRules
{
  CmseQuadratic qF;
  CmseQuadratic qG;
  EquivariantEstimate minimax;
  std::optional<EquivariantEstimate> bioptimal;
};

ConfrontationRules confrontation_rules(const Confrontation& c,
                                       const Eigen::VectorXd& ancillary,
                                       const Eigen::MatrixXd& X,
                                       bool location_only = false);

struct CmseRow
{
  std::string confrontation;
  std::string params;
  std::string error_dist;
  Eigen::Index n = 0;
  std::size_t R = 0;
  double cmse = 0.0;
  double mc_se = 0.0;
  std::uint64_t seed = 0;
  double v = 0.0;
  std::size_t failures = 0;
};

//! Estimator evaluated by cmse_simulation: a fixed rule value v.
struct RuleSpec
{
  std::string confrontation; //!< "LS" for least squares
  std::string params;
  double v = 0.0;
};

//! Conditional MSE of each rule over R conditional datasets drawn from the
//! true density with the fixed ancillary, beta = 0 and sigma = 1. All rules
//! share the replicates. The error of rule v is sigma S (T + v) in the
//! location-scale form and U + v in the location-only form.
std::vector<CmseRow> cmse_simulation(const std::vector<RuleSpec>& rules,
                                     const Eigen::VectorXd& ancillary,
                                     const Eigen::MatrixXd& X,
                                     const DensityPtr& true_density,
                                     std::size_t R,
                                     std::uint64_t seed,
                                     int workers = 1,
                                     bool location_only = false);

//! Studentized LS residuals of a seeded sample from `density`; the fixed
//! ancillary used by the polysampling table.
Eigen::VectorXd seeded_ancillary(const DensityPtr& density,
                                 Eigen::Index n,
                                 std::uint64_t seed,
                                 ModelKind kind = ModelKind::regression_scale);

} // namespace condinf
