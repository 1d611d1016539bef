#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace condinf {

//! Responses and design of a linear model Y = X beta + error.
class Dataset
{
public:
  //! Throws InvalidArgument when shapes disagree or n < p + 1.
  Dataset(Eigen::MatrixXd X, Eigen::VectorXd y);

  const Eigen::MatrixXd& X() const { return X_; }
  const Eigen::VectorXd& y() const { return y_; }
  Eigen::Index n() const { return y_.size(); }
  Eigen::Index p() const { return X_.cols(); }

private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
};

//! regression: error density f unknown, ancillary is the raw residual
//! vector and the pivot is U = beta_hat - beta.
//! regression_scale: errors sigma * f0, ancillary is the studentized
//! residual vector and the pivot is T = (beta_hat - beta) / sigma_hat.
enum class ModelKind
{
  regression,
  regression_scale
};

ModelKind parse_model_kind(const std::string& s);
const char* to_string(ModelKind kind);

struct FitResult
{
  Eigen::VectorXd beta_hat;
  double sigma_hat = 0.0;
  Eigen::VectorXd residuals_raw;
  //! Empty when sigma_hat == 0.
  Eigen::VectorXd residuals_studentized;
};

//! Least squares by Householder QR of X; sigma_hat^2 is the mean squared
//! residual (divisor n). A perfect fit raises DegenerateFit only under the
//! regression-scale model.
FitResult
fit_least_squares(const Dataset& data,
                  ModelKind kind = ModelKind::regression_scale);

//! Sample median for the location model (p = 1, x_i = 1); sigma_hat is the
//! root mean squared deviation about the median.
FitResult
fit_median(const Dataset& data, ModelKind kind = ModelKind::regression_scale);

enum class Estimator
{
  least_squares,
  median
};

Estimator parse_estimator(const std::string& s);
const char* to_string(Estimator e);

FitResult fit(const Dataset& data, Estimator estimator, ModelKind kind);

//! Estimator-only refit of the coefficient and scale, used in resampling
//! loops where the residual vectors are not needed. Returns sigma_hat = 0
//! for a perfect fit instead of throwing.
struct PointFit
{
  Eigen::VectorXd beta_hat;
  double sigma_hat;
};

//! Reusable least-squares / median solver for a fixed design.
class Refitter
{
public:
  Refitter(const Eigen::MatrixXd& X, Estimator estimator);
  PointFit operator()(const Eigen::VectorXd& y) const;
  Estimator estimator() const { return estimator_; }

private:
  Eigen::MatrixXd X_;
  Estimator estimator_;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
};

//! The ancillary residual configuration: raw residuals for the regression
//! model, studentized residuals for the regression-scale model.
Eigen::VectorXd ancillary(const FitResult& fit, ModelKind kind);

//! Column of ones.
Eigen::MatrixXd location_design(Eigen::Index n);

enum class Trend
{
  single,
  increasing,
  decreasing,
  constant,
  mixed
};

const char* to_string(Trend t);

struct DesignConditions
{
  Eigen::Index n;
  //! smallest eigenvalue of X'X / n
  double min_eigenvalue;
  //! max_i x_i' (X'X)^{-1} x_i
  double max_leverage;
  //! n^{-1} sum_i (x_i' x_i)^{1 + eta}
  double moment;
};

struct ConditionReport
{
  double eta;
  std::vector<DesignConditions> designs;
  Trend min_eigenvalue_trend;
  Trend max_leverage_trend;
  Trend moment_trend;
};

ConditionReport
check_design_conditions(const std::vector<Eigen::MatrixXd>& designs,
                        double eta = 0.5);
ConditionReport
check_design_conditions(const std::vector<Dataset>& designs, double eta = 0.5);

using FitFunction = std::function<FitResult(const Dataset&)>;

struct EquivarianceReport
{
  double beta_violation;
  double sigma_violation;
  double max_violation;
  bool holds;
};

//! Checks beta(Xc + dY) = c + d beta(Y) and sigma(Xc + dY) = |d| sigma(Y),
//! with violations measured relative to max(1, |reference|).
EquivarianceReport
equivariance_check(const FitFunction& estimator,
                   const Dataset& data,
                   const Eigen::VectorXd& c,
                   double d,
                   double tolerance = 1e-9);

//! CSV with one header row naming `y` and `x1`..`xp`. Decimal points are
//! parsed independently of the C locale.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);

} // namespace condinf
