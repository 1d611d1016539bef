#include "condinf/model.hpp"

#include "condinf/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace condinf {

namespace {

void
require_full_rank(const Eigen::MatrixXd& X)
{
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < X.cols())
    fail(ErrorKind::singular_design,
         "X'X is numerically singular (rank " + std::to_string(qr.rank()) +
           " < p = " + std::to_string(X.cols()) + ")");
}

double
median_of(Eigen::VectorXd v)
{
  auto n = v.size();
  std::sort(v.data(), v.data() + n);
  return n % 2 == 1 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

void
fill_residuals(FitResult& out, const Dataset& data, ModelKind kind)
{
  out.residuals_raw = data.y() - data.X() * out.beta_hat;
  out.sigma_hat = std::sqrt(out.residuals_raw.squaredNorm() /
                            static_cast<double>(data.n()));
  double scale = std::max(1.0, data.y().cwiseAbs().maxCoeff());
  if (out.sigma_hat <= 1e-14 * scale) {
    if (kind == ModelKind::regression_scale)
      fail(ErrorKind::degenerate_fit, "sigma_hat = 0 (perfect fit)");
    out.sigma_hat = 0.0;
    out.residuals_studentized.resize(0);
    return;
  }
  out.residuals_studentized = out.residuals_raw / out.sigma_hat;
}

Trend
trend_of(const std::vector<double>& v)
{
  if (v.size() < 2)
    return Trend::single;
  bool up = false, down = false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    double tol = 1e-12 * std::max(1.0, std::abs(v[i - 1]));
    if (v[i] > v[i - 1] + tol)
      up = true;
    else if (v[i] < v[i - 1] - tol)
      down = true;
  }
  if (up && down)
    return Trend::mixed;
  if (up)
    return Trend::increasing;
  if (down)
    return Trend::decreasing;
  return Trend::constant;
}

} // namespace

Dataset::Dataset(Eigen::MatrixXd X, Eigen::VectorXd y)
  : X_(std::move(X))
  , y_(std::move(y))
{
  if (X_.rows() != y_.size())
    fail(ErrorKind::invalid_argument, "X has " + std::to_string(X_.rows()) +
                                        " rows but y has " +
                                        std::to_string(y_.size()));
  if (X_.cols() < 1)
    fail(ErrorKind::invalid_argument, "X needs at least one column");
  if (y_.size() < X_.cols() + 1)
    fail(ErrorKind::invalid_argument, "need n >= p + 1");
}

ModelKind
parse_model_kind(const std::string& s)
{
  if (s == "reg" || s == "regression")
    return ModelKind::regression;
  if (s == "regscale" || s == "regression_scale" || s == "regression-scale")
    return ModelKind::regression_scale;
  fail(ErrorKind::parse_error, "unknown model kind '" + s + "'");
}

const char*
to_string(ModelKind kind)
{
  return kind == ModelKind::regression ? "reg" : "regscale";
}

Estimator
parse_estimator(const std::string& s)
{
  if (s == "ls" || s == "mean" || s == "least_squares")
    return Estimator::least_squares;
  if (s == "median")
    return Estimator::median;
  fail(ErrorKind::parse_error, "unknown estimator '" + s + "'");
}

const char*
to_string(Estimator e)
{
  return e == Estimator::least_squares ? "ls" : "median";
}

FitResult
fit_least_squares(const Dataset& data, ModelKind kind)
{
  require_full_rank(data.X());
  FitResult out;
  out.beta_hat = data.X().householderQr().solve(data.y());
  fill_residuals(out, data, kind);
  return out;
}

FitResult
fit_median(const Dataset& data, ModelKind kind)
{
  if (data.p() != 1 || (data.X().array() != 1.0).any())
    fail(ErrorKind::invalid_argument,
         "median estimator needs the location design");
  FitResult out;
  out.beta_hat = Eigen::VectorXd::Constant(1, median_of(data.y()));
  fill_residuals(out, data, kind);
  return out;
}

FitResult
fit(const Dataset& data, Estimator estimator, ModelKind kind)
{
  return estimator == Estimator::least_squares ? fit_least_squares(data, kind)
                                               : fit_median(data, kind);
}

Refitter::Refitter(const Eigen::MatrixXd& X, Estimator estimator)
  : X_(X)
  , estimator_(estimator)
{
  require_full_rank(X_);
  if (estimator_ == Estimator::median &&
      (X_.cols() != 1 || (X_.array() != 1.0).any()))
    fail(ErrorKind::invalid_argument,
         "median estimator needs the location design");
  qr_.compute(X_);
}

PointFit
Refitter::operator()(const Eigen::VectorXd& y) const
{
  PointFit out;
  if (estimator_ == Estimator::least_squares) {
    out.beta_hat = qr_.solve(y);
  } else {
    out.beta_hat = Eigen::VectorXd::Constant(1, median_of(y));
  }
  out.sigma_hat = std::sqrt((y - X_ * out.beta_hat).squaredNorm() /
                            static_cast<double>(y.size()));
  return out;
}

Eigen::VectorXd
ancillary(const FitResult& fit, ModelKind kind)
{
  if (kind == ModelKind::regression)
    return fit.residuals_raw;
  if (!(fit.sigma_hat > 0.0) || fit.residuals_studentized.size() == 0)
    fail(ErrorKind::degenerate_fit,
         "studentized residuals need sigma_hat > 0");
  return fit.residuals_studentized;
}

Eigen::MatrixXd
location_design(Eigen::Index n)
{
  return Eigen::MatrixXd::Ones(n, 1);
}

const char*
to_string(Trend t)
{
  switch (t) {
    case Trend::single:
      return "single";
    case Trend::increasing:
      return "increasing";
    case Trend::decreasing:
      return "decreasing";
    case Trend::constant:
      return "constant";
    case Trend::mixed:
      return "mixed";
  }
  return "mixed";
}

ConditionReport
check_design_conditions(const std::vector<Eigen::MatrixXd>& designs, double eta)
{
  if (designs.empty())
    fail(ErrorKind::invalid_argument, "need at least one design");
  ConditionReport report;
  report.eta = eta;
  std::vector<double> eig, lev, mom;
  for (const auto& X : designs) {
    require_full_rank(X);
    const double n = static_cast<double>(X.rows());
    Eigen::MatrixXd gram = X.transpose() * X;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram / n);
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    // x_i' (X'X)^{-1} x_i = |L^{-1} x_i|^2
    Eigen::MatrixXd w = llt.matrixL().solve(X.transpose());
    double max_lev = w.colwise().squaredNorm().maxCoeff();
    double moment =
      X.rowwise().squaredNorm().array().pow(1.0 + eta).sum() / n;
    report.designs.push_back({ X.rows(), es.eigenvalues().minCoeff(), max_lev, moment });
    eig.push_back(report.designs.back().min_eigenvalue);
    lev.push_back(max_lev);
    mom.push_back(moment);
  }
  report.min_eigenvalue_trend = trend_of(eig);
  report.max_leverage_trend = trend_of(lev);
  report.moment_trend = trend_of(mom);
  return report;
}

ConditionReport
check_design_conditions(const std::vector<Dataset>& designs, double eta)
{
  std::vector<Eigen::MatrixXd> xs;
  xs.reserve(designs.size());
  for (const auto& d : designs)
    xs.push_back(d.X());
  return check_design_conditions(xs, eta);
}

EquivarianceReport
equivariance_check(const FitFunction& estimator,
                   const Dataset& data,
                   const Eigen::VectorXd& c,
                   double d,
                   double tolerance)
{
  if (d == 0.0)
    fail(ErrorKind::invalid_argument, "equivariance check needs d != 0");
  FitResult base = estimator(data);
  Dataset moved(data.X(), data.X() * c + d * data.y());
  FitResult shifted = estimator(moved);

  Eigen::VectorXd expected_beta = c + d * base.beta_hat;
  double beta_v = 0.0;
  for (Eigen::Index j = 0; j < expected_beta.size(); ++j) {
    double ref = std::max(1.0, std::abs(expected_beta(j)));
    beta_v = std::max(beta_v, std::abs(shifted.beta_hat(j) - expected_beta(j)) / ref);
  }
  double expected_sigma = std::abs(d) * base.sigma_hat;
  double sigma_v = std::abs(shifted.sigma_hat - expected_sigma) /
                   std::max(1.0, expected_sigma);
  EquivarianceReport r;
  r.beta_violation = beta_v;
  r.sigma_violation = sigma_v;
  r.max_violation = std::max(beta_v, sigma_v);
  r.holds = r.max_violation <= tolerance;
  return r;
}

namespace {

std::string
trim(const std::string& s)
{
  auto b = s.find_first_not_of(" \t\r\"");
  auto e = s.find_last_not_of(" \t\r\"");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string>
split_row(const std::string& line)
{
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ','))
    cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

double
parse_number(const std::string& cell, std::size_t line_no)
{
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty() || !std::isfinite(value))
    fail(ErrorKind::parse_error,
         "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
  return value;
}

} // namespace

Dataset
read_csv(std::istream& in)
{
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
    fail(ErrorKind::parse_error, "empty input");
  ++line_no;
  auto header = split_row(line);
  int y_col = -1;
  std::map<int, int> x_cols; // x index (1-based) -> column
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& name = header[c];
    if (name == "y") {
      if (y_col >= 0)
        fail(ErrorKind::parse_error, "duplicate column 'y'");
      y_col = static_cast<int>(c);
    } else if (name.size() > 1 && name[0] == 'x' &&
               name.find_first_not_of("0123456789", 1) == std::string::npos) {
      int idx = std::stoi(name.substr(1));
      if (idx < 1 || !x_cols.emplace(idx, static_cast<int>(c)).second)
        fail(ErrorKind::parse_error, "bad or duplicate column '" + name + "'");
    } else {
      fail(ErrorKind::parse_error, "unexpected column '" + name + "'");
    }
  }
  if (y_col < 0)
    fail(ErrorKind::parse_error, "missing column 'y'");
  int p = static_cast<int>(x_cols.size());
  for (int j = 1; j <= p; ++j)
    if (!x_cols.count(j))
      fail(ErrorKind::parse_error, "columns must be x1..xp without gaps");

  std::vector<double> ys;
  std::vector<std::vector<double>> xs;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    auto cells = split_row(line);
    if (cells.size() != header.size())
      fail(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields");
    ys.push_back(parse_number(cells[y_col], line_no));
    std::vector<double> row;
    for (int j = 1; j <= p; ++j)
      row.push_back(parse_number(cells[x_cols[j]], line_no));
    xs.push_back(std::move(row));
  }
  auto n = static_cast<Eigen::Index>(ys.size());
  if (n == 0)
    fail(ErrorKind::parse_error, "no data rows");
  // y-only files describe the location model.
  Eigen::MatrixXd X = p == 0 ? location_design(n) : Eigen::MatrixXd(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = ys[i];
    for (int j = 0; j < p; ++j)
      X(i, j) = xs[i][j];
  }
  return Dataset(std::move(X), std::move(y));
}

Dataset
read_csv_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::parse_error, "cannot open '" + path + "'");
  return read_csv(in);
}

} // namespace condinf
