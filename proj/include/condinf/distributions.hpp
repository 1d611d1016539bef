#pragma once

#include "condinf/rng.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace condinf {

struct Support
{
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double z) const { return z > lower && z < upper; }
  bool bounded() const { return std::isfinite(lower) || std::isfinite(upper); }
};

//! A univariate error density with its log, first two log-derivatives
//! (scores) and a sampler. Parametric members and kernel plug-in estimates
//! share this contract, so conditional-law code does not care which one it
//! is handed.
class ErrorDensity
{
public:
  virtual ~ErrorDensity() = default;

  //! Canonical spec string; parse_density(name()) rebuilds the density.
  virtual std::string name() const = 0;

  //! log f(z); -inf outside the support.
  virtual double log_density(double z) const = 0;
  double density(double z) const;

  //! order 1: l'(z), order 2: l''(z). Throws UnsupportedPoint when z is
  //! outside the open support.
  double score(double z, int order = 1) const;

  virtual double sample_one(Stream& stream) const = 0;
  std::vector<double> sample(std::size_t n, Stream& stream) const;
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

  virtual Support support() const { return {}; }
  virtual bool symmetric() const { return true; }
  //! +inf when the variance does not exist.
  virtual double variance() const = 0;

protected:
  virtual double score1(double z) const = 0;
  virtual double score2(double z) const = 0;
};

using DensityPtr = std::shared_ptr<const ErrorDensity>;

class NormalDensity final : public ErrorDensity
{
public:
  std::string name() const override { return "normal"; }
  double log_density(double z) const override;
  double sample_one(Stream& stream) const override { return stream.normal(); }
  double variance() const override { return 1.0; }

protected:
  double score1(double z) const override { return -z; }
  double score2(double) const override { return -1.0; }
};

//! Standard normal divided by an independent uniform(0, 1):
//! f(z) = (phi(0) - phi(z)) / z^2, with f(0) = phi(0) / 2.
class SlashDensity final : public ErrorDensity
{
public:
  std::string name() const override { return "slash"; }
  double log_density(double z) const override;
  double sample_one(Stream& stream) const override;
  double variance() const override;

protected:
  double score1(double z) const override;
  double score2(double z) const override;
};

class StudentTDensity final : public ErrorDensity
{
public:
  explicit StudentTDensity(double df);
  std::string name() const override;
  double log_density(double z) const override;
  double sample_one(Stream& stream) const override;
  double variance() const override;
  double df() const { return df_; }

protected:
  double score1(double z) const override;
  double score2(double z) const override;

private:
  double df_;
  double log_norm_;
};

//! (1/2) N(-mu, 1) + (1/2) N(mu, 1).
class NormalMixtureDensity final : public ErrorDensity
{
public:
  explicit NormalMixtureDensity(double mu = 3.0);
  std::string name() const override;
  double log_density(double z) const override;
  double sample_one(Stream& stream) const override;
  double variance() const override { return 1.0 + mu_ * mu_; }

protected:
  double score1(double z) const override;
  double score2(double z) const override;

private:
  double mu_;
};

//! Beta(a, b) mapped affinely onto [-w, w] and shifted by its mean, so it
//! is mean-zero; asymmetric shapes stay asymmetric.
class CenteredBetaDensity final : public ErrorDensity
{
public:
  CenteredBetaDensity(double a, double b, double half_width = 5.0);
  std::string name() const override;
  double log_density(double z) const override;
  double sample_one(Stream& stream) const override;
  Support support() const override;
  bool symmetric() const override { return a_ == b_; }
  double variance() const override;
  double shift() const { return mean_; }

protected:
  double score1(double z) const override;
  double score2(double z) const override;

private:
  double to_unit(double z) const;

  double a_, b_, half_width_;
  double mean_;
  double log_norm_;
};

//! f(z) = f_base(z / c) / c.
class ScaledDensity final : public ErrorDensity
{
public:
  ScaledDensity(DensityPtr base, double scale);
  std::string name() const override;
  double log_density(double z) const override;
  double sample_one(Stream& stream) const override;
  Support support() const override;
  bool symmetric() const override { return base_->symmetric(); }
  double variance() const override;
  double scale() const { return scale_; }
  const DensityPtr& base() const { return base_; }

protected:
  double score1(double z) const override;
  double score2(double z) const override;

private:
  DensityPtr base_;
  double scale_;
  double log_scale_;
};

//! Rescales a density to unit variance; throws InvalidArgument when the
//! variance is infinite.
DensityPtr standardized(DensityPtr base);

//! Parses `normal`, `slash`, `cauchy`, `t(5)`, `mix-normal`,
//! `mix-normal(3)`, `cbeta(0.5,2)`, `scaled(<spec>,c)` and `unit(<spec>)`.
DensityPtr parse_density(const std::string& spec);

} // namespace condinf
