#include "condinf/distributions.hpp"

#include "condinf/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace condinf {

namespace {

constexpr double log_sqrt_2pi = 0.91893853320467274178;

std::string
format_number(double x)
{
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// log(cosh(x)) without overflow
double
log_cosh(double x)
{
  double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

} // namespace

double
ErrorDensity::density(double z) const
{
  return std::exp(log_density(z));
}

double
ErrorDensity::score(double z, int order) const
{
  if (!support().contains(z) || !std::isfinite(log_density(z)))
    fail(ErrorKind::unsupported_point,
         "score of " + name() + " at z = " + format_number(z) + " outside the support");
  if (order == 1)
    return score1(z);
  if (order == 2)
    return score2(z);
  fail(ErrorKind::invalid_argument, "score order must be 1 or 2");
}

std::vector<double>
ErrorDensity::sample(std::size_t n, Stream& stream) const
{
  std::vector<double> out(n);
  for (auto& z : out)
    z = sample_one(stream);
  return out;
}

std::vector<double>
ErrorDensity::sample(std::size_t n, std::uint64_t seed) const
{
  Stream stream = SeedTree(seed).stream();
  return sample(n, stream);
}

// normal

double
NormalDensity::log_density(double z) const
{
  return -0.5 * z * z - log_sqrt_2pi;
}

// slash

namespace {

// Below this |z| the series of log f around 0 is used.
constexpr double slash_series_cutoff = 0.05;

} // namespace

double
SlashDensity::log_density(double z) const
{
  double z2 = z * z;
  if (std::abs(z) < slash_series_cutoff) {
    double z4 = z2 * z2;
    return -log_sqrt_2pi - std::numbers::ln2 - z2 / 4.0 + z4 / 96.0 -
           z4 * z4 / 46080.0;
  }
  if (!std::isfinite(z))
    return -std::numeric_limits<double>::infinity();
  return -log_sqrt_2pi + std::log(-std::expm1(-0.5 * z2)) - std::log(z2);
}

double
SlashDensity::score1(double z) const
{
  if (std::abs(z) < slash_series_cutoff) {
    double z3 = z * z * z;
    return -z / 2.0 + z3 / 24.0 - z3 * z3 * z / 5760.0;
  }
  double z2 = z * z;
  double g = -std::expm1(-0.5 * z2);
  return z * std::exp(-0.5 * z2) / g - 2.0 / z;
}

double
SlashDensity::score2(double z) const
{
  double z2 = z * z;
  if (std::abs(z) < slash_series_cutoff)
    return -0.5 + z2 / 8.0 - 7.0 * z2 * z2 * z2 / 5760.0;
  double e = std::exp(-0.5 * z2);
  double g = -std::expm1(-0.5 * z2);
  double r = z * e / g;
  return (1.0 - z2) * e / g - r * r + 2.0 / z2;
}

double
SlashDensity::sample_one(Stream& stream) const
{
  double num = stream.normal();
  return num / stream.uniform();
}

double
SlashDensity::variance() const
{
  return std::numeric_limits<double>::infinity();
}

// Student t

StudentTDensity::StudentTDensity(double df)
  : df_(df)
{
  if (!(df > 0.0) || !std::isfinite(df))
    fail(ErrorKind::invalid_argument, "t degrees of freedom must be positive");
  log_norm_ = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
              0.5 * std::log(df * std::numbers::pi);
}

std::string
StudentTDensity::name() const
{
  return "t(" + format_number(df_) + ")";
}

double
StudentTDensity::log_density(double z) const
{
  return log_norm_ - 0.5 * (df_ + 1.0) * std::log1p(z * z / df_);
}

double
StudentTDensity::score1(double z) const
{
  return -(df_ + 1.0) * z / (df_ + z * z);
}

double
StudentTDensity::score2(double z) const
{
  double d = df_ + z * z;
  return -(df_ + 1.0) * (df_ - z * z) / (d * d);
}

double
StudentTDensity::sample_one(Stream& stream) const
{
  double z = stream.normal();
  double chi2 = 2.0 * stream.gamma(0.5 * df_);
  return z / std::sqrt(chi2 / df_);
}

double
StudentTDensity::variance() const
{
  return df_ > 2.0 ? df_ / (df_ - 2.0) : std::numeric_limits<double>::infinity();
}

// normal mixture

NormalMixtureDensity::NormalMixtureDensity(double mu)
  : mu_(mu)
{
  if (!std::isfinite(mu))
    fail(ErrorKind::invalid_argument, "mixture offset must be finite");
}

std::string
NormalMixtureDensity::name() const
{
  return mu_ == 3.0 ? "mix-normal" : "mix-normal(" + format_number(mu_) + ")";
}

double
NormalMixtureDensity::log_density(double z) const
{
  // (phi(z - mu) + phi(z + mu)) / 2 = phi(z) exp(-mu^2/2) cosh(mu z)
  return -0.5 * z * z - log_sqrt_2pi - 0.5 * mu_ * mu_ + log_cosh(mu_ * z);
}

double
NormalMixtureDensity::score1(double z) const
{
  return -z + mu_ * std::tanh(mu_ * z);
}

double
NormalMixtureDensity::score2(double z) const
{
  double th = std::tanh(mu_ * z);
  return -1.0 + mu_ * mu_ * (1.0 - th * th);
}

double
NormalMixtureDensity::sample_one(Stream& stream) const
{
  double centre = stream.uniform() < 0.5 ? -mu_ : mu_;
  return centre + stream.normal();
}

// centered beta

CenteredBetaDensity::CenteredBetaDensity(double a, double b, double half_width)
  : a_(a)
  , b_(b)
  , half_width_(half_width)
{
  if (!(a > 0.0) || !(b > 0.0) || !(half_width > 0.0))
    fail(ErrorKind::invalid_argument, "beta shapes and half width must be positive");
  mean_ = 2.0 * half_width * a / (a + b) - half_width;
  log_norm_ = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) -
              std::log(2.0 * half_width);
}

std::string
CenteredBetaDensity::name() const
{
  std::string s = "cbeta(" + format_number(a_) + "," + format_number(b_);
  if (half_width_ != 5.0)
    s += "," + format_number(half_width_);
  return s + ")";
}

double
CenteredBetaDensity::to_unit(double z) const
{
  return (z + mean_ + half_width_) / (2.0 * half_width_);
}

Support
CenteredBetaDensity::support() const
{
  return { -half_width_ - mean_, half_width_ - mean_ };
}

double
CenteredBetaDensity::log_density(double z) const
{
  double x = to_unit(z);
  if (!(x > 0.0 && x < 1.0))
    return -std::numeric_limits<double>::infinity();
  return log_norm_ + (a_ - 1.0) * std::log(x) + (b_ - 1.0) * std::log1p(-x);
}

double
CenteredBetaDensity::score1(double z) const
{
  double x = to_unit(z);
  return ((a_ - 1.0) / x - (b_ - 1.0) / (1.0 - x)) / (2.0 * half_width_);
}

double
CenteredBetaDensity::score2(double z) const
{
  double x = to_unit(z);
  double w = 2.0 * half_width_;
  return (-(a_ - 1.0) / (x * x) - (b_ - 1.0) / ((1.0 - x) * (1.0 - x))) / (w * w);
}

double
CenteredBetaDensity::sample_one(Stream& stream) const
{
  return 2.0 * half_width_ * stream.beta(a_, b_) - half_width_ - mean_;
}

double
CenteredBetaDensity::variance() const
{
  double s = a_ + b_;
  return 4.0 * half_width_ * half_width_ * a_ * b_ / (s * s * (s + 1.0));
}

// scaled

ScaledDensity::ScaledDensity(DensityPtr base, double scale)
  : base_(std::move(base))
  , scale_(scale)
{
  if (!base_)
    fail(ErrorKind::invalid_argument, "scaled density needs a base");
  if (!(scale > 0.0) || !std::isfinite(scale))
    fail(ErrorKind::invalid_argument, "scale must be positive");
  log_scale_ = std::log(scale);
}

std::string
ScaledDensity::name() const
{
  return "scaled(" + base_->name() + "," + format_number(scale_) + ")";
}

double
ScaledDensity::log_density(double z) const
{
  return base_->log_density(z / scale_) - log_scale_;
}

double
ScaledDensity::score1(double z) const
{
  return base_->score(z / scale_, 1) / scale_;
}

double
ScaledDensity::score2(double z) const
{
  return base_->score(z / scale_, 2) / (scale_ * scale_);
}

double
ScaledDensity::sample_one(Stream& stream) const
{
  return scale_ * base_->sample_one(stream);
}

Support
ScaledDensity::support() const
{
  Support s = base_->support();
  return { s.lower * scale_, s.upper * scale_ };
}

double
ScaledDensity::variance() const
{
  return scale_ * scale_ * base_->variance();
}

DensityPtr
standardized(DensityPtr base)
{
  double v = base->variance();
  if (!std::isfinite(v))
    fail(ErrorKind::invalid_argument,
         base->name() + " has no finite variance to standardize");
  return std::make_shared<ScaledDensity>(std::move(base), 1.0 / std::sqrt(v));
}

// parsing

namespace {

class SpecParser
{
public:
  explicit SpecParser(const std::string& text)
    : text_(text)
  {}

  DensityPtr parse_all()
  {
    auto d = parse();
    skip_ws();
    if (pos_ != text_.size())
      error("trailing characters");
    return d;
  }

private:
  DensityPtr parse()
  {
    skip_ws();
    std::string ident;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-' ||
            text_[pos_] == '_'))
      ident += static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_++])));
    if (ident.empty())
      error("expected a distribution name");
    skip_ws();
    bool has_args = pos_ < text_.size() && text_[pos_] == '(';

    if (ident == "scaled") {
      expect('(');
      auto inner = parse();
      expect(',');
      double c = number();
      expect(')');
      return std::make_shared<ScaledDensity>(inner, c);
    }
    if (ident == "unit") {
      expect('(');
      auto inner = parse();
      expect(')');
      return standardized(inner);
    }

    std::vector<double> args;
    if (has_args) {
      expect('(');
      args.push_back(number());
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        args.push_back(number());
        skip_ws();
      }
      expect(')');
    }
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi)
        error("wrong number of arguments for '" + ident + "'");
    };
    if (ident == "normal" || ident == "gaussian") {
      arity(0, 0);
      return std::make_shared<NormalDensity>();
    }
    if (ident == "slash") {
      arity(0, 0);
      return std::make_shared<SlashDensity>();
    }
    if (ident == "cauchy") {
      arity(0, 0);
      return std::make_shared<StudentTDensity>(1.0);
    }
    if (ident == "t") {
      arity(1, 1);
      return std::make_shared<StudentTDensity>(args[0]);
    }
    if (ident == "mix-normal" || ident == "mixnormal") {
      arity(0, 1);
      return std::make_shared<NormalMixtureDensity>(args.empty() ? 3.0 : args[0]);
    }
    if (ident == "cbeta") {
      arity(2, 3);
      return std::make_shared<CenteredBetaDensity>(args[0], args[1],
                                                   args.size() == 3 ? args[2] : 5.0);
    }
    error("unknown distribution '" + ident + "'");
  }

  double number()
  {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' || text_[pos_] == '-' ||
            text_[pos_] == '+'))
      ++pos_;
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    if (first != last && *first == '+')
      ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || start == pos_)
      error("bad number");
    return value;
  }

  void expect(char c)
  {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      error(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  [[noreturn]] void error(const std::string& what) const
  {
    fail(ErrorKind::parse_error,
         "distribution spec '" + text_ + "' at " + std::to_string(pos_) + ": " + what);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

} // namespace

DensityPtr
parse_density(const std::string& spec)
{
  return SpecParser(spec).parse_all();
}

} // namespace condinf
