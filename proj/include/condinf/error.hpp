#pragma once

#include <stdexcept>
#include <string>

namespace condinf {

//! Error classes raised by the library. The CLI maps each one to its own
//! exit code.
enum class ErrorKind
{
  parse_error,
  invalid_argument,
  singular_design,
  degenerate_fit,
  unsupported_point,
  bad_bandwidth,
  index_out_of_range,
  out_of_domain,
  integration_failure,
  dimension_too_high,
  chain_diagnostics_failure,
  rejection_budget_exceeded,
  score_singularity,
  singular_information,
  insufficient_draws
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what)
    , kind_(kind)
  {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

//! Process exit code of an error class: 10 + its position in ErrorKind.
inline int
exit_code(ErrorKind kind)
{
  return 10 + static_cast<int>(kind);
}

[[noreturn]] inline void
fail(ErrorKind kind, const std::string& what)
{
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

} // namespace condinf
