#include "condinf/error.hpp"

namespace condinf {

const char*
to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::parse_error:
      return "ParseError";
    case ErrorKind::invalid_argument:
      return "InvalidArgument";
    case ErrorKind::singular_design:
      return "SingularDesign";
    case ErrorKind::degenerate_fit:
      return "DegenerateFit";
    case ErrorKind::unsupported_point:
      return "UnsupportedPoint";
    case ErrorKind::bad_bandwidth:
      return "BadBandwidth";
    case ErrorKind::index_out_of_range:
      return "IndexOutOfRange";
    case ErrorKind::out_of_domain:
      return "OutOfDomain";
    case ErrorKind::integration_failure:
      return "IntegrationFailure";
    case ErrorKind::dimension_too_high:
      return "DimensionTooHigh";
    case ErrorKind::chain_diagnostics_failure:
      return "ChainDiagnosticsFailure";
    case ErrorKind::rejection_budget_exceeded:
      return "RejectionBudgetExceeded";
    case ErrorKind::score_singularity:
      return "ScoreSingularity";
    case ErrorKind::singular_information:
      return "SingularInformation";
    case ErrorKind::insufficient_draws:
      return "InsufficientDraws";
  }
  return "Error";
}

} // namespace condinf
