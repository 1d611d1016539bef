#pragma once

#include "condinf/intervals.hpp"
#include "condinf/model.hpp"
#include "condinf/npi.hpp"
#include "condinf/polysampling.hpp"

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

namespace condinf {

using json = nlohmann::ordered_json;

json to_json(const Eigen::VectorXd& v);
json fit_report(const Dataset& data, const FitResult& fit, ModelKind kind, Estimator estimator);
json to_json(const ConfidenceInterval& ci);
json to_json(const ConditionalNormalSummary& s);
json to_json(const CoverageReport& r);
json to_json(const CmseRow& row);

void write_coverage_csv(std::ostream& os, const CoverageReport& r);
void write_cmse_csv(std::ostream& os, const std::vector<CmseRow>& rows);

//! Shortest round-trip text of a double; the same text as the JSON output.
std::string format_double(double x);

} // namespace condinf
