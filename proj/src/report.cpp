#include "condinf/report.hpp"

namespace condinf {

std::string
format_double(double x)
{
  return json(x).dump();
}

json
to_json(const Eigen::VectorXd& v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(v(i));
  return out;
}

json
fit_report(const Dataset& data, const FitResult& fit, ModelKind kind, Estimator estimator)
{
  json out;
  out["n"] = data.n();
  out["p"] = data.p();
  out["model"] = to_string(kind);
  out["estimator"] = to_string(estimator);
  out["beta_hat"] = to_json(fit.beta_hat);
  out["sigma_hat"] = fit.sigma_hat;
  out["residuals"] = to_json(fit.residuals_raw);
  out["studentized_residuals"] = to_json(fit.residuals_studentized);
  ConditionReport cr = check_design_conditions(std::vector<Eigen::MatrixXd>{ data.X() });
  const DesignConditions& d = cr.designs.front();
  out["condition"] = { { "min_eigenvalue", d.min_eigenvalue },
                       { "max_leverage", d.max_leverage },
                       { "moment", d.moment },
                       { "eta", cr.eta } };
  return out;
}

json
to_json(const ConfidenceInterval& ci)
{
  return { { "level", ci.level },
           { "method", ci.method },
           { "lower", to_json(ci.lower) },
           { "upper", to_json(ci.upper) } };
}

json
to_json(const ConditionalNormalSummary& s)
{
  json info = json::array();
  for (Eigen::Index i = 0; i < s.info.rows(); ++i)
    info.push_back(to_json(Eigen::VectorXd(s.info.row(i).transpose())));
  json out = { { "n", s.n },
               { "model", to_string(s.kind) },
               { "source", to_string(s.source) },
               { "info", info },
               { "theta", to_json(s.theta) },
               { "scale_info", s.scale_info },
               { "scale_theta", s.scale_theta } };
  if (s.source == ScoreSource::plugin_score) {
    out["delta1"] = s.delta1;
    out["delta2"] = s.delta2;
  }
  out["warnings"] = s.warnings;
  return out;
}

json
to_json(const CoverageReport& r)
{
  json records = json::array();
  for (const auto& rec : r.records)
    records.push_back({ { "level", rec.level },
                        { "coverage", rec.coverage },
                        { "se", rec.se },
                        { "method", rec.method },
                        { "n", r.n },
                        { "R", r.R },
                        { "seed", r.seed },
                        { "ancillary_hash", r.ancillary_hash },
                        { "failures", rec.failures } });
  return records;
}

json
to_json(const CmseRow& row)
{
  return { { "confrontation", row.confrontation },
           { "params", row.params },
           { "error_dist", row.error_dist },
           { "n", row.n },
           { "R", row.R },
           { "cmse", row.cmse },
           { "mc_se", row.mc_se },
           { "seed", row.seed },
           { "v", row.v } };
}

namespace {

// commas inside a field would break the column layout
std::string
csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

} // namespace

void
write_coverage_csv(std::ostream& os, const CoverageReport& r)
{
  os << "method,level,coverage,error,se,failures,n,R,seed,ancillary_hash\n";
  for (const auto& rec : r.records)
    os << csv_field(rec.method) << ',' << format_double(rec.level) << ','
       << format_double(rec.coverage) << ',' << format_double(rec.coverage - rec.level) << ','
       << format_double(rec.se) << ',' << rec.failures << ',' << r.n << ',' << r.R << ','
       << r.seed << ',' << r.ancillary_hash << '\n';
}

void
write_cmse_csv(std::ostream& os, const std::vector<CmseRow>& rows)
{
  os << "confrontation,params,error_dist,n,R,cmse,mc_se,seed\n";
  for (const auto& row : rows)
    os << csv_field(row.confrontation) << ',' << csv_field(row.params) << ','
       << csv_field(row.error_dist) << ',' << row.n << ',' << row.R << ','
       << format_double(row.cmse) << ',' << format_double(row.mc_se) << ',' << row.seed << '\n';
}

} // namespace condinf
