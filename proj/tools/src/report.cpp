#include "twistorlab/verify/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace twistorlab::verify {

namespace {

using nlohmann::json;

json number_or_null(std::optional<double> v) { return v && std::isfinite(*v) ? json(*v) : json(nullptr); }

json record_json(const IdentityRecord& r) {
  json j;
  j["identity"] = r.identity;
  j["point_index"] = r.point_index;
  j["point"] = r.point;
  j["residual"] = number_or_null(r.residual);
  j["tolerance"] = r.tolerance;
  j["status"] = to_string(r.status);
  j["pass"] = r.status == RecordStatus::Pass;
  json aux = json::object();
  for (const auto& [k, v] : r.aux) aux[k] = number_or_null(v);
  j["aux"] = aux;
  j["note"] = r.note;
  return j;
}

json config_json(const RunConfig& c) {
  json family;
  const FamilySpec& f = c.family;
  family["kind"] = to_string(f.kind);
  family["n"] = f.n;
  family["radius"] = f.radius;
  family["k"] = f.k;
  family["a"] = f.a;
  family["l"] = number_or_null(f.l);
  family["c"] = number_or_null(f.c);
  family["xi"] = f.xi;
  family["perturbation"] = f.perturbation;
  family["gamma"] = {{"kind", f.gamma.kind}, {"epsilon", f.gamma.epsilon}, {"coeffs", f.gamma.coeffs},
                     {"values", f.gamma.values}};
  json run;
  run["samples"] = c.samples;
  run["seed"] = c.seed;
  run["suites"] = c.suites;
  run["omegas"] = c.omegas;
  json tol = {{"order1", c.tolerances.order1}, {"order2", c.tolerances.order2}, {"order3", c.tolerances.order3}};
  return {{"family", family}, {"run", run}, {"tol", tol}};
}

json classification_json(const Classification& c) {
  return {{"tag", c.tag},
          {"points_used", c.points_used},
          {"points_skipped", c.points_skipped},
          {"f_mean", c.f_mean},
          {"f_stddev", c.f_stddev},
          {"f_min", c.f_min},
          {"f_max", c.f_max},
          {"f_abs_mean", c.f_abs_mean},
          {"rank_min", c.rank_min},
          {"rank_max", c.rank_max},
          {"max_xi_wedge_u", c.max_xi_wedge_u},
          {"constant_ratio", c.constant_ratio},
          {"rank2_ratio", c.rank2_ratio}};
}

// Shortest representation that reads back to the same double.
std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_number(const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); }

}  // namespace

std::string to_json(const VerificationReport& report) {
  json j;
  j["version"] = report.version;
  j["config"] = config_json(report.config);
  j["seed"] = report.config.seed;
  j["tolerances"] = {{"order1", report.tolerances.order1},
                     {"order2", report.tolerances.order2},
                     {"order3", report.tolerances.order3},
                     {"scale", report.config.tolerance_scale}};
  j["instance"] = report.instance_label;
  j["status"] = {{"constructed", report.constructed}, {"cause", report.cause}, {"exit_code", report.exit_code()}};

  json suites = json::object();
  for (const IdentityRecord& r : report.records) suites[r.suite].push_back(record_json(r));
  j["suites"] = suites;

  json summary;
  summary["records"] = report.records.size();
  summary["passed"] = report.passed();
  summary["failed"] = report.failed();
  summary["skipped"] = report.skipped();
  json rows = json::array();
  for (const SummaryRow& row : report.summary()) {
    rows.push_back({{"suite", row.suite},
                    {"identity", row.identity},
                    {"count", row.count},
                    {"passed", row.passed},
                    {"failed", row.failed},
                    {"skipped", row.skipped},
                    {"max", number_or_null(row.max)},
                    {"mean", number_or_null(row.mean)}});
  }
  summary["identities"] = rows;
  json constants = json::object();
  if (report.sasaki_k) constants["k"] = *report.sasaki_k;
  if (report.c) constants["c"] = *report.c;
  summary["constants"] = constants;
  summary["classification"] = report.classification ? classification_json(*report.classification) : json(nullptr);
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

std::string to_csv_summary(const VerificationReport& report) {
  std::ostringstream out;
  out << "suite,identity,count,passed,failed,skipped,max_residual,mean_residual\n";
  for (const SummaryRow& row : report.summary()) {
    out << row.suite << ',' << row.identity << ',' << row.count << ',' << row.passed << ',' << row.failed << ','
        << row.skipped << ',' << csv_number(row.max) << ',' << csv_number(row.mean) << '\n';
  }
  return out.str();
}

std::string to_csv_profiles(const VerificationReport& report) {
  std::ostringstream out;
  out << "s,gamma,lambda,xi_norm,f,K_sample\n";
  for (const ProfileRow& row : report.profiles) {
    out << csv_number(row.s) << ',' << csv_number(row.gamma) << ',' << csv_number(row.lambda) << ','
        << csv_number(row.xi_norm) << ',' << csv_number(row.f) << ',' << csv_number(row.k_sample) << '\n';
  }
  return out.str();
}

std::string output_file_name(const std::string& format) {
  if (format == "json") return "report.json";
  if (format == "csv-summary") return "summary.csv";
  if (format == "csv-profiles") return "profiles.csv";
  throw ParameterError("unknown report format '" + format + "'");
}

std::string emit_report(const VerificationReport& report, const std::string& format, const std::string& dir) {
  const std::string name = output_file_name(format);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  if (format == "json") {
    out << to_json(report);
  } else if (format == "csv-summary") {
    out << to_csv_summary(report);
  } else {
    out << to_csv_profiles(report);
  }
  out.close();
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return path.string();
}

}  // namespace twistorlab::verify
