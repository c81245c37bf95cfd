#pragma once

#include <string>

#include "twistorlab/verify/runner.hpp"

namespace twistorlab::verify {

/// Full nested report; keys sorted, floats in shortest round-trip form.
std::string to_json(const VerificationReport& report);
/// suite,identity,count,passed,failed,skipped,max_residual,mean_residual
std::string to_csv_summary(const VerificationReport& report);
/// s,gamma,lambda,xi_norm,f,K_sample (empty cell where a column does not apply)
std::string to_csv_profiles(const VerificationReport& report);

/// File name used for each format: report.json, summary.csv, profiles.csv.
std::string output_file_name(const std::string& format);

/// Write one format into dir (created if missing); returns the path written.
/// Throws Error when the file cannot be written.
std::string emit_report(const VerificationReport& report, const std::string& format, const std::string& dir);

}  // namespace twistorlab::verify
