#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistorlab/suites.hpp"
#include "twistorlab/verify/config.hpp"

namespace twistorlab::verify {

/// Aggregate over the records of one (suite, identity) pair.  max and mean
/// cover pass/fail records only; skipped counts skipped and not-applicable ones.
struct SummaryRow {
  std::string suite;
  std::string identity;
  int count = 0;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  double max = 0.0;
  double mean = 0.0;
};

/// One sample point in profile order, for plotting.
struct ProfileRow {
  double s = 0.0;
  std::optional<double> gamma;
  std::optional<double> lambda;
  double xi_norm = 0.0;
  std::optional<double> f;
  /// Sectional curvature of the plane spanned by the first and last frame vectors.
  double k_sample = 0.0;
};

struct VerificationReport {
  std::string version;
  RunConfig config;
  Tolerances tolerances;
  std::string instance_label;
  bool constructed = false;
  /// Construction failure message (empty on success).
  std::string cause;
  std::vector<IdentityRecord> records;
  std::optional<Classification> classification;
  std::optional<double> sasaki_k;
  /// Join / GCVF constant c.
  std::optional<double> c;
  std::vector<ProfileRow> profiles;

  std::vector<SummaryRow> summary() const;
  int passed() const;
  int failed() const;
  int skipped() const;
  /// 0: every non-skipped record passes, 1: some record fails, 2: construction failed.
  int exit_code() const;
};

/// Build the family, sample it and run the configured suites.  Construction
/// errors are captured in the report rather than thrown.
VerificationReport run(const RunConfig& config);

}  // namespace twistorlab::verify
