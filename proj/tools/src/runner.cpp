#include "twistorlab/verify/runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "twistorlab/version.hpp"

namespace twistorlab::verify {

namespace {

bool selected(const RunConfig& config, const std::string& suite) {
  return std::find(config.suites.begin(), config.suites.end(), suite) != config.suites.end();
}

void append(std::vector<IdentityRecord>& out, std::vector<IdentityRecord> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

// Keep the residuals but take the records out of the pass/fail count.
std::vector<IdentityRecord> demote(std::vector<IdentityRecord> records, const std::string& note) {
  for (IdentityRecord& r : records) {
    if (r.status == RecordStatus::Skipped) continue;
    r.status = RecordStatus::NotApplicable;
    r.note = note;
  }
  return records;
}

std::vector<ProfileRow> profile_rows(const FamilyInstance& inst, std::span<const KillingPoint> points) {
  std::vector<ProfileRow> rows;
  const int axis = std::max(inst.profile_axis, 0);
  for (const KillingPoint& kp : points) {
    ProfileRow row;
    row.s = kp.point[axis];
    if (inst.gamma) row.gamma = (*inst.gamma)(row.s);
    if (inst.lambda) row.lambda = (*inst.lambda)(row.s);
    row.xi_norm = kp.xi_norm;
    if (std::isfinite(kp.f_fit)) row.f = kp.f_fit;
    row.k_sample = kp.curvature.sectional(Eigen::VectorXd::Unit(kp.n, 0), Eigen::VectorXd::Unit(kp.n, kp.n - 1));
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ProfileRow& a, const ProfileRow& b) { return a.s < b.s; });
  return rows;
}

}  // namespace

VerificationReport run(const RunConfig& config) {
  VerificationReport report;
  report.version = kVersionString;
  report.config = config;
  report.tolerances = config.resolved_tolerances();
  const Tolerances& tol = report.tolerances;

  FamilyInstance inst;
  try {
    inst = build_family(config.family);
  } catch (const Error& e) {
    report.constructed = false;
    report.cause = e.what();
    return report;
  }
  report.constructed = true;
  report.instance_label = inst.label;
  report.sasaki_k = inst.sasaki_k;
  if (inst.kind == FamilyKind::RiemannianJoin || inst.kind == FamilyKind::GcvfFactor) report.c = inst.c;

  std::vector<IdentityRecord> records;
  if (selected(config, "boundary")) append(records, boundary_suite(inst));

  const bool needs_points = std::any_of(config.suites.begin(), config.suites.end(),
                                        [](const std::string& s) { return s != "boundary"; });
  if (needs_points) {
    const auto samples = halton_points(inst.metric.domain, config.samples, config.seed);
    PointEvaluation eval = evaluate_points(inst.metric, inst.xi, samples, config.threads);
    std::vector<KillingPoint> points;
    points.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (eval.points[i]) {
        points.push_back(std::move(*eval.points[i]));
      } else {
        IdentityRecord r = make_record("sampling", "point_evaluation", static_cast<int>(i), samples[i], NAN, 0.0);
        r.note = eval.errors[i];
        records.push_back(std::move(r));
      }
    }

    const std::string not_killing = "field is not Killing";
    auto gate = [&](std::vector<IdentityRecord> recs) {
      return inst.xi_killing ? recs : demote(std::move(recs), not_killing);
    };
    if (selected(config, "curvature_sanity")) append(records, curvature_sanity_suite(inst, points, tol));
    if (selected(config, "killing")) append(records, gate(killing_suite(points, tol)));
    if (selected(config, "twistor")) append(records, twistor_suite(inst, points, tol));
    if (selected(config, "weitzenboeck")) append(records, weitzenboeck_suite(points, inst.xi_killing, tol));
    if (selected(config, "section3")) append(records, gate(curvature_identity_suite(points, tol, config.seed, config.omegas)));
    if (selected(config, "section4") || selected(config, "sasakian")) {
      SuiteResult s4 = killing_twistor_suite(points, tol);
      if (inst.xi_killing) report.classification = s4.classification;
      if (selected(config, "section4")) append(records, gate(std::move(s4.records)));
      if (selected(config, "sasakian")) {
        append(records, gate(sasakian_suite(points, inst.sasaki_k, tol)));
        append(records, gate(sasakian_case_checks(points, s4.classification, tol)));
      }
    }
    report.profiles = profile_rows(inst, points);
  }
  canonical_order(records);
  report.records = std::move(records);
  return report;
}

std::vector<SummaryRow> VerificationReport::summary() const {
  std::vector<SummaryRow> rows;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const IdentityRecord& r : records) {
    const auto key = std::make_pair(r.suite, r.identity);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      rows.push_back(SummaryRow{r.suite, r.identity});
    }
    SummaryRow& row = rows[it->second];
    ++row.count;
    switch (r.status) {
      case RecordStatus::Pass:
      case RecordStatus::Fail:
        (r.status == RecordStatus::Pass ? row.passed : row.failed)++;
        // A NaN residual poisons max and mean on purpose.
        if (std::isnan(r.residual) || std::isnan(row.max)) {
          row.max = NAN;
        } else {
          row.max = std::max(row.max, r.residual);
        }
        row.mean += r.residual;
        break;
      default:
        ++row.skipped;
    }
  }
  for (SummaryRow& row : rows) {
    const int n = row.passed + row.failed;
    row.mean = n > 0 ? row.mean / n : 0.0;
  }
  return rows;
}

int VerificationReport::passed() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(),
                                        [](const IdentityRecord& r) { return r.status == RecordStatus::Pass; }));
}

int VerificationReport::failed() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(),
                                        [](const IdentityRecord& r) { return r.status == RecordStatus::Fail; }));
}

int VerificationReport::skipped() const { return static_cast<int>(records.size()) - passed() - failed(); }

int VerificationReport::exit_code() const {
  if (!constructed) return 2;
  return failed() > 0 ? 1 : 0;
}

}  // namespace twistorlab::verify
