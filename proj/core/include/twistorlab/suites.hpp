#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twistorlab/families.hpp"
#include "twistorlab/twistor.hpp"

namespace twistorlab {

enum class RecordStatus { Pass, Fail, Skipped, NotApplicable };

const char* to_string(RecordStatus s);

/// One identity checked at one sample point (point_index = -1 for instance-level checks).
struct IdentityRecord {
  std::string suite;
  std::string identity;
  int point_index = -1;
  std::vector<double> point;
  double residual = 0.0;
  double tolerance = 0.0;
  RecordStatus status = RecordStatus::Pass;
  std::map<std::string, double> aux;
  std::string note;
};

/// Pass iff residual <= tolerance; NaN residuals fail.
IdentityRecord make_record(std::string suite, std::string identity, int index, std::vector<double> point,
                           double residual, double tolerance);
IdentityRecord not_applicable(std::string suite, std::string identity, int index, std::vector<double> point,
                              std::string note);

/// Sort by (suite, identity, point index); stable for equal keys.
void canonical_order(std::vector<IdentityRecord>& records);

/// Run fn(i) for i in [0, count) on up to `threads` workers (0 = hardware concurrency).
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Evaluate the field at every point in parallel; failures are reported per point.
struct PointEvaluation {
  std::vector<std::optional<KillingPoint>> points;
  std::vector<std::string> errors;
};
PointEvaluation evaluate_points(const MetricField& metric, const VectorField& xi,
                                const std::vector<std::vector<double>>& points, int threads);

/// Outcome of the "f constant or u of rank 2" dichotomy over a sample set.
struct Classification {
  /// f-constant | rank-2 | both | neither | undetermined
  std::string tag = "undetermined";
  int points_used = 0;
  int points_skipped = 0;
  double f_mean = 0.0;
  double f_stddev = 0.0;
  double f_min = 0.0;
  double f_max = 0.0;
  double f_abs_mean = 0.0;
  int rank_min = 0;
  int rank_max = 0;
  double max_xi_wedge_u = 0.0;
  /// stddev(f) / (tol * mean|f|): below 1 means f-constant.
  double constant_ratio = 0.0;
  /// max xi^u residual / tol: below 1 (with rank 2) means rank-2.
  double rank2_ratio = 0.0;
};

/// Rank of U by singular values above 1e-7 * largest.
int endomorphism_rank(const TwoFormAsEndo& u);

/// Normalized |xi ^ u|.
double xi_wedge_u_residual(const KillingPoint& kp);

/// Points with |xi| below 1e-6 * max|xi| are outside the support of xi.
std::vector<bool> support_mask(std::span<const KillingPoint> points);

/// Classify without producing records (same rules as the suite).
Classification classify(std::span<const KillingPoint> points, const Tolerances& tol);

struct SuiteResult {
  std::vector<IdentityRecord> records;
  Classification classification;
};

/// Identities for a Killing field whose u = 1/2 d xi is a twistor form:
/// nabla_xi u = 0, xi ^ delta u = 0, f extraction and agreement, the symmetry
/// u(xi) ^ df + u(df) ^ xi = 0, the three expressions for d|u|^2,
/// u(df) ^ xi = 0, xi ^ d xi = 0 and, on rank-2 instances, u = xi ^ u(xi) / |xi|^2.
SuiteResult killing_twistor_suite(std::span<const KillingPoint> points, const Tolerances& tol);

/// Killing residual, nabla xi = U and the Kostant formula.
std::vector<IdentityRecord> killing_suite(std::span<const KillingPoint> points, const Tolerances& tol);

/// Both Weitzenboeck formulas on xi (the Killing one only when xi is Killing).
std::vector<IdentityRecord> weitzenboeck_suite(std::span<const KillingPoint> points, bool xi_killing,
                                               const Tolerances& tol);

/// Curvature commutator identities for closed twistor 2-forms; n > 3 only.
/// Random skew endomorphisms are drawn from mt19937_64 seeded by (seed, point index).
std::vector<IdentityRecord> curvature_identity_suite(std::span<const KillingPoint> points, const Tolerances& tol,
                                                     std::uint64_t seed, int omegas = 10);

/// Checks for the constant-f branch, c = -f: Ric(xi) = (n-1) c xi,
/// Ric(xi) = nabla* nabla xi and, when |xi|^2 is non-constant, the
/// characteristic equation nabla^2 d lambda + c (2 dl(X) Y + dl(Y) X + dl <X, Y>) = 0.
std::vector<IdentityRecord> sasakian_case_checks(std::span<const KillingPoint> points,
                                                 const Classification& classification, const Tolerances& tol);

/// Sasakian residual with constant k plus constancy of |xi|.
std::vector<IdentityRecord> sasakian_suite(std::span<const KillingPoint> points, std::optional<double> k,
                                           const Tolerances& tol);

/// Twistor residual of u, and the family specific twistor / conformal checks
/// (d lambda on the torus base, the gradient conformal field on a GCVF factor).
std::vector<IdentityRecord> twistor_suite(const FamilyInstance& instance, std::span<const KillingPoint> points,
                                          const Tolerances& tol);

/// Curvature symmetries, metric compatibility and constant-curvature checks.
std::vector<IdentityRecord> curvature_sanity_suite(const FamilyInstance& instance,
                                                   std::span<const KillingPoint> points, const Tolerances& tol);

/// Records for the boundary verdicts stored on the instance.
std::vector<IdentityRecord> boundary_suite(const FamilyInstance& instance);

}  // namespace twistorlab
