#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twistorlab/errors.hpp"
#include "twistorlab/families.hpp"
#include "twistorlab/twistor.hpp"

namespace twistorlab::verify {

inline const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> names{"curvature_sanity", "killing", "twistor",  "sasakian",
                                              "section3",         "section4", "boundary", "weitzenboeck"};
  return names;
}

struct RunConfig {
  FamilySpec family;
  /// Canonical order of all_suites(); duplicates removed.
  std::vector<std::string> suites = all_suites();
  int samples = 200;
  std::uint64_t seed = 42;
  /// 0 = hardware concurrency.  Output does not depend on it.
  int threads = 0;
  /// Random skew endomorphisms per point for the curvature commutator identity.
  int omegas = 10;
  Tolerances tolerances;
  /// Multiplies every tolerance (set from TWISTORLAB_TOL_SCALE by the CLI).
  double tolerance_scale = 1.0;
  std::string output_dir = ".";
  std::string format = "json";

  Tolerances resolved_tolerances() const { return tolerances.scaled(tolerance_scale); }
};

/// Parse the declarative format:
///
///   # comment
///   [family]
///   kind = riemannian_join
///   gamma.kind = perturbed_sin
///   run.samples = 100        # dotted keys work in any section
///
/// Numbers accept pi, e.g. "pi/2" or "0.5*pi".  Lists are comma separated,
/// optionally in brackets.  Unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Check cross-field constraints; throws ConfigError naming the key.
void validate(const RunConfig& config);

/// Add the boundary suite for families that carry boundary conditions.
void apply_suite_rules(RunConfig& config);

bool valid_format(const std::string& format);

}  // namespace twistorlab::verify
