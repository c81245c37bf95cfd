#pragma once

#include <string>
#include <vector>

#include "twistorlab/profile.hpp"

namespace twistorlab {

enum class BoundaryEnd { Origin, Far };
/// Join: gamma itself near the end.  Gcvf: f = gamma^2 near the end.
enum class BoundaryMode { Join, Gcvf };
enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v);
const char* to_string(BoundaryEnd e);

struct BoundaryReport {
  Verdict verdict = Verdict::Inconclusive;
  BoundaryEnd end = BoundaryEnd::Origin;
  BoundaryMode mode = BoundaryMode::Join;
  /// Taylor coefficients c_0..c_5 of the fitted expansion in t (distance to the end).
  std::vector<double> coefficients;
  /// Largest deviation among the coefficients the boundary condition pins down.
  double max_forbidden = 0.0;
  double condition_number = 0.0;
  int samples = 0;
  /// Verdict obtained with twice the samples (must agree).
  Verdict refined = Verdict::Inconclusive;
  /// Tabulated profiles only give an approximate verdict.
  bool approximate = false;
  std::string detail;
};

struct SmoothnessOptions {
  int samples = 40;
  double window = 1e-2;
  double threshold = 1e-6;
  double max_condition = 1e10;
};

/// Fit the expansion of gamma (or gamma^2) at one end of (0, l) and test the
/// coefficients required by the boundary conditions:
///   join, origin:  gamma(t)     = t + O(t^3)          (c0 = 0, c1 = 1, c2 = 0)
///   join, far:     gamma(l - t) = 1/c + O(t^2)        (c0 = 1/c, c1 = 0, c3 = 0)
///   gcvf, either:  gamma^2      = t^2 + O(t^4)        (c0 = c1 = c3 = 0, c2 = 1)
BoundaryReport smoothness_analyzer(const ProfileFunction& gamma, double l, double c, BoundaryEnd end,
                                   BoundaryMode mode, const SmoothnessOptions& options = {});

}  // namespace twistorlab
