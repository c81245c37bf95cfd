#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistorlab/chart.hpp"
#include "twistorlab/profile.hpp"
#include "twistorlab/smoothness.hpp"

namespace twistorlab {

enum class FamilyKind { RoundSphere, SasakianSphere, WarpedMappingTorus, RiemannianJoin, GcvfFactor, Flat };

const char* to_string(FamilyKind kind);
/// Throws ParameterError on an unknown tag.
FamilyKind family_kind_from_string(const std::string& tag);

struct ProfileSpec {
  /// sin | cos | polynomial | perturbed_sin | tabulated
  std::string kind = "sin";
  double epsilon = 0.1;
  std::vector<double> coeffs;
  std::vector<double> values;
};

ProfileFunction make_profile(const ProfileSpec& spec, double l);

/// Declarative description of one metric family and its distinguished field.
struct FamilySpec {
  FamilyKind kind = FamilyKind::RoundSphere;
  int n = 3;
  double radius = 1.0;
  double k = 1.0;
  double a = 2.0;
  /// Unset means the family default (pi/2 for the join, pi for a GCVF factor).
  std::optional<double> l;
  /// Unset means 1/gamma(l) for the join and 1 for a GCVF factor.
  std::optional<double> c;
  ProfileSpec gamma;
  /// Family specific selector; empty picks the default field.
  std::string xi;
  /// g -> (1 + perturbation * sin(q_last)) g; 0 leaves the metric alone.
  double perturbation = 0.0;
};

/// A constructed metric with its distinguished vector field and metadata.
struct FamilyInstance {
  FamilyKind kind = FamilyKind::Flat;
  std::string label;
  MetricField metric;
  VectorField xi;
  /// True when xi is meant to be Killing (false for the GCVF gradient field).
  bool xi_killing = true;
  /// Further Killing fields shipped with the family (includes xi when Killing).
  std::vector<VectorField> killing;
  /// Chart axis carrying the profile variable s, or -1.
  int profile_axis = -1;
  std::optional<ProfileFunction> gamma;
  /// |xi| as a function of s for the join, warping function for the torus.
  std::optional<ProfileFunction> lambda;
  double l = 0.0;
  double c = 0.0;
  /// Sectional curvature of constant-curvature instances.
  std::optional<double> constant_curvature;
  /// Sasakian constant.
  std::optional<double> sasaki_k;
  /// GCVF factor: primitive of X.  Torus: the warping function on the base.
  std::optional<ScalarField> potential;
  /// Base N of the torus, or the GCVF factor itself.
  std::optional<MetricField> base;
  std::vector<BoundaryReport> boundary;
};

/// Round S^n of the given radius in polar coordinates (r, phi_1, .., phi_{n-2}, theta).
/// The Killing fields are the rotation generators L_ab of R^{n+1}.
FamilyInstance make_round_sphere(int n, double radius, const std::string& xi = "");
/// Round S^3 of curvature k with the Hopf field, coordinates (eta, phi_1, phi_2).
FamilyInstance make_sasakian_sphere(double k, const std::string& xi = "");
/// g = (a + cos r)^2 dtheta^2 + g_{S^{n-1}}, xi = d_theta; needs a > 1 and n >= 3.
FamilyInstance make_warped_mapping_torus(int n, double a);
/// g = ds^2 + gamma^2 g_{S^{m-1}} on (0, l) with X = c gamma d_s.
FamilyInstance make_gcvf_factor(int m, const ProfileFunction& gamma, double l, double c, bool check_boundary = true);
/// g = ds^2 + gamma^2 g_{S^{n-2}} + lambda^2 dtheta^2 with lambda = c int_s^l gamma.
/// Throws BoundaryConditionError naming the failing end.
FamilyInstance make_riemannian_join(int n, const ProfileFunction& gamma, double l, double c);
/// Identity metric on [0, 1]^n; xi is "translation" (default) or "rotation".
FamilyInstance make_flat(int n, const std::string& xi = "");

/// Dispatch on spec.kind and apply the perturbation, if any.
FamilyInstance build_family(const FamilySpec& spec);

/// g -> (1 + amplitude sin(q_last)) g.
MetricField perturb_metric(const MetricField& metric, double amplitude);

}  // namespace twistorlab
