#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "twistorlab/errors.hpp"
#include "twistorlab/families.hpp"
#include "twistorlab/twistor.hpp"

using namespace twistorlab;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> grid(double a, double b, int count) {
  std::vector<double> s;
  for (int i = 0; i < count; ++i) s.push_back(a + (b - a) * (i + 0.5) / count);
  return s;
}

FrameCurvature curvature_at(const MetricField& g, const std::vector<double>& p) {
  const PointGeometry geo(g, p, 2);
  return FrameCurvature(geo);
}

}  // namespace

TEST(Profile, BuiltinsAndJetEvaluation) {
  const ProfileFunction sine = ProfileFunction::sine();
  const auto d = sine.derivatives(0.7);
  EXPECT_DOUBLE_EQ(d[0], std::sin(0.7));
  EXPECT_DOUBLE_EQ(d[1], std::cos(0.7));
  EXPECT_DOUBLE_EQ(d[2], -std::sin(0.7));
  EXPECT_DOUBLE_EQ(d[3], -std::cos(0.7));
  const ProfileFunction p = ProfileFunction::polynomial({1.0, -2.0, 0.5});
  EXPECT_DOUBLE_EQ(p(2.0), 1.0 - 4.0 + 2.0);
  EXPECT_DOUBLE_EQ(p.derivatives(2.0)[1], -2.0 + 2.0);
  const Jet s = Jet::variable(1, 2, 0.3, 0);
  const Jet v = ProfileFunction::perturbed_sine(0.2)(s);
  EXPECT_NEAR(v.value(), std::sin(0.3) * (1 + 0.2 * std::sin(0.3) * std::sin(0.3)), 1e-15);
}

TEST(Profile, IntegralOfPolynomialIsExact) {
  const ProfileFunction p = ProfileFunction::polynomial({1.0, 3.0, -6.0});
  // s + 3/2 s^2 - 2 s^3 on [0.2, 1.1]
  auto prim = [](double s) { return s + 1.5 * s * s - 2.0 * s * s * s; };
  EXPECT_NEAR(integrate_profile(p, 0.2, 1.1), prim(1.1) - prim(0.2), 1e-14);
}

TEST(Lambda, CosineFromSine) {
  const ProfileFunction lambda = lambda_from_gamma(ProfileFunction::sine(), kPi / 2, 1.0);
  for (const double s : grid(0.0, kPi / 2, 20)) {
    EXPECT_NEAR(lambda(s), std::cos(s), 1e-10);
    EXPECT_DOUBLE_EQ(lambda.derivatives(s)[1], -std::sin(s));
    EXPECT_DOUBLE_EQ(lambda.derivatives(s)[2], -std::cos(s));
  }
  EXPECT_NEAR(lambda(kPi / 2), 0.0, 1e-14);
}

TEST(Lambda, ConstantProfileIsLinear) {
  const ProfileFunction lambda = lambda_from_gamma(ProfileFunction::constant(1.0), 1.0, 2.0);
  for (const double s : grid(0.0, 1.0, 11)) {
    EXPECT_NEAR(lambda(s), 2.0 * (1.0 - s), 1e-13);
    EXPECT_DOUBLE_EQ(lambda.derivatives(s)[1], -2.0);
  }
}

TEST(Lambda, DerivativeIsMinusCGamma) {
  const ProfileFunction gamma = ProfileFunction::perturbed_sine(0.3);
  const double c = 0.8;
  const ProfileFunction lambda = lambda_from_gamma(gamma, kPi / 2, c);
  for (const double s : grid(0.0, kPi / 2, 15)) {
    EXPECT_NEAR(lambda.derivatives(s)[1], -c * gamma(s), 1e-15);
    // Independent check of the primitive with a central difference.
    const double h = 1e-5;
    EXPECT_NEAR((lambda(s + h) - lambda(s - h)) / (2 * h), -c * gamma(s), 1e-9);
  }
}

TEST(Smoothness, SineAtBothEndsOfTheJoin) {
  const ProfileFunction sine = ProfileFunction::sine();
  for (const BoundaryEnd end : {BoundaryEnd::Origin, BoundaryEnd::Far}) {
    const BoundaryReport r = smoothness_analyzer(sine, kPi / 2, 1.0, end, BoundaryMode::Join);
    EXPECT_EQ(r.verdict, Verdict::Pass) << r.detail;
    EXPECT_EQ(r.refined, r.verdict);
    EXPECT_LE(r.max_forbidden, 1e-6);
    EXPECT_LT(r.condition_number, 1e10);
    ASSERT_EQ(r.coefficients.size(), 6u);
  }
  const BoundaryReport origin = smoothness_analyzer(sine, kPi / 2, 1.0, BoundaryEnd::Origin, BoundaryMode::Join);
  EXPECT_NEAR(origin.coefficients[1], 1.0, 1e-8);
  EXPECT_NEAR(origin.coefficients[3], -1.0 / 6.0, 1e-4);
}

TEST(Smoothness, QuadraticTermAtOriginIsRejected) {
  const ProfileFunction bad = ProfileFunction::polynomial({0.0, 1.0, 1.0});
  const BoundaryReport r = smoothness_analyzer(bad, 1.0, 0.5, BoundaryEnd::Origin, BoundaryMode::Join);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_NEAR(r.max_forbidden, 1.0, 1e-6);
  EXPECT_THROW(make_riemannian_join(4, bad, 1.0, 0.5), BoundaryConditionError);
  try {
    make_riemannian_join(4, bad, 1.0, 0.5);
  } catch (const BoundaryConditionError& e) {
    EXPECT_NE(std::string(e.what()).find("origin"), std::string::npos);
  }
}

TEST(Smoothness, WrongConstantAtFarEndIsRejected) {
  const BoundaryReport r =
      smoothness_analyzer(ProfileFunction::sine(), kPi / 2, 1.1, BoundaryEnd::Far, BoundaryMode::Join);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_NEAR(r.max_forbidden, 1.0 - 1.0 / 1.1, 1e-6);
  try {
    make_riemannian_join(4, ProfileFunction::sine(), kPi / 2, 1.1);
    FAIL() << "expected a boundary error";
  } catch (const BoundaryConditionError& e) {
    EXPECT_NE(std::string(e.what()).find("far"), std::string::npos) << e.what();
  }
}

TEST(Smoothness, GcvfSineSquaredAtBothEnds) {
  for (const BoundaryEnd end : {BoundaryEnd::Origin, BoundaryEnd::Far}) {
    const BoundaryReport r = smoothness_analyzer(ProfileFunction::sine(), kPi, 1.0, end, BoundaryMode::Gcvf);
    EXPECT_EQ(r.verdict, Verdict::Pass) << r.detail;
    EXPECT_NEAR(r.coefficients[2], 1.0, 1e-6);
  }
  // gamma = sin(s) / 2 has the wrong slope at both ends.
  const ProfileFunction half = ProfileFunction::from_expression("half_sin", [](const Jet& s) { return 0.5 * sin(s); });
  EXPECT_EQ(smoothness_analyzer(half, kPi, 1.0, BoundaryEnd::Origin, BoundaryMode::Gcvf).verdict, Verdict::Fail);
}

TEST(Smoothness, VerdictIsStableUnderRefinement) {
  SmoothnessOptions fine;
  fine.samples = 80;
  const ProfileFunction g = ProfileFunction::perturbed_sine(0.2);
  for (const BoundaryEnd end : {BoundaryEnd::Origin, BoundaryEnd::Far}) {
    const auto coarse = smoothness_analyzer(g, kPi / 2, 1.0 / 1.2, end, BoundaryMode::Join);
    const auto refined = smoothness_analyzer(g, kPi / 2, 1.0 / 1.2, end, BoundaryMode::Join, fine);
    EXPECT_EQ(coarse.verdict, Verdict::Pass) << coarse.detail;
    EXPECT_EQ(refined.verdict, coarse.verdict);
    EXPECT_EQ(coarse.refined, coarse.verdict);
  }
}

TEST(Smoothness, IllConditionedFitIsInconclusive) {
  SmoothnessOptions strict;
  strict.max_condition = 1.0;
  const BoundaryReport r =
      smoothness_analyzer(ProfileFunction::sine(), kPi / 2, 1.0, BoundaryEnd::Origin, BoundaryMode::Join, strict);
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
  EXPECT_FALSE(r.detail.empty());
}

TEST(Tabulated, SplineFollowsSineAndIsApproximate) {
  std::vector<double> values;
  const int count = 41;
  for (int i = 0; i < count; ++i) values.push_back(std::sin(kPi / 2 * i / (count - 1)));
  const ProfileFunction t = ProfileFunction::tabulated(0.0, kPi / 2, values);
  EXPECT_TRUE(t.approximate());
  for (const double s : grid(0.0, kPi / 2, 30)) {
    EXPECT_NEAR(t(s), std::sin(s), 1e-6);
    EXPECT_NEAR(t.derivatives(s)[1], std::cos(s), 1e-4);
  }
  const BoundaryReport r = smoothness_analyzer(t, kPi / 2, 1.0, BoundaryEnd::Origin, BoundaryMode::Join);
  EXPECT_TRUE(r.approximate);
  EXPECT_THROW(ProfileFunction::tabulated(0.0, 1.0, {1.0, 2.0}), ParameterError);
}

TEST(Join, SineProfileIsTheRoundSphere) {
  for (const int n : {3, 4, 5}) {
    const FamilyInstance join = make_riemannian_join(n, ProfileFunction::sine(), kPi / 2, 1.0);
    ASSERT_TRUE(join.lambda.has_value());
    for (const auto& p : halton_points(join.metric.domain, 15, 2)) {
      const FrameCurvature R = curvature_at(join.metric, p);
      EXPECT_NEAR(R.scalar(), n * (n - 1.0), 1e-8);
      EXPECT_NEAR(R.sectional(Eigen::VectorXd::Unit(n, 0), Eigen::VectorXd::Unit(n, n - 1)), 1.0, 1e-9);
    }
  }
}

TEST(Join, FieldNormIsLambda) {
  const FamilyInstance join = make_riemannian_join(4, ProfileFunction::perturbed_sine(0.1), kPi / 2, 1.0 / 1.1);
  for (const auto& p : halton_points(join.metric.domain, 20, 9)) {
    const KillingPoint kp = evaluate_killing_point(join.metric, join.xi, p);
    EXPECT_NEAR(kp.xi_norm, (*join.lambda)(p[join.profile_axis]), 1e-12);
  }
}

TEST(Join, PerturbedProfileIsNotConstantCurvature) {
  const FamilyInstance join = make_riemannian_join(4, ProfileFunction::perturbed_sine(0.1), kPi / 2, 1.0 / 1.1);
  EXPECT_FALSE(join.constant_curvature.has_value());
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& p : halton_points(join.metric.domain, 30, 1)) {
    const FrameCurvature R = curvature_at(join.metric, p);
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        const double k = R.sectional(Eigen::VectorXd::Unit(4, a), Eigen::VectorXd::Unit(4, b));
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
    }
  }
  EXPECT_GT(hi - lo, 0.01);
}

TEST(Families, ParameterValidation) {
  EXPECT_THROW(make_warped_mapping_torus(4, 1.0), ParameterError);
  EXPECT_THROW(make_warped_mapping_torus(4, 0.5), ParameterError);
  EXPECT_THROW(make_round_sphere(3, -1.0), ParameterError);
  EXPECT_THROW(make_sasakian_sphere(0.0), ParameterError);
  EXPECT_THROW(make_round_sphere(3, 1.0, "L99"), ParameterError);
  EXPECT_THROW(family_kind_from_string("klein_bottle"), ParameterError);
  FamilySpec spec;
  spec.kind = FamilyKind::RiemannianJoin;
  spec.gamma.kind = "mystery";
  EXPECT_THROW(build_family(spec), ParameterError);
}

TEST(Families, TorusWarpingAndCurvature) {
  const double a = 2.0;
  const FamilyInstance torus = make_warped_mapping_torus(4, a);
  for (const auto& p : halton_points(torus.metric.domain, 15, 4)) {
    const KillingPoint kp = evaluate_killing_point(torus.metric, torus.xi, p);
    EXPECT_NEAR(kp.xi_norm, a + std::cos(p[torus.profile_axis]), 1e-12);
    EXPECT_LE(killing_residual(kp), 1e-9);
  }
}

TEST(Families, RoundSphereCurvatureScalesWithRadius) {
  for (const double r : {0.5, 1.0, 3.0}) {
    const FamilyInstance s = make_round_sphere(4, r);
    ASSERT_TRUE(s.constant_curvature.has_value());
    EXPECT_DOUBLE_EQ(*s.constant_curvature, 1.0 / (r * r));
    const auto p = halton_points(s.metric.domain, 1, 0).front();
    EXPECT_NEAR(curvature_at(s.metric, p).scalar(), 12.0 / (r * r), 1e-8);
  }
}

TEST(Families, AllGeneratorsAreKilling) {
  for (const FamilyInstance& inst : {make_round_sphere(3, 1.0), make_round_sphere(4, 2.0), make_sasakian_sphere(1.0)}) {
    // All L_ab of R^{n+1}.
    const std::size_t m = inst.metric.domain.dim() + 1;
    EXPECT_EQ(inst.killing.size(), m * (m - 1) / 2);
    for (const VectorField& v : inst.killing) {
      for (const auto& p : halton_points(inst.metric.domain, 10, 7)) {
        EXPECT_LE(killing_residual(evaluate_killing_point(inst.metric, v, p)), 1e-9) << inst.label << " " << v.label;
      }
    }
  }
}

TEST(Families, PerturbationScalesTheMetric) {
  const FamilyInstance flat = make_flat(3);
  const MetricField g = perturb_metric(flat.metric, 0.25);
  const std::vector<double> p{0.2, 0.4, 0.9};
  const PointGeometry geo(g, p, 1);
  EXPECT_NEAR(geo.metric()(0, 0).value(), 1.0 + 0.25 * std::sin(0.9), 1e-15);
  EXPECT_NEAR(geo.metric()(1, 2).value(), 0.0, 1e-15);
  FamilySpec spec;
  spec.kind = FamilyKind::RoundSphere;
  spec.perturbation = 0.1;
  const FamilyInstance perturbed = build_family(spec);
  EXPECT_FALSE(perturbed.constant_curvature.has_value());
}

TEST(Families, GcvfFieldIsConformalNotKilling) {
  const FamilyInstance n3 = make_gcvf_factor(3, ProfileFunction::sine(), kPi, 1.0);
  EXPECT_FALSE(n3.xi_killing);
  ASSERT_EQ(n3.boundary.size(), 2u);
  for (const BoundaryReport& r : n3.boundary) EXPECT_EQ(r.verdict, Verdict::Pass);
  for (const auto& p : halton_points(n3.metric.domain, 10, 3)) {
    EXPECT_GT(killing_residual(evaluate_killing_point(n3.metric, n3.xi, p)), 0.1);
  }
}
