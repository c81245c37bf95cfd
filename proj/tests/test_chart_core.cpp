#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fd_oracle.hpp"
#include "twistorlab/errors.hpp"
#include "twistorlab/families.hpp"
#include "twistorlab/geometry.hpp"
#include "twistorlab/jet.hpp"

using namespace twistorlab;

namespace {

double partial(const Jet& j, std::initializer_list<int> multi) {
  const std::vector<int> m(multi);
  return j.partial(m);
}

MetricField perturbed_join(int n) {
  const double eps = 0.1;
  return make_riemannian_join(n, ProfileFunction::perturbed_sine(eps), std::numbers::pi / 2, 1.0 / (1.0 + eps)).metric;
}

}  // namespace

TEST(Jet, MonomialCounts) {
  EXPECT_EQ(MonomialTable::get(6).count(3), kMaxJetTerms);
  EXPECT_EQ(MonomialTable::get(2).count(2), 6);
  EXPECT_EQ(MonomialTable::get(3).count(0), 1);
}

TEST(Jet, ProductOfElementaryFunctions) {
  // f = sin(x) exp(y) at (0.3, -0.4)
  const double x0 = 0.3, y0 = -0.4;
  const Jet x = Jet::variable(2, 3, x0, 0);
  const Jet y = Jet::variable(2, 3, y0, 1);
  const Jet f = sin(x) * exp(y);
  const double s = std::sin(x0), c = std::cos(x0), e = std::exp(y0);
  EXPECT_NEAR(f.value(), s * e, 1e-15);
  EXPECT_NEAR(partial(f, {1, 0}), c * e, 1e-15);
  EXPECT_NEAR(partial(f, {2, 1}), -s * e, 1e-15);
  EXPECT_NEAR(partial(f, {3, 0}), -c * e, 1e-15);
  EXPECT_NEAR(partial(f, {1, 2}), c * e, 1e-15);
  EXPECT_NEAR(partial(f, {0, 3}), s * e, 1e-15);
}

TEST(Jet, QuotientAndRoots) {
  const double x0 = 1.7;
  const Jet x = Jet::variable(1, 3, x0, 0);
  const Jet q = 1.0 / (1.0 + x * x);
  const double d = 1 + x0 * x0;
  EXPECT_NEAR(partial(q, {1}), -2 * x0 / (d * d), 1e-14);
  EXPECT_NEAR(partial(q, {2}), (6 * x0 * x0 - 2) / (d * d * d), 1e-14);
  const Jet r = sqrt(x);
  EXPECT_NEAR(partial(r, {3}), 3.0 / 8.0 * std::pow(x0, -2.5), 1e-14);
  const Jet lg = log(x);
  EXPECT_NEAR(partial(lg, {3}), 2.0 / (x0 * x0 * x0), 1e-14);
  const Jet p = pow(x, 1.5);
  EXPECT_NEAR(partial(p, {2}), 0.75 / std::sqrt(x0), 1e-14);
}

TEST(Jet, DerivativeLowersOrder) {
  const Jet x = Jet::variable(3, 3, 0.2, 1);
  const Jet f = cos(x) * x;
  const Jet df = f.derivative(1);
  EXPECT_EQ(df.order(), 2);
  EXPECT_NEAR(df.value(), std::cos(0.2) - 0.2 * std::sin(0.2), 1e-15);
  EXPECT_EQ(f.derivative(0).value(), 0.0);
  EXPECT_THROW(Jet::constant(3, 0, 1.0).derivative(0), OrderError);
}

TEST(Jet, MixedOrdersTruncate) {
  const Jet a = Jet::variable(2, 3, 1.0, 0);
  const Jet b = Jet::variable(2, 1, 2.0, 1);
  const Jet c = a * b;
  EXPECT_EQ(c.order(), 1);
  EXPECT_DOUBLE_EQ(c.value(), 2.0);
  EXPECT_DOUBLE_EQ(c.gradient(0), 2.0);
  EXPECT_DOUBLE_EQ(c.gradient(1), 1.0);
}

TEST(Geometry, FlatChartHasNoCurvature) {
  const FamilyInstance flat = make_flat(4);
  for (const auto& p : halton_points(flat.metric.domain, 20, 1)) {
    const PointGeometry geo(flat.metric, p);
    EXPECT_LE(max_abs(values(geo.christoffel())), 1e-12);
    EXPECT_LE(max_abs(values(geo.riemann())), 1e-12);
    EXPECT_LE(max_abs(values(geo.ricci())), 1e-12);
  }
}

TEST(Geometry, RoundSphereSectionalCurvature) {
  for (int n : {2, 3, 4}) {
    for (double radius : {1.0, 2.0}) {
      const FamilyInstance s = make_round_sphere(n, radius);
      for (const auto& p : halton_points(s.metric.domain, 25, 7)) {
        const FrameCurvature R(PointGeometry(s.metric, p));
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b) {
            const double k = R.sectional(Eigen::VectorXd::Unit(n, a), Eigen::VectorXd::Unit(n, b));
            EXPECT_NEAR(k * radius * radius, 1.0, 1e-8) << "n=" << n << " r=" << radius;
          }
        EXPECT_NEAR(R.scalar() * radius * radius, n * (n - 1.0), 1e-8);
      }
    }
  }
}

TEST(Geometry, ChristoffelMatchesFiniteDifferences) {
  const MetricField g = perturbed_join(4);
  for (const auto& p : halton_points(g.domain, 10, 3)) {
    const Tensor<double> gamma = christoffel(g, p);
    const auto ref = fd::christoffel(g, p);
    Tensor<double> ref_t(4, gamma.slots(), 0.0);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ref_t(k, i, j) = ref[k](i, j);
    EXPECT_LE(fd::relative_error(gamma, ref_t), 1e-8);
  }
}

TEST(Geometry, RiemannMatchesFiniteDifferences) {
  for (const MetricField& g : {perturbed_join(4), make_warped_mapping_torus(4, 2.0).metric,
                               make_sasakian_sphere(1.5).metric}) {
    for (const auto& p : halton_points(g.domain, 5, 11)) {
      EXPECT_LE(fd::relative_error(riemann(g, p), fd::riemann(g, p)), 1e-6) << g.label;
    }
  }
}

TEST(Geometry, CurvatureSymmetries) {
  const MetricField g = perturbed_join(5);
  const auto p = halton_points(g.domain, 1, 5)[0];
  const PointGeometry geo(g, p);
  const FrameCurvature R(geo);
  const int n = 5;
  double bianchi = 0.0, pair = 0.0, skew = 0.0;
  auto rf = [&](int a, int b, int c, int d) { return R(a, b)(d, c); };  // <R(e_a,e_b)e_c, e_d>
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          bianchi = std::max(bianchi, std::abs(rf(a, b, c, d) + rf(b, c, a, d) + rf(c, a, b, d)));
          pair = std::max(pair, std::abs(rf(a, b, c, d) - rf(c, d, a, b)));
          skew = std::max(skew, std::abs(rf(a, b, c, d) + rf(a, b, d, c)));
        }
  EXPECT_LE(bianchi, 1e-12);
  EXPECT_LE(pair, 1e-12);
  EXPECT_LE(skew, 1e-12);
  EXPECT_LE((R.ricci() - R.ricci().transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Geometry, RicciEndomorphismIsFrameTrace) {
  const MetricField g = make_warped_mapping_torus(4, 2.0).metric;
  const auto p = halton_points(g.domain, 1, 2)[0];
  const PointGeometry geo(g, p);
  const FrameCurvature R(geo);
  Eigen::MatrixXd trace = Eigen::MatrixXd::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i) trace.col(a) += R(a, i).col(i);
  EXPECT_LE((trace - R.ricci()).cwiseAbs().maxCoeff(), 1e-12);
  const RicciAtPoint ric = ricci(g, p);
  const Eigen::MatrixXd& E = geo.frame().frame;
  EXPECT_LE((E.transpose() * ric.form * E - R.ricci()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Geometry, FrameIsOrthonormal) {
  const MetricField g = perturb_metric(perturbed_join(4), 0.3);
  for (const auto& p : halton_points(g.domain, 20, 9)) {
    const FramePoint f = orthonormal_frame(g, p);
    EXPECT_LE(f.orthonormality_defect(), 1e-12);
    Tensor<double> gt(4, {Slot::Co, Slot::Co}, 0.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) gt(i, j) = f.metric(i, j);
    const Tensor<double> gf = to_frame(f, gt);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_NEAR(gf(i, j), i == j ? 1.0 : 0.0, 1e-12);
  }
}

TEST(Geometry, MetricInverseIsJetAccurate) {
  const MetricField g = make_sasakian_sphere(1.0).metric;
  const std::vector<double> p{0.7, 0.2, 1.1};
  const PointGeometry geo(g, p);
  // g g^-1 = 1 must hold for every Taylor coefficient, not only the value.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Jet s = geo.metric()(i, 0) * geo.inverse_metric()(0, j);
      for (int k = 1; k < 3; ++k) s += geo.metric()(i, k) * geo.inverse_metric()(k, j);
      s -= i == j ? 1.0 : 0.0;
      for (int m = 0; m < s.size(); ++m) EXPECT_NEAR(s.coefficient(m), 0.0, 1e-14);
    }
}

TEST(Geometry, RejectsPointsOutsideTheMargin) {
  const FamilyInstance s = make_round_sphere(3, 1.0);
  EXPECT_THROW(PointGeometry(s.metric, std::vector<double>{1e-3, 1.0, 0.5}), DomainError);
  EXPECT_THROW(PointGeometry(s.metric, std::vector<double>{1.0, 1.0}), DomainError);
  // Periodic axes accept any value.
  EXPECT_NO_THROW(PointGeometry(s.metric, std::vector<double>{1.0, 1.0, 40.0}));
}

TEST(Geometry, RejectsDegenerateMetric) {
  const MetricField bad{"degenerate", ChartDomain({ChartDomain::bounded("x", 0, 1), ChartDomain::bounded("y", 0, 1)}),
                        [](std::span<const Jet> q) {
                          Tensor<Jet> g(2, {Slot::Co, Slot::Co}, Jet::constant(2, q[0].order(), 1.0));
                          return g;
                        }};
  EXPECT_THROW(PointGeometry(bad, std::vector<double>{0.5, 0.5}), SingularMetricError);
}

TEST(Geometry, CurvatureNeedsOrderTwo) {
  const FamilyInstance s = make_round_sphere(2, 1.0);
  const PointGeometry geo(s.metric, std::vector<double>{1.0, 0.3}, 1);
  EXPECT_NO_THROW(geo.christoffel());
  EXPECT_THROW(geo.riemann(), OrderError);
  EXPECT_THROW(PointGeometry(s.metric, std::vector<double>{1.0, 0.3}, 4), OrderError);
}

TEST(Chart, HaltonPointsAreDeterministicAndInside) {
  const FamilyInstance s = make_round_sphere(4, 1.0);
  const auto a = halton_points(s.metric.domain, 50, 42);
  const auto b = halton_points(s.metric.domain, 50, 42);
  const auto c = halton_points(s.metric.domain, 50, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (const auto& p : a) EXPECT_TRUE(s.metric.domain.contains(p));
}

TEST(Chart, EmptySamplingRegionIsRejected) {
  EXPECT_THROW(ChartDomain({Axis{"x", 0.0, 1.0, 0.6, false}, ChartDomain::angle("t")}), ParameterError);
  EXPECT_THROW(ChartDomain({ChartDomain::angle("t")}), ParameterError);
}
