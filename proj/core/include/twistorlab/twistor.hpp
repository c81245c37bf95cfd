#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twistorlab/chart.hpp"
#include "twistorlab/forms.hpp"
#include "twistorlab/geometry.hpp"

namespace twistorlab {

inline constexpr double kDenominatorFloor = 1e-30;

/// num / (den + 1e-30)
inline double normalized(double num, double den) { return num / (den + kDenominatorFloor); }

/// Tolerance ladder by derivative order of the identity.
struct Tolerances {
  double order1 = 1e-9;
  double order2 = 1e-7;
  double order3 = 1e-6;

  Tolerances scaled(double factor) const { return {order1 * factor, order2 * factor, order3 * factor}; }
};

/// Everything the identity checks need at one sample point, in orthonormal
/// frame components.  Built from a single order-3 jet pass.
///
/// Naming: xi is the field, u = 1/2 d xi^flat (frame matrix u(e_a, e_b)),
/// U the matching endomorphism, f the function with nabla_X u = f X ^ xi.
struct KillingPoint {
  int n = 0;
  /// Position in the sample set; -1 when evaluated standalone.
  int index = -1;
  std::vector<double> point;
  PointGeometry geometry;
  FrameCurvature curvature;

  Eigen::VectorXd xi;
  double xi_norm = 0.0;
  /// (a, b) = <nabla_{e_a} xi, e_b>
  Eigen::MatrixXd nabla_xi;
  TwoFormAsEndo u;
  /// d u, a 3-form.
  Tensor<double> du;
  /// nabla_{e_a} u as 2-form matrices.
  std::vector<Eigen::MatrixXd> nabla_u;
  /// (a, b, c, d) = (nabla^2_{e_a, e_b} u)(e_c, e_d)
  Tensor<double> nabla2_u;
  /// (a, b, c) = <nabla^2_{e_a, e_b} xi, e_c>
  Tensor<double> hess_xi;
  Eigen::VectorXd delta_u;

  /// f from delta u = (1 - n) f xi, and its differential.
  double f_delta = 0.0;
  Eigen::VectorXd df;
  /// f from the least-squares fit of nabla_X u = f X ^ xi over frame directions.
  double f_fit = 0.0;
  /// Normalized residual of that fit.
  double f_fit_residual = 0.0;

  /// |u|^2 in the form normalization and its differential.
  double u_norm_sq = 0.0;
  Eigen::VectorXd d_u_norm_sq;
  /// d |xi|^2
  Eigen::VectorXd d_xi_norm_sq;
  /// (a, b, c) = (nabla^2_{e_a, e_b} d lambda)(e_c) with lambda = |xi|^2.
  Tensor<double> nabla2_dlambda;

  /// nabla* nabla xi and (d delta + delta d) xi^flat.
  Eigen::VectorXd rough_laplacian;
  Eigen::VectorXd hodge_laplacian;

  /// sqrt(sum_a |nabla_{e_a} u|^2), the natural size of nabla u.
  double nabla_u_norm() const;
};

/// Evaluate the field and the metric at one point (order-3 jets).
KillingPoint evaluate_killing_point(const MetricField& metric, const VectorField& xi, std::span<const double> point);

// ---- Operators ---------------------------------------------------------------

/// max_X |nabla_X w - 1/(p+1) X -| dw + 1/(n-p+1) X ^ delta w| over frame X,
/// divided by the largest sum of the three term norms.
double twistor_residual(const PointGeometry& geometry, const Tensor<Jet>& form);
double twistor_residual(const PointGeometry& geometry, const TensorField& form);

/// |sym nabla xi| / |nabla xi|
double killing_residual(const PointGeometry& geometry, const VectorField& xi);
double killing_residual(const KillingPoint& kp);

/// |nabla_X xi - U(X)| over frame X.
double nabla_xi_is_u_residual(const KillingPoint& kp);

struct SasakianResidual {
  /// nabla_X u = k xi ^ X
  double form = 0.0;
  /// nabla^2_{X,Y} xi = k (<xi, Y> X - <X, Y> xi)
  double second_derivative = 0.0;
};
SasakianResidual sasakian_residual(const KillingPoint& kp, double k);

/// nabla^2_{X,Y} xi = R_{X, xi} Y over frame pairs.
double kostant_residual(const KillingPoint& kp);

/// nabla* nabla xi = 1/2 Delta xi
double killing_weitzenboeck_residual(const KillingPoint& kp);
/// Delta xi = nabla* nabla xi + Ric(xi)
double bochner_residual(const KillingPoint& kp);

/// Seeded random skew-symmetric matrix with N(0, 1) entries.
Eigen::MatrixXd random_skew(int n, std::mt19937_64& rng);

/// Twistor residual of u from the stored frame data (same normalization as above).
double twistor_residual(const KillingPoint& kp);

/// Throws NotApplicableError unless n > 3 and u is a closed twistor form at the point.
void require_closed_twistor(const KillingPoint& kp, double tolerance);

/// (n-2)(R_w o U - U o R_w) = (R_U o w - w o R_U) + (U o Ric o w - w o Ric o U)
double curvature_commutator_identity(const FrameCurvature& curvature, const TwoFormAsEndo& u,
                                     const Eigen::MatrixXd& omega);
/// R_U o U = U o R_U (the case w = u of the previous identity).
double self_commutator_residual(const FrameCurvature& curvature, const TwoFormAsEndo& u);
/// U^2 o Ric = Ric o U^2
double ricci_commutation(const FrameCurvature& curvature, const TwoFormAsEndo& u);
/// sum_k R_w e_k ^ u(e_k) against R_w o U - U o R_w read back as a 2-form.
double curvature_action_consistency(const FrameCurvature& curvature, const TwoFormAsEndo& u,
                                    const Eigen::MatrixXd& omega);
/// nabla^2_{X,Y} u = 1/(n-2) Y ^ (e_j -| R_{X, e_j} u) for frame X = e_a, Y = e_b.
double second_derivative_identity(const KillingPoint& kp, int a, int b);
/// Maximum of the above over all frame pairs, normalized jointly.
double second_derivative_identity(const KillingPoint& kp);

}  // namespace twistorlab
