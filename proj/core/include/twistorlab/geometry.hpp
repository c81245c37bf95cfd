#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "twistorlab/chart.hpp"
#include "twistorlab/jet.hpp"
#include "twistorlab/tensor.hpp"

namespace twistorlab {

/// Pointwise data in an orthonormal frame {e_a} built by Gram-Schmidt on the
/// coordinate basis in axis order.
struct FramePoint {
  std::vector<double> point;
  Eigen::MatrixXd metric;
  Eigen::MatrixXd inverse_metric;
  /// Gamma^k_ij at the point, layout (k, i, j).
  Tensor<double> christoffel;
  /// Column a holds the coordinate components of e_a.
  Eigen::MatrixXd frame;
  /// Row a holds the coordinate components of the dual covector theta^a.
  Eigen::MatrixXd coframe;

  int dim() const { return static_cast<int>(point.size()); }
  /// max_ab |<e_a, e_b> - delta_ab|
  double orthonormality_defect() const;
  /// Coordinate components of the vector with frame components v.
  Eigen::VectorXd to_coordinates(const Eigen::VectorXd& v) const { return frame * v; }
};

/// Levi-Civita geometry of a metric expanded around one chart point.
///
/// Holds g, g^-1, Gamma, Riemann and Ricci as jets. With a metric jet of order
/// K the Christoffel symbols carry order K-1 and curvature order K-2, so the
/// default K = 3 leaves one derivative of curvature and two of Gamma.
class PointGeometry {
 public:
  PointGeometry() = default;
  PointGeometry(const MetricField& metric, std::span<const double> point, int order = kMaxJetOrder);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::span<const double> point() const { return point_; }
  std::span<const Jet> coordinates() const { return coords_; }

  const Tensor<Jet>& metric() const { return g_; }
  const Tensor<Jet>& inverse_metric() const { return ginv_; }
  /// Gamma^k_ij, layout (k, i, j).
  const Tensor<Jet>& christoffel() const { return gamma_; }
  /// R^l_kij with R(d_i, d_j) d_k = R^l_kij d_l and
  /// R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]; layout (l, k, i, j).
  const Tensor<Jet>& riemann() const;
  /// Ric_jk = R^i_kij, layout (j, k).
  const Tensor<Jet>& ricci() const;
  const FramePoint& frame() const { return frame_; }

  /// Zero jet of the given order in this chart's dimension.
  Jet zero(int order) const { return Jet::constant(dim_, order, 0.0); }

 private:
  int dim_ = 0;
  int order_ = 0;
  std::vector<double> point_;
  std::vector<Jet> coords_;
  Tensor<Jet> g_;
  Tensor<Jet> ginv_;
  Tensor<Jet> gamma_;
  Tensor<Jet> riemann_;
  Tensor<Jet> ricci_;
  FramePoint frame_;
};

/// Curvature at a point in orthonormal-frame components.
class FrameCurvature {
 public:
  FrameCurvature() = default;
  explicit FrameCurvature(const PointGeometry& geometry);

  int dim() const { return dim_; }
  /// Endomorphism R(e_a, e_b) acting on column vectors.
  const Eigen::MatrixXd& operator()(int a, int b) const { return r_[a * dim_ + b]; }
  Eigen::MatrixXd endo(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  /// Symmetric Ricci endomorphism; Ric(X) = sum_i R(X, e_i) e_i.
  const Eigen::MatrixXd& ricci() const { return ricci_; }
  double scalar() const { return ricci_.trace(); }
  /// <R(X,Y)Y, X> / (|X|^2 |Y|^2 - <X,Y>^2)
  double sectional(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  /// R_w(X) = 1/2 sum_j R(e_j, w(e_j)) X for a skew endomorphism w.
  Eigen::MatrixXd action_of(const Eigen::MatrixXd& omega) const;

 private:
  int dim_ = 0;
  std::vector<Eigen::MatrixXd> r_;
  Eigen::MatrixXd ricci_;
};

struct RicciAtPoint {
  Eigen::MatrixXd form;  ///< Ric_jk
  Eigen::MatrixXd endo;  ///< Ric^j_k = g^ji Ric_ik
};

/// Gamma^k_ij at a point, computed with order-1 jets.
Tensor<double> christoffel(const MetricField& metric, std::span<const double> point);
/// R^l_kij at a point, computed with order-2 jets.
Tensor<double> riemann(const MetricField& metric, std::span<const double> point);
RicciAtPoint ricci(const MetricField& metric, std::span<const double> point);
FramePoint orthonormal_frame(const MetricField& metric, std::span<const double> point);

/// Re-express a coordinate tensor in the frame; every slot becomes a frame index.
Tensor<double> to_frame(const FramePoint& frame, const Tensor<double>& coordinate_tensor);

/// Jet-valued inverse of a symmetric positive definite jet matrix.
Tensor<Jet> invert_metric(const Tensor<Jet>& g);

}  // namespace twistorlab
