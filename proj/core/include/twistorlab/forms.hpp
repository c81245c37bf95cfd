#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "twistorlab/chart.hpp"
#include "twistorlab/errors.hpp"
#include "twistorlab/geometry.hpp"
#include "twistorlab/tensor.hpp"

// Conventions used throughout:
//   (a ^ b)_{ij} = a_i b_j - a_j b_i          (determinant wedge)
//   (X -| w)_{I} = X^a w_{aI}
//   d w_{i0..ip} = sum_s (-1)^s d_{is} w_{i0..^is..ip}
//   delta w     = -sum_i e_i -| nabla_{e_i} w
//   <a, b>_form = 1/p! a_I b^I
// A 2-form u corresponds to the skew endomorphism U with u(X, Y) = <U X, Y>.

namespace twistorlab {

namespace detail {

inline int permutation_sign(std::span<const int> perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
  return inversions % 2 ? -1 : 1;
}

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

template <class S>
void require_form(const Tensor<S>& t, const char* what) {
  for (Slot s : t.slots()) {
    if (s != Slot::Co) throw ValenceError(std::string(what) + " expects a differential form");
  }
}

}  // namespace detail

/// Exterior product of two forms (determinant convention).
template <class S>
Tensor<S> wedge(const Tensor<S>& a, const Tensor<S>& b) {
  detail::require_form(a, "wedge");
  detail::require_form(b, "wedge");
  const int n = a.dim();
  const int p = a.rank();
  const int q = b.rank();
  const int r = p + q;
  const S zero = a[0] * 0.0;
  Tensor<S> out(n, std::vector<Slot>(r, Slot::Co), zero);
  if (r > n) return out;
  const double scale = 1.0 / (detail::factorial(p) * detail::factorial(q));
  std::vector<int> idx(r), perm(r), ia(p), ib(q);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflat(f, idx);
    bool repeated = false;
    for (int i = 0; i < r && !repeated; ++i)
      for (int j = i + 1; j < r && !repeated; ++j) repeated = idx[i] == idx[j];
    if (repeated) continue;
    std::iota(perm.begin(), perm.end(), 0);
    S acc = zero;
    do {
      for (int k = 0; k < p; ++k) ia[k] = idx[perm[k]];
      for (int k = 0; k < q; ++k) ib[k] = idx[perm[p + k]];
      const S term = a.at(ia) * b.at(ib);
      if (detail::permutation_sign(perm) > 0) {
        acc += term;
      } else {
        acc -= term;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    out[f] = acc * scale;
  }
  return out;
}

/// Interior product X -| w with X given by components matching w's frame or chart.
template <class S, class V>
Tensor<S> interior(const V& x, const Tensor<S>& w) {
  if (w.rank() < 1) throw ValenceError("interior product of a 0-form");
  const int n = w.dim();
  std::vector<Slot> slots(w.slots().begin() + 1, w.slots().end());
  const S zero = w[0] * 0.0;
  Tensor<S> out(n, slots, zero);
  const std::size_t stride = w.stride(0);
  for (std::size_t f = 0; f < out.size(); ++f) {
    S acc = zero;
    for (int a = 0; a < n; ++a) acc += x[a] * w[a * stride + f];
    out[f] = acc;
  }
  return out;
}

/// 1-form (or vector) from frame components.
inline Tensor<double> frame_one_form(const Eigen::VectorXd& v) {
  Tensor<double> t(static_cast<int>(v.size()), {Slot::Co}, 0.0);
  for (int i = 0; i < v.size(); ++i) t[i] = v(i);
  return t;
}

inline Eigen::VectorXd as_vector(const Tensor<double>& t) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) v(static_cast<Eigen::Index>(i)) = t[i];
  return v;
}

inline Tensor<double> frame_two_form(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  Tensor<double> t(n, {Slot::Co, Slot::Co}, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = m(i, j);
  return t;
}

inline Eigen::MatrixXd as_matrix(const Tensor<double>& t) {
  const int n = t.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = t(i, j);
  return m;
}

/// Euclidean norm of the component array (frame components).
inline double tensor_norm(const Tensor<double>& t) {
  double s = 0.0;
  for (double v : t.data()) s += v * v;
  return std::sqrt(s);
}

/// |w|_form = |w|_tensor / sqrt(p!)
inline double form_norm(const Tensor<double>& t) { return tensor_norm(t) / std::sqrt(detail::factorial(t.rank())); }

/// A 2-form together with its skew-symmetric endomorphism, U_X = u(X, .)^#.
/// Both are frame components.
class TwoFormAsEndo {
 public:
  TwoFormAsEndo() = default;
  static TwoFormAsEndo from_form(const Eigen::MatrixXd& u) { return TwoFormAsEndo(u); }
  static TwoFormAsEndo from_endomorphism(const Eigen::MatrixXd& endo) { return TwoFormAsEndo(endo.transpose()); }

  const Eigen::MatrixXd& form() const { return form_; }
  Eigen::MatrixXd endo() const { return form_.transpose(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return form_.transpose() * x; }

  /// |u|^2 with the form normalization 1/2 <u(e_i), u(e_i)>.
  double form_norm_sq() const { return 0.5 * form_.squaredNorm(); }
  /// <u, u> as a tensor; equals -tr(U^2) for skew U.
  double tensor_norm_sq() const { return form_.squaredNorm(); }

  /// 1/2 sum_i e_i ^ u(e_i), which reproduces the form.
  Eigen::MatrixXd reconstructed_form() const {
    const int n = static_cast<int>(form_.rows());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd ui = apply(Eigen::VectorXd::Unit(n, i));
      out += 0.5 * (Eigen::VectorXd::Unit(n, i) * ui.transpose() - ui * Eigen::VectorXd::Unit(n, i).transpose());
    }
    return out;
  }

 private:
  explicit TwoFormAsEndo(Eigen::MatrixXd form) : form_(std::move(form)) {}
  Eigen::MatrixXd form_;
};

// ---- Jet-level field operators -------------------------------------------

/// Evaluate a tensor field at the geometry's expansion point, checking valence.
Tensor<Jet> evaluate(const TensorField& field, const PointGeometry& geometry);
Tensor<Jet> evaluate(const VectorField& field, const PointGeometry& geometry);
Jet evaluate(const ScalarField& field, const PointGeometry& geometry);

/// (nabla T)_{k, ...} = d_k T + Christoffel corrections per slot; new slot first.
Tensor<Jet> covariant_derivative(const PointGeometry& geometry, const Tensor<Jet>& t);
/// nabla^2 T with the two derivative slots first: (nabla^2 T)(X, Y, ...) = nabla^2_{X,Y} T.
Tensor<Jet> second_covariant_derivative(const PointGeometry& geometry, const Tensor<Jet>& t);
/// Exterior derivative of a form; metric independent.
Tensor<Jet> exterior_derivative(const Tensor<Jet>& form);
/// Codifferential -g^{ab} (nabla_a w)_{b...}.
Tensor<Jet> codifferential(const PointGeometry& geometry, const Tensor<Jet>& form);
/// Differential of a scalar jet.
Tensor<Jet> differential(const Jet& f);
/// Lower / raise the single index of a vector or 1-form.
Tensor<Jet> flat(const PointGeometry& geometry, const Tensor<Jet>& vector);
Tensor<Jet> sharp(const PointGeometry& geometry, const Tensor<Jet>& one_form);
/// Full contraction of two same-shaped covariant tensors with g^-1 on every slot, divided by `divisor`.
Jet metric_inner(const PointGeometry& geometry, const Tensor<Jet>& a, const Tensor<Jet>& b, double divisor = 1.0);

// ---- Point-valued operators -----------------------------------------------

/// d w at the point, coordinate components.
Tensor<double> exterior_derivative(const PointGeometry& geometry, const TensorField& form);
/// delta w at the point, coordinate components.
Tensor<double> codifferential(const PointGeometry& geometry, const TensorField& form);
/// nabla_X T at the point for X in coordinate components.
Tensor<double> covariant_derivative(const PointGeometry& geometry, const TensorField& field,
                                    std::span<const double> x);
/// nabla^2_{X,Y} T at the point.
Tensor<double> second_covariant_derivative(const PointGeometry& geometry, const TensorField& field,
                                           std::span<const double> x, std::span<const double> y);

struct OneFormLaplacians {
  Tensor<double> rough;  ///< nabla* nabla w = -sum_i nabla^2_{e_i, e_i} w
  Tensor<double> hodge;  ///< d delta w + delta d w
};

/// Both Laplacians of a 1-form jet at the point (coordinate components).
/// The 1-form must carry order 3 so that second derivatives are available.
OneFormLaplacians laplacians_on_1forms(const PointGeometry& geometry, const Tensor<Jet>& one_form);
OneFormLaplacians laplacians_on_1forms(const PointGeometry& geometry, const TensorField& one_form);

}  // namespace twistorlab
