#include "twistorlab/geometry.hpp"

#include <cmath>
#include <sstream>

#include "twistorlab/errors.hpp"

namespace twistorlab {

namespace {

Eigen::MatrixXd value_matrix(const Tensor<Jet>& t) {
  const int n = t.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = t(i, j).value();
  return m;
}

void check_metric(const Tensor<Jet>& g, std::span<const double> point) {
  const int n = g.dim();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (g(i, j).value() != g(j, i).value()) throw SingularMetricError("metric is not symmetric");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(value_matrix(g));
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "metric is not positive definite at (";
    for (std::size_t i = 0; i < point.size(); ++i) msg << (i ? ", " : "") << point[i];
    msg << ")";
    throw SingularMetricError(msg.str());
  }
}

FramePoint build_frame(std::span<const double> point, const Tensor<Jet>& g, const Tensor<Jet>& ginv,
                       const Tensor<Jet>& gamma) {
  FramePoint fp;
  const int n = g.dim();
  fp.point.assign(point.begin(), point.end());
  fp.metric = value_matrix(g);
  fp.inverse_metric = value_matrix(ginv);
  fp.christoffel = values(gamma);

  // Modified Gram-Schmidt on d_1, ..., d_n in axis order.
  const Eigen::MatrixXd& G = fp.metric;
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(n, n);
  for (int a = 0; a < n; ++a) {
    Eigen::VectorXd v = E.col(a);
    for (int b = 0; b < a; ++b) v -= (E.col(b).dot(G * v)) * E.col(b);
    const double norm2 = v.dot(G * v);
    if (!(norm2 > 0.0)) throw SingularMetricError("degenerate coordinate direction in Gram-Schmidt");
    E.col(a) = v / std::sqrt(norm2);
  }
  fp.frame = E;
  fp.coframe = E.transpose() * G;
  return fp;
}

}  // namespace

double FramePoint::orthonormality_defect() const {
  const Eigen::MatrixXd gram = frame.transpose() * metric * frame;
  return (gram - Eigen::MatrixXd::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

Tensor<Jet> invert_metric(const Tensor<Jet>& g) {
  const int n = g.dim();
  const Jet zero = Jet::constant(g[0].dim(), g[0].order(), 0.0);
  // Gauss-Jordan without pivoting; pivots stay positive for SPD input.
  std::vector<Jet> a(g.data().begin(), g.data().end());
  Tensor<Jet> inv(n, {Slot::Contra, Slot::Contra}, zero);
  for (int i = 0; i < n; ++i) inv(i, i) = zero + 1.0;
  for (int col = 0; col < n; ++col) {
    if (!(a[col * n + col].value() > 0.0)) throw SingularMetricError("non-positive pivot inverting metric");
    const Jet pivot_inv = 1.0 / a[col * n + col];
    for (int j = 0; j < n; ++j) {
      a[col * n + j] *= pivot_inv;
      inv(col, j) *= pivot_inv;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const Jet factor = a[row * n + col];
      if (factor.value() == 0.0 && factor.order() > 0) {
        bool all_zero = true;
        for (int m = 0; m < factor.size() && all_zero; ++m) all_zero = factor.coefficient(m) == 0.0;
        if (all_zero) continue;
      }
      for (int j = 0; j < n; ++j) {
        a[row * n + j] -= factor * a[col * n + j];
        inv(row, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

PointGeometry::PointGeometry(const MetricField& metric, std::span<const double> point, int order)
    : dim_(metric.dim()), order_(order), point_(point.begin(), point.end()) {
  if (order < 1 || order > kMaxJetOrder) throw OrderError("geometry order must be in [1, 3]");
  metric.domain.require_contains(point);
  coords_ = coordinate_jets(point, order);
  g_ = metric.eval(coords_);
  if (g_.dim() != dim_ || g_.rank() != 2) throw ValenceError("metric evaluator returned a wrong shape");
  check_metric(g_, point);
  ginv_ = invert_metric(g_);

  const int n = dim_;
  const Jet z1 = zero(order - 1);
  // dg(l, i, j) = d_l g_ij
  Tensor<Jet> dg(n, {Slot::Co, Slot::Co, Slot::Co}, z1);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        dg(l, i, j) = g_(i, j).derivative(l);
        dg(l, j, i) = dg(l, i, j);
      }
  gamma_ = Tensor<Jet>(n, {Slot::Contra, Slot::Co, Slot::Co}, z1);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // first kind: [ij, l] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
      std::vector<Jet> first(n, z1);
      for (int l = 0; l < n; ++l) first[l] = 0.5 * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
      for (int k = 0; k < n; ++k) {
        Jet s = z1;
        for (int l = 0; l < n; ++l) s += ginv_(k, l) * first[l];
        gamma_(k, i, j) = s;
        gamma_(k, j, i) = s;
      }
    }
  }

  if (order >= 2) {
    const Jet z2 = zero(order - 2);
    // dgamma(m, l, j, k) = d_m Gamma^l_jk
    Tensor<Jet> dgamma(n, {Slot::Co, Slot::Contra, Slot::Co, Slot::Co}, z2);
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k)
          for (int m = 0; m < n; ++m) {
            dgamma(m, l, j, k) = gamma_(l, j, k).derivative(m);
            dgamma(m, l, k, j) = dgamma(m, l, j, k);
          }
    riemann_ = Tensor<Jet>(n, {Slot::Contra, Slot::Co, Slot::Co, Slot::Co}, z2);
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) {
            Jet r = dgamma(i, l, j, k) - dgamma(j, l, i, k);
            for (int m = 0; m < n; ++m) {
              r += gamma_(l, i, m) * gamma_(m, j, k) - gamma_(l, j, m) * gamma_(m, i, k);
            }
            riemann_(l, k, i, j) = r;
            riemann_(l, k, j, i) = -r;
          }
    ricci_ = Tensor<Jet>(n, {Slot::Co, Slot::Co}, z2);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Jet s = z2;
        for (int i = 0; i < n; ++i) s += riemann_(i, k, i, j);
        ricci_(j, k) = s;
      }
  }
  frame_ = build_frame(point, g_, ginv_, gamma_);
}

const Tensor<Jet>& PointGeometry::riemann() const {
  if (order_ < 2) throw OrderError("curvature needs a geometry of order >= 2");
  return riemann_;
}

const Tensor<Jet>& PointGeometry::ricci() const {
  if (order_ < 2) throw OrderError("curvature needs a geometry of order >= 2");
  return ricci_;
}

Tensor<double> to_frame(const FramePoint& frame, const Tensor<double>& t) {
  const int n = t.dim();
  Tensor<double> cur = t;
  std::vector<int> idx(t.rank());
  for (int k = 0; k < t.rank(); ++k) {
    // new[a] = sum_i M(a, i) old[i]
    const Eigen::MatrixXd M = t.slot(k) == Slot::Co ? Eigen::MatrixXd(frame.frame.transpose()) : frame.coframe;
    Tensor<double> next(n, cur.slots(), 0.0);
    const std::size_t stride = cur.stride(k);
    for (std::size_t f = 0; f < cur.size(); ++f) {
      cur.unflat(f, idx);
      const int a = idx[k];
      const std::size_t base = f - static_cast<std::size_t>(a) * stride;
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += M(a, i) * cur[base + i * stride];
      next[f] = s;
    }
    cur = std::move(next);
  }
  return cur;
}

FrameCurvature::FrameCurvature(const PointGeometry& geometry) : dim_(geometry.dim()) {
  const int n = dim_;
  const Tensor<double> rf = to_frame(geometry.frame(), values(geometry.riemann()));
  r_.assign(n * n, Eigen::MatrixXd::Zero(n, n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) r_[a * n + b](d, c) = rf(d, c, a, b);
  const Tensor<double> ric = to_frame(geometry.frame(), values(geometry.ricci()));
  ricci_.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) ricci_(a, b) = ric(a, b);
}

Eigen::MatrixXd FrameCurvature::endo(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int a = 0; a < dim_; ++a) {
    if (x(a) == 0.0) continue;
    for (int b = 0; b < dim_; ++b) {
      if (y(b) == 0.0) continue;
      out += x(a) * y(b) * r_[a * dim_ + b];
    }
  }
  return out;
}

double FrameCurvature::sectional(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  const double num = x.dot(endo(x, y) * y);
  const double den = x.squaredNorm() * y.squaredNorm() - std::pow(x.dot(y), 2);
  return num / den;
}

Eigen::MatrixXd FrameCurvature::action_of(const Eigen::MatrixXd& omega) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    out += 0.5 * endo(Eigen::VectorXd::Unit(dim_, j), omega.col(j));
  }
  return out;
}

Tensor<double> christoffel(const MetricField& metric, std::span<const double> point) {
  return PointGeometry(metric, point, 1).frame().christoffel;
}

Tensor<double> riemann(const MetricField& metric, std::span<const double> point) {
  return values(PointGeometry(metric, point, 2).riemann());
}

RicciAtPoint ricci(const MetricField& metric, std::span<const double> point) {
  const PointGeometry geo(metric, point, 2);
  const Tensor<double> ric = values(geo.ricci());
  const int n = geo.dim();
  RicciAtPoint out;
  out.form.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.form(i, j) = ric(i, j);
  out.endo = geo.frame().inverse_metric * out.form;
  return out;
}

FramePoint orthonormal_frame(const MetricField& metric, std::span<const double> point) {
  return PointGeometry(metric, point, 1).frame();
}

}  // namespace twistorlab
