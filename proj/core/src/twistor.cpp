#include "twistorlab/twistor.hpp"

#include <cmath>

#include "twistorlab/errors.hpp"

namespace twistorlab {

namespace {

Eigen::VectorXd frame_vector(const PointGeometry& geo, const Tensor<double>& t) { return as_vector(to_frame(geo.frame(), t)); }

Eigen::MatrixXd frame_matrix(const PointGeometry& geo, const Tensor<double>& t) { return as_matrix(to_frame(geo.frame(), t)); }

// (x ^ y)_{bc} = x_b y_c - x_c y_b
Eigen::MatrixXd wedge_vectors(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return x * y.transpose() - y * x.transpose();
}

// Block (a, .) of a rank-3 frame tensor as a matrix over the last two slots.
Eigen::MatrixXd slice(const Tensor<double>& t, int a) {
  const int n = t.dim();
  Eigen::MatrixXd m(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) m(b, c) = t(a, b, c);
  return m;
}

}  // namespace

double KillingPoint::nabla_u_norm() const {
  double s = 0.0;
  for (const auto& m : nabla_u) s += m.squaredNorm();
  return std::sqrt(s);
}

KillingPoint evaluate_killing_point(const MetricField& metric, const VectorField& field, std::span<const double> point) {
  KillingPoint kp;
  kp.geometry = PointGeometry(metric, point, 3);
  const PointGeometry& geo = kp.geometry;
  const int n = geo.dim();
  kp.n = n;
  kp.point.assign(point.begin(), point.end());
  kp.curvature = FrameCurvature(geo);

  const Tensor<Jet> xi = evaluate(field, geo);
  const Tensor<Jet> xi_flat = flat(geo, xi);
  kp.xi = frame_vector(geo, values(xi));
  kp.xi_norm = kp.xi.norm();

  const Tensor<Jet> nabla_xi = covariant_derivative(geo, xi);
  kp.nabla_xi = frame_matrix(geo, values(nabla_xi));
  kp.hess_xi = to_frame(geo.frame(), values(covariant_derivative(geo, nabla_xi)));

  Tensor<Jet> u = exterior_derivative(xi_flat);
  for (std::size_t f = 0; f < u.size(); ++f) u[f] *= 0.5;
  kp.u = TwoFormAsEndo::from_form(frame_matrix(geo, values(u)));
  kp.du = to_frame(geo.frame(), values(exterior_derivative(u)));

  const Tensor<Jet> nabla_u = covariant_derivative(geo, u);
  const Tensor<double> nabla_u_frame = to_frame(geo.frame(), values(nabla_u));
  kp.nabla_u.resize(n);
  for (int a = 0; a < n; ++a) kp.nabla_u[a] = slice(nabla_u_frame, a);
  kp.nabla2_u = to_frame(geo.frame(), values(covariant_derivative(geo, nabla_u)));

  const Tensor<Jet> delta_u = codifferential(geo, u);
  kp.delta_u = frame_vector(geo, values(delta_u));

  // |xi|^2 and f = <delta u, xi> / ((1 - n) |xi|^2) as jets.
  Jet lambda = xi_flat[0] * xi[0];
  for (int i = 1; i < n; ++i) lambda += xi_flat[i] * xi[i];
  kp.d_xi_norm_sq = frame_vector(geo, values(differential(lambda)));
  if (lambda.value() > 0.0) {
    Jet num = delta_u[0] * xi[0];
    for (int i = 1; i < n; ++i) num += delta_u[i] * xi[i];
    const Jet f = num / ((1.0 - n) * lambda);
    kp.f_delta = f.value();
    kp.df = frame_vector(geo, values(differential(f)));
  } else {
    kp.f_delta = NAN;
    kp.df = Eigen::VectorXd::Constant(n, NAN);
  }

  // Least-squares f from nabla_{e_a} u = f e_a ^ xi.
  double num = 0.0, den = 0.0;
  std::vector<Eigen::MatrixXd> w(n);
  for (int a = 0; a < n; ++a) {
    w[a] = wedge_vectors(Eigen::VectorXd::Unit(n, a), kp.xi);
    num += (kp.nabla_u[a].array() * w[a].array()).sum();
    den += w[a].squaredNorm();
  }
  kp.f_fit = den > 0.0 ? num / den : NAN;
  double res = 0.0, scale = 0.0;
  for (int a = 0; a < n; ++a) {
    res += (kp.nabla_u[a] - kp.f_fit * w[a]).squaredNorm();
    scale += std::pow(kp.nabla_u[a].norm() + std::abs(kp.f_fit) * w[a].norm(), 2);
  }
  kp.f_fit_residual = normalized(std::sqrt(res), std::sqrt(scale));

  const Jet u_norm_sq = metric_inner(geo, u, u, 2.0);
  kp.u_norm_sq = u_norm_sq.value();
  kp.d_u_norm_sq = frame_vector(geo, values(differential(u_norm_sq)));

  const Tensor<Jet> nabla_dlambda = covariant_derivative(geo, differential(lambda));
  kp.nabla2_dlambda = to_frame(geo.frame(), values(covariant_derivative(geo, nabla_dlambda)));

  const OneFormLaplacians lap = laplacians_on_1forms(geo, xi_flat);
  kp.rough_laplacian = frame_vector(geo, lap.rough);
  kp.hodge_laplacian = frame_vector(geo, lap.hodge);
  return kp;
}

double twistor_residual(const PointGeometry& geo, const Tensor<Jet>& form) {
  detail::require_form(form, "twistor residual");
  const int n = geo.dim();
  const int p = form.rank();
  if (p < 1 || p > n - 1) throw ValenceError("twistor residual needs 1 <= p <= n - 1");
  const Tensor<double> nabla = to_frame(geo.frame(), values(covariant_derivative(geo, form)));
  const Tensor<double> d = to_frame(geo.frame(), values(exterior_derivative(form)));
  const Tensor<double> delta = to_frame(geo.frame(), values(codifferential(geo, form)));
  const std::size_t block = nabla.size() / n;
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < n; ++a) {
    const Eigen::VectorXd x = Eigen::VectorXd::Unit(n, a);
    const Tensor<double> t2 = interior(x, d);
    const Tensor<double> t3 = wedge(frame_one_form(x), delta);
    double r2 = 0.0, lhs = 0.0;
    for (std::size_t f = 0; f < block; ++f) {
      const double l = nabla[a * block + f];
      const double r = l - t2[f] / (p + 1) + t3[f] / (n - p + 1);
      r2 += r * r;
      lhs += l * l;
    }
    worst = std::max(worst, std::sqrt(r2));
    scale = std::max(scale, std::sqrt(lhs) + tensor_norm(t2) / (p + 1) + tensor_norm(t3) / (n - p + 1));
  }
  return normalized(worst, scale);
}

double twistor_residual(const KillingPoint& kp) {
  const int n = kp.n;
  const Tensor<double> delta = frame_one_form(kp.delta_u);
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < n; ++a) {
    const Eigen::VectorXd x = Eigen::VectorXd::Unit(n, a);
    const Eigen::MatrixXd t2 = as_matrix(interior(x, kp.du)) / 3.0;
    const Eigen::MatrixXd t3 = as_matrix(wedge(frame_one_form(x), delta)) / (n - 1.0);
    worst = std::max(worst, (kp.nabla_u[a] - t2 + t3).norm());
    scale = std::max(scale, kp.nabla_u[a].norm() + t2.norm() + t3.norm());
  }
  return normalized(worst, scale);
}

double twistor_residual(const PointGeometry& geo, const TensorField& form) {
  return twistor_residual(geo, evaluate(form, geo));
}

double killing_residual(const PointGeometry& geo, const VectorField& field) {
  const Tensor<Jet> xi = evaluate(field, geo);
  const Eigen::MatrixXd nxi = frame_matrix(geo, values(covariant_derivative(geo, xi)));
  return normalized((0.5 * (nxi + nxi.transpose())).norm(), nxi.norm());
}

double killing_residual(const KillingPoint& kp) {
  const Eigen::MatrixXd& nxi = kp.nabla_xi;
  return normalized((0.5 * (nxi + nxi.transpose())).norm(), nxi.norm());
}

double nabla_xi_is_u_residual(const KillingPoint& kp) {
  // Row a of the form matrix is U(e_a).
  return normalized((kp.nabla_xi - kp.u.form()).norm(), kp.nabla_xi.norm() + kp.u.form().norm());
}

SasakianResidual sasakian_residual(const KillingPoint& kp, double k) {
  if (!(k > 0.0)) throw ParameterError("sasakian residual needs k > 0");
  const int n = kp.n;
  SasakianResidual out;
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < n; ++a) {
    const Eigen::MatrixXd target = k * wedge_vectors(kp.xi, Eigen::VectorXd::Unit(n, a));
    worst = std::max(worst, (kp.nabla_u[a] - target).norm());
    scale = std::max(scale, kp.nabla_u[a].norm() + target.norm());
  }
  out.form = normalized(worst, scale);
  worst = scale = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Eigen::VectorXd h(n), target = -(a == b ? 1.0 : 0.0) * k * kp.xi;
      target(a) += k * kp.xi(b);
      for (int c = 0; c < n; ++c) h(c) = kp.hess_xi(a, b, c);
      worst = std::max(worst, (h - target).norm());
      scale = std::max(scale, h.norm() + target.norm());
    }
  out.second_derivative = normalized(worst, scale);
  return out;
}

double kostant_residual(const KillingPoint& kp) {
  const int n = kp.n;
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < n; ++a) {
    const Eigen::MatrixXd r = kp.curvature.endo(Eigen::VectorXd::Unit(n, a), kp.xi);
    for (int b = 0; b < n; ++b) {
      Eigen::VectorXd h(n);
      for (int c = 0; c < n; ++c) h(c) = kp.hess_xi(a, b, c);
      const Eigen::VectorXd rhs = r.col(b);
      worst = std::max(worst, (h - rhs).norm());
      scale = std::max(scale, h.norm() + rhs.norm());
    }
  }
  return normalized(worst, scale);
}

double killing_weitzenboeck_residual(const KillingPoint& kp) {
  return normalized((kp.rough_laplacian - 0.5 * kp.hodge_laplacian).norm(),
                    kp.rough_laplacian.norm() + 0.5 * kp.hodge_laplacian.norm());
}

double bochner_residual(const KillingPoint& kp) {
  const Eigen::VectorXd ric = kp.curvature.ricci() * kp.xi;
  return normalized((kp.hodge_laplacian - kp.rough_laplacian - ric).norm(),
                    kp.hodge_laplacian.norm() + kp.rough_laplacian.norm() + ric.norm());
}

Eigen::MatrixXd random_skew(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = normal(rng);
      m(j, i) = -m(i, j);
    }
  return m;
}

void require_closed_twistor(const KillingPoint& kp, double tolerance) {
  if (kp.n <= 3) throw NotApplicableError("curvature identities assume dimension n > 3");
  const double du = normalized(tensor_norm(kp.du), kp.nabla_u_norm());
  if (du > tolerance) throw NotApplicableError("u is not closed at this point");
  if (kp.f_fit_residual > tolerance) throw NotApplicableError("u is not a twistor form at this point");
}

double curvature_commutator_identity(const FrameCurvature& curvature, const TwoFormAsEndo& u,
                                     const Eigen::MatrixXd& omega) {
  const int n = curvature.dim();
  const Eigen::MatrixXd U = u.endo();
  const Eigen::MatrixXd r_omega = curvature.action_of(omega);
  const Eigen::MatrixXd r_u = curvature.action_of(U);
  const Eigen::MatrixXd& ric = curvature.ricci();
  const Eigen::MatrixXd lhs = (n - 2.0) * (r_omega * U - U * r_omega);
  const Eigen::MatrixXd t1 = r_u * omega - omega * r_u;
  const Eigen::MatrixXd t2 = U * ric * omega - omega * ric * U;
  return normalized((lhs - t1 - t2).norm(), lhs.norm() + t1.norm() + t2.norm());
}

double self_commutator_residual(const FrameCurvature& curvature, const TwoFormAsEndo& u) {
  const Eigen::MatrixXd U = u.endo();
  const Eigen::MatrixXd r_u = curvature.action_of(U);
  return normalized((r_u * U - U * r_u).norm(), 2.0 * (r_u * U).norm());
}

double ricci_commutation(const FrameCurvature& curvature, const TwoFormAsEndo& u) {
  const Eigen::MatrixXd U2 = u.endo() * u.endo();
  const Eigen::MatrixXd& ric = curvature.ricci();
  return normalized((U2 * ric - ric * U2).norm(), 2.0 * U2.norm() * ric.norm());
}

double curvature_action_consistency(const FrameCurvature& curvature, const TwoFormAsEndo& u,
                                    const Eigen::MatrixXd& omega) {
  const int n = curvature.dim();
  const Eigen::MatrixXd U = u.endo();
  const Eigen::MatrixXd r_omega = curvature.action_of(omega);
  Eigen::MatrixXd as_form = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    as_form += wedge_vectors(r_omega.col(k), U.col(k));
  }
  const Eigen::MatrixXd as_endo = TwoFormAsEndo::from_endomorphism(r_omega * U - U * r_omega).form();
  return normalized((as_form - as_endo).norm(), as_form.norm() + as_endo.norm());
}

namespace {

// Returns (lhs, rhs) of the second derivative identity for X = e_a, Y = e_b.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> second_derivative_terms(const KillingPoint& kp, int a, int b) {
  const int n = kp.n;
  if (n <= 2) throw NotApplicableError("second derivative identity needs n > 2");
  const Eigen::MatrixXd& u = kp.u.form();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    // Derivation action of a skew endomorphism R on the 2-form u: R u - u R.
    const Eigen::MatrixXd& r = kp.curvature(a, j);
    const Eigen::MatrixXd ru = r * u - u * r;
    alpha += ru.row(j).transpose();
  }
  Eigen::MatrixXd lhs(n, n);
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) lhs(c, d) = kp.nabla2_u(a, b, c, d);
  const Eigen::MatrixXd rhs = wedge_vectors(Eigen::VectorXd::Unit(n, b), alpha) / (n - 2.0);
  return {lhs, rhs};
}

}  // namespace

double second_derivative_identity(const KillingPoint& kp, int a, int b) {
  const auto [lhs, rhs] = second_derivative_terms(kp, a, b);
  return normalized((lhs - rhs).norm(), lhs.norm() + rhs.norm());
}

double second_derivative_identity(const KillingPoint& kp) {
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < kp.n; ++a)
    for (int b = 0; b < kp.n; ++b) {
      const auto [lhs, rhs] = second_derivative_terms(kp, a, b);
      worst = std::max(worst, (lhs - rhs).norm());
      scale = std::max(scale, lhs.norm() + rhs.norm());
    }
  return normalized(worst, scale);
}

}  // namespace twistorlab
