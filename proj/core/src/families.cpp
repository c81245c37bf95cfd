#include "twistorlab/families.hpp"

#include <cmath>
#include <cctype>
#include <numbers>
#include <sstream>

#include "twistorlab/errors.hpp"
#include "twistorlab/geometry.hpp"

namespace twistorlab {

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::RoundSphere: return "round_sphere";
    case FamilyKind::SasakianSphere: return "sasakian_sphere";
    case FamilyKind::WarpedMappingTorus: return "warped_mapping_torus";
    case FamilyKind::RiemannianJoin: return "riemannian_join";
    case FamilyKind::GcvfFactor: return "gcvf_factor";
    case FamilyKind::Flat: return "flat";
  }
  return "?";
}

FamilyKind family_kind_from_string(const std::string& tag) {
  for (FamilyKind k : {FamilyKind::RoundSphere, FamilyKind::SasakianSphere, FamilyKind::WarpedMappingTorus,
                       FamilyKind::RiemannianJoin, FamilyKind::GcvfFactor, FamilyKind::Flat}) {
    if (tag == to_string(k)) return k;
  }
  throw ParameterError("unknown family kind '" + tag + "'");
}

ProfileFunction make_profile(const ProfileSpec& spec, double l) {
  if (spec.kind == "sin") return ProfileFunction::sine();
  if (spec.kind == "cos") return ProfileFunction::cosine();
  if (spec.kind == "polynomial") return ProfileFunction::polynomial(spec.coeffs);
  if (spec.kind == "perturbed_sin") return ProfileFunction::perturbed_sine(spec.epsilon);
  if (spec.kind == "tabulated") return ProfileFunction::tabulated(0.0, l, spec.values);
  throw ParameterError("unknown profile kind '" + spec.kind + "'");
}

namespace {

constexpr double kPi = std::numbers::pi;

// One factor sin(w q) or cos(w q) of an embedding coordinate.
struct Factor {
  int axis;
  bool sine;
  double w;
};

// scale * prod factors; every axis appears at most once.
struct Monomial {
  double scale;
  std::vector<Factor> factors;
};

using Embedding = std::vector<Monomial>;

struct Generator {
  int a;
  int b;
  double weight;
};

Jet factor_value(const Factor& f, const Jet& q) {
  const Jet arg = q * f.w;
  return f.sine ? sin(arg) : cos(arg);
}

Jet factor_slope(const Factor& f, const Jet& q) {
  const Jet arg = q * f.w;
  return f.sine ? f.w * cos(arg) : -f.w * sin(arg);
}

// Vector field of the rotation sum_g w (x_a e_b - x_b e_a) pulled back through the embedding.
// The Jacobian is differentiated analytically so the field keeps the coordinate order.
VectorField embedded_rotation(std::string label, Embedding emb, std::vector<Generator> gens, MetricFn metric) {
  return VectorField{std::move(label), [emb = std::move(emb), gens = std::move(gens), metric](std::span<const Jet> q) {
    const int n = static_cast<int>(q.size());
    const int order = q[0].order();
    const Jet zero = Jet::constant(n, order, 0.0);
    const int dim = static_cast<int>(emb.size());
    std::vector<Jet> x(dim, zero);
    std::vector<Jet> jac(dim * n, zero);  // jac[k * n + j] = d x_k / d q_j
    for (int k = 0; k < dim; ++k) {
      const Monomial& m = emb[k];
      std::vector<Jet> vals;
      vals.reserve(m.factors.size());
      for (const Factor& f : m.factors) vals.push_back(factor_value(f, q[f.axis]));
      Jet prod = zero + m.scale;
      for (const Jet& v : vals) prod *= v;
      x[k] = prod;
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        Jet d = zero + m.scale;
        for (std::size_t j = 0; j < m.factors.size(); ++j) {
          d *= i == j ? factor_slope(m.factors[j], q[m.factors[j].axis]) : vals[j];
        }
        jac[k * n + m.factors[i].axis] = d;
      }
    }
    std::vector<Jet> v(dim, zero);
    for (const Generator& g : gens) {
      v[g.b] += g.weight * x[g.a];
      v[g.a] -= g.weight * x[g.b];
    }
    std::vector<Jet> covec(n, zero);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < dim; ++k) covec[j] += jac[k * n + j] * v[k];
    const Tensor<Jet> ginv = invert_metric(metric(q));
    Tensor<Jet> out(n, {Slot::Contra}, zero);
    for (int i = 0; i < n; ++i) {
      Jet acc = zero;
      for (int j = 0; j < n; ++j) acc += ginv(i, j) * covec[j];
      out[i] = acc;
    }
    return out;
  }};
}

// Constant-coefficient field sum_i w_i d_i.
VectorField coordinate_field(std::string label, std::vector<double> weights) {
  return VectorField{std::move(label), [weights = std::move(weights)](std::span<const Jet> q) {
    const int n = static_cast<int>(q.size());
    Tensor<Jet> out(n, {Slot::Contra}, Jet::constant(n, q[0].order(), 0.0));
    for (int i = 0; i < n; ++i) out[i] += weights[i];
    return out;
  }};
}

// Axes of a nested polar chart on S^m: m-1 polar angles and one periodic angle.
std::vector<Axis> sphere_axes(int m, const std::string& prefix) {
  std::vector<Axis> axes;
  for (int i = 1; i < m; ++i) axes.push_back(ChartDomain::bounded(prefix + "phi" + std::to_string(i), 0.0, kPi));
  axes.push_back(ChartDomain::angle(prefix + "theta"));
  return axes;
}

// Diagonal of the round metric on S^m in nested polar coordinates.
std::vector<Jet> sphere_factors(std::span<const Jet> angles) {
  std::vector<Jet> h;
  h.reserve(angles.size());
  Jet acc = Jet::constant(angles[0].dim(), angles[0].order(), 1.0);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    h.push_back(acc);
    acc *= square(sin(angles[i]));
  }
  return h;
}

// x_0 = R cos(r/R), x_j = R sin(r/R) omega_j(angles) for the polar chart with r on axis 0.
Embedding round_embedding(int n, double radius) {
  Embedding emb;
  emb.push_back(Monomial{radius, {Factor{0, false, 1.0 / radius}}});
  for (int j = 1; j <= n; ++j) {
    Monomial m{radius, {Factor{0, true, 1.0 / radius}}};
    for (int i = 1; i < j && i < n; ++i) m.factors.push_back(Factor{i, true, 1.0});
    if (j < n) m.factors.push_back(Factor{j, false, 1.0});
    emb.push_back(m);
  }
  return emb;
}

int check_dim(int n, int lo, const char* what) {
  if (n < lo || n > kMaxJetDim) {
    std::ostringstream msg;
    msg << what << ": dimension " << n << " outside [" << lo << ", " << kMaxJetDim << "]";
    throw ParameterError(msg.str());
  }
  return n;
}

std::vector<Generator> parse_generator(const std::string& xi, int ambient) {
  if (xi.size() == 3 && xi[0] == 'L' && std::isdigit(xi[1]) && std::isdigit(xi[2])) {
    const int a = xi[1] - '0';
    const int b = xi[2] - '0';
    if (a != b && a < ambient && b < ambient) return {Generator{a, b, 1.0}};
  }
  throw ParameterError("unknown Killing field selector '" + xi + "'");
}

std::vector<VectorField> all_rotations(const Embedding& emb, const MetricFn& metric) {
  std::vector<VectorField> out;
  const int dim = static_cast<int>(emb.size());
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b) {
      out.push_back(embedded_rotation("L" + std::to_string(a) + std::to_string(b), emb, {Generator{a, b, 1.0}}, metric));
    }
  return out;
}

void require_boundary(const BoundaryReport& r, const std::string& name) {
  if (r.verdict == Verdict::Pass) return;
  throw BoundaryConditionError(name + " boundary condition " + (r.verdict == Verdict::Fail ? "failed" : "inconclusive") + ": " + r.detail);
}

}  // namespace

FamilyInstance make_round_sphere(int n, double radius, const std::string& xi) {
  check_dim(n, 2, "round_sphere");
  if (!(radius > 0.0)) throw ParameterError("round_sphere: radius must be positive");
  std::vector<Axis> axes{ChartDomain::bounded("r", 0.0, kPi * radius)};
  for (Axis& a : sphere_axes(n - 1, "")) axes.push_back(a);

  FamilyInstance inst;
  inst.kind = FamilyKind::RoundSphere;
  std::ostringstream label;
  label << "round_sphere(n=" << n << ", radius=" << radius << ")";
  inst.label = label.str();
  MetricFn g = [radius](std::span<const Jet> q) {
    std::vector<Jet> diag{Jet::constant(q[0].dim(), q[0].order(), 1.0)};
    const Jet warp = square(radius * sin(q[0] / radius));
    for (const Jet& h : sphere_factors(q.subspan(1))) diag.push_back(warp * h);
    return diagonal_metric(diag);
  };
  inst.metric = MetricField{inst.label, ChartDomain(axes), g};
  const Embedding emb = round_embedding(n, radius);
  inst.killing = all_rotations(emb, g);
  if (xi.empty() || xi == "generic") {
    std::vector<Generator> gens{{0, 1, 1.0}, {1, 2, 0.7}};
    if (n >= 3) gens.push_back({2, 3, 0.4});
    inst.xi = embedded_rotation("L01+0.7L12+0.4L23", emb, gens, g);
  } else {
    inst.xi = embedded_rotation(xi, emb, parse_generator(xi, n + 1), g);
  }
  inst.constant_curvature = 1.0 / (radius * radius);
  return inst;
}

FamilyInstance make_sasakian_sphere(double k, const std::string& xi) {
  if (!(k > 0.0)) throw ParameterError("sasakian_sphere: k must be positive");
  const double r = 1.0 / std::sqrt(k);
  FamilyInstance inst;
  inst.kind = FamilyKind::SasakianSphere;
  std::ostringstream label;
  label << "sasakian_sphere(k=" << k << ")";
  inst.label = label.str();
  std::vector<Axis> axes{ChartDomain::bounded("eta", 0.0, kPi / 2), ChartDomain::angle("phi1"),
                         ChartDomain::angle("phi2")};
  MetricFn g = [r](std::span<const Jet> q) {
    const double r2 = r * r;
    const Jet one = Jet::constant(3, q[0].order(), r2);
    const std::vector<Jet> diag{one, r2 * square(sin(q[0])), r2 * square(cos(q[0]))};
    return diagonal_metric(diag);
  };
  inst.metric = MetricField{inst.label, ChartDomain(axes), g};
  const Embedding emb{Monomial{r, {Factor{0, true, 1.0}, Factor{1, false, 1.0}}},
                      Monomial{r, {Factor{0, true, 1.0}, Factor{1, true, 1.0}}},
                      Monomial{r, {Factor{0, false, 1.0}, Factor{2, false, 1.0}}},
                      Monomial{r, {Factor{0, false, 1.0}, Factor{2, true, 1.0}}}};
  inst.killing = all_rotations(emb, g);
  if (xi.empty() || xi == "hopf") {
    inst.xi = coordinate_field("hopf", {0.0, 1.0, 1.0});
    inst.sasaki_k = k;
  } else {
    inst.xi = embedded_rotation(xi, emb, parse_generator(xi, 4), g);
  }
  inst.constant_curvature = k;
  return inst;
}

FamilyInstance make_warped_mapping_torus(int n, double a) {
  check_dim(n, 3, "warped_mapping_torus");
  if (!(a > 1.0)) throw ParameterError("warped_mapping_torus: a must exceed 1 so that a + cos r > 0");
  FamilyInstance inst;
  inst.kind = FamilyKind::WarpedMappingTorus;
  std::ostringstream label;
  label << "warped_mapping_torus(n=" << n << ", a=" << a << ")";
  inst.label = label.str();

  std::vector<Axis> base_axes{ChartDomain::bounded("r", 0.0, kPi)};
  for (Axis& ax : sphere_axes(n - 2, "")) base_axes.push_back(ax);
  MetricFn base_g = [](std::span<const Jet> q) {
    std::vector<Jet> diag{Jet::constant(q[0].dim(), q[0].order(), 1.0)};
    const Jet warp = square(sin(q[0]));
    for (const Jet& h : sphere_factors(q.subspan(1))) diag.push_back(warp * h);
    return diagonal_metric(diag);
  };
  inst.base = MetricField{"base S^" + std::to_string(n - 1), ChartDomain(base_axes), base_g};
  inst.potential = ScalarField{"a + cos r", [a](std::span<const Jet> q) { return a + cos(q[0]); }};

  std::vector<Axis> axes{ChartDomain::angle("t", 1.0)};
  for (const Axis& ax : base_axes) axes.push_back(ax);
  MetricFn g = [a, base_g](std::span<const Jet> q) {
    const Tensor<Jet> gb = base_g(q.subspan(1));
    std::vector<Jet> diag{square(a + cos(q[1]))};
    for (int i = 0; i < gb.dim(); ++i) diag.push_back(gb(i, i));
    return diagonal_metric(diag);
  };
  inst.metric = MetricField{inst.label, ChartDomain(axes), g};
  std::vector<double> w(n, 0.0);
  w[0] = 1.0;
  inst.xi = coordinate_field("d_t", w);
  inst.killing = {inst.xi};
  inst.profile_axis = 1;
  inst.gamma = ProfileFunction::sine();
  inst.lambda = ProfileFunction::from_expression("a + cos", [a](const Jet& s) { return a + cos(s); });
  inst.l = kPi;
  inst.c = 1.0;
  return inst;
}

FamilyInstance make_gcvf_factor(int m, const ProfileFunction& gamma, double l, double c, bool check_boundary) {
  check_dim(m, 2, "gcvf_factor");
  if (!(l > 0.0)) throw ParameterError("gcvf_factor: l must be positive");
  if (!(c > 0.0)) throw ParameterError("gcvf_factor: c must be positive");
  FamilyInstance inst;
  inst.kind = FamilyKind::GcvfFactor;
  std::ostringstream label;
  label << "gcvf_factor(m=" << m << ", gamma=" << gamma.name() << ", l=" << l << ", c=" << c << ")";
  inst.label = label.str();
  if (check_boundary) {
    for (BoundaryEnd end : {BoundaryEnd::Origin, BoundaryEnd::Far}) {
      inst.boundary.push_back(smoothness_analyzer(gamma, l, c, end, BoundaryMode::Gcvf));
      require_boundary(inst.boundary.back(), to_string(end));
    }
  }
  std::vector<Axis> axes{ChartDomain::bounded("s", 0.0, l)};
  for (Axis& ax : sphere_axes(m - 1, "")) axes.push_back(ax);
  MetricFn g = [gamma](std::span<const Jet> q) {
    std::vector<Jet> diag{Jet::constant(q[0].dim(), q[0].order(), 1.0)};
    const Jet warp = square(gamma(q[0]));
    for (const Jet& h : sphere_factors(q.subspan(1))) diag.push_back(warp * h);
    return diagonal_metric(diag);
  };
  inst.metric = MetricField{inst.label, ChartDomain(axes), g};
  inst.base = inst.metric;
  inst.xi = VectorField{"c gamma d_s", [gamma, c](std::span<const Jet> q) {
                          const int n = static_cast<int>(q.size());
                          Tensor<Jet> out(n, {Slot::Contra}, Jet::constant(n, q[0].order(), 0.0));
                          out[0] = c * gamma(q[0]);
                          return out;
                        }};
  inst.xi_killing = false;
  const ProfileFunction primitive("primitive", [gamma, c](double s) {
    const std::array<double, 4> d = gamma.derivatives(s);
    return std::array<double, 4>{c * integrate_profile(gamma, 0.0, s), c * d[0], c * d[1], c * d[2]};
  });
  inst.potential = ScalarField{"c int_0^s gamma", [primitive](std::span<const Jet> q) { return primitive(q[0]); }};
  inst.profile_axis = 0;
  inst.gamma = gamma;
  inst.l = l;
  inst.c = c;
  return inst;
}

FamilyInstance make_riemannian_join(int n, const ProfileFunction& gamma, double l, double c) {
  check_dim(n, 3, "riemannian_join");
  if (!(l > 0.0)) throw ParameterError("riemannian_join: l must be positive");
  if (!(c > 0.0)) throw ParameterError("riemannian_join: c must be positive");
  FamilyInstance inst;
  inst.kind = FamilyKind::RiemannianJoin;
  std::ostringstream label;
  label << "riemannian_join(n=" << n << ", gamma=" << gamma.name() << ", l=" << l << ", c=" << c << ")";
  inst.label = label.str();
  for (BoundaryEnd end : {BoundaryEnd::Origin, BoundaryEnd::Far}) {
    inst.boundary.push_back(smoothness_analyzer(gamma, l, c, end, BoundaryMode::Join));
    require_boundary(inst.boundary.back(), to_string(end));
  }
  const ProfileFunction lambda = lambda_from_gamma(gamma, l, c);
  std::vector<Axis> axes{ChartDomain::bounded("s", 0.0, l)};
  for (Axis& ax : sphere_axes(n - 2, "")) axes.push_back(ax);
  axes.push_back(ChartDomain::angle("theta"));
  // The S^{n-2} chart ends in a periodic angle; rename it so the two circles differ.
  axes[n - 2].name = "psi";
  MetricFn g = [gamma, lambda, n](std::span<const Jet> q) {
    std::vector<Jet> diag{Jet::constant(q[0].dim(), q[0].order(), 1.0)};
    const Jet warp = square(gamma(q[0]));
    for (const Jet& h : sphere_factors(q.subspan(1, n - 2))) diag.push_back(warp * h);
    diag.push_back(square(lambda(q[0])));
    return diagonal_metric(diag);
  };
  inst.metric = MetricField{inst.label, ChartDomain(axes), g};
  std::vector<double> w(n, 0.0);
  w[n - 1] = 1.0;
  inst.xi = coordinate_field("d_theta", w);
  inst.killing = {inst.xi};
  inst.profile_axis = 0;
  inst.gamma = gamma;
  inst.lambda = lambda;
  inst.l = l;
  inst.c = c;
  return inst;
}

FamilyInstance make_flat(int n, const std::string& xi) {
  check_dim(n, 2, "flat");
  FamilyInstance inst;
  inst.kind = FamilyKind::Flat;
  inst.label = "flat(n=" + std::to_string(n) + ")";
  std::vector<Axis> axes;
  for (int i = 0; i < n; ++i) axes.push_back(ChartDomain::bounded("x" + std::to_string(i), 0.0, 1.0));
  inst.metric = MetricField{inst.label, ChartDomain(axes), [](std::span<const Jet> q) {
                              const int d = static_cast<int>(q.size());
                              std::vector<Jet> diag(d, Jet::constant(d, q[0].order(), 1.0));
                              return diagonal_metric(diag);
                            }};
  std::vector<double> w(n, 0.0);
  w[0] = 1.0;
  const VectorField translation = coordinate_field("translation", w);
  const VectorField rotation{"rotation", [](std::span<const Jet> q) {
                               const int d = static_cast<int>(q.size());
                               Tensor<Jet> out(d, {Slot::Contra}, Jet::constant(d, q[0].order(), 0.0));
                               out[0] = -q[1];
                               out[1] = q[0];
                               return out;
                             }};
  inst.killing = {translation, rotation};
  if (xi.empty() || xi == "translation") {
    inst.xi = translation;
  } else if (xi == "rotation") {
    inst.xi = rotation;
  } else {
    throw ParameterError("unknown flat field selector '" + xi + "'");
  }
  inst.constant_curvature = 0.0;
  return inst;
}

MetricField perturb_metric(const MetricField& metric, double amplitude) {
  std::ostringstream label;
  label << metric.label << " * (1 + " << amplitude << " sin q" << metric.dim() - 1 << ")";
  MetricFn base = metric.eval;
  return MetricField{label.str(), metric.domain, [base, amplitude](std::span<const Jet> q) {
                       Tensor<Jet> g = base(q);
                       const Jet factor = 1.0 + amplitude * sin(q[q.size() - 1]);
                       for (std::size_t f = 0; f < g.size(); ++f) g[f] *= factor;
                       return g;
                     }};
}

FamilyInstance build_family(const FamilySpec& spec) {
  FamilyInstance inst;
  switch (spec.kind) {
    case FamilyKind::RoundSphere:
      inst = make_round_sphere(spec.n, spec.radius, spec.xi);
      break;
    case FamilyKind::SasakianSphere:
      if (spec.n != 3) throw ParameterError("sasakian_sphere: only n = 3 is provided");
      inst = make_sasakian_sphere(spec.k, spec.xi);
      break;
    case FamilyKind::WarpedMappingTorus:
      inst = make_warped_mapping_torus(spec.n, spec.a);
      break;
    case FamilyKind::RiemannianJoin: {
      const double l = spec.l.value_or(kPi / 2);
      const ProfileFunction gamma = make_profile(spec.gamma, l);
      const double c = spec.c ? *spec.c : 1.0 / gamma(l);
      inst = make_riemannian_join(spec.n, gamma, l, c);
      break;
    }
    case FamilyKind::GcvfFactor: {
      const double l = spec.l.value_or(kPi);
      inst = make_gcvf_factor(spec.n, make_profile(spec.gamma, l), l, spec.c.value_or(1.0));
      break;
    }
    case FamilyKind::Flat:
      inst = make_flat(spec.n, spec.xi);
      break;
  }
  if (spec.perturbation != 0.0) {
    inst.metric = perturb_metric(inst.metric, spec.perturbation);
    inst.label = inst.metric.label;
    inst.constant_curvature.reset();
    inst.sasaki_k.reset();
  }
  return inst;
}

}  // namespace twistorlab
