#include "twistorlab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "twistorlab/errors.hpp"

namespace twistorlab {

const char* to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::Pass:
      return "pass";
    case RecordStatus::Fail:
      return "fail";
    case RecordStatus::Skipped:
      return "skipped";
    case RecordStatus::NotApplicable:
      return "not_applicable";
  }
  return "?";
}

IdentityRecord make_record(std::string suite, std::string identity, int index, std::vector<double> point,
                           double residual, double tolerance) {
  IdentityRecord r;
  r.suite = std::move(suite);
  r.identity = std::move(identity);
  r.point_index = index;
  r.point = std::move(point);
  r.residual = residual;
  r.tolerance = tolerance;
  r.status = residual <= tolerance ? RecordStatus::Pass : RecordStatus::Fail;
  return r;
}

IdentityRecord not_applicable(std::string suite, std::string identity, int index, std::vector<double> point,
                              std::string note) {
  IdentityRecord r;
  r.suite = std::move(suite);
  r.identity = std::move(identity);
  r.point_index = index;
  r.point = std::move(point);
  r.status = RecordStatus::NotApplicable;
  r.note = std::move(note);
  return r;
}

void canonical_order(std::vector<IdentityRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const IdentityRecord& a, const IdentityRecord& b) {
    if (a.suite != b.suite) return a.suite < b.suite;
    if (a.identity != b.identity) return a.identity < b.identity;
    return a.point_index < b.point_index;
  });
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(count, 1));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

PointEvaluation evaluate_points(const MetricField& metric, const VectorField& xi,
                                const std::vector<std::vector<double>>& points, int threads) {
  const int count = static_cast<int>(points.size());
  PointEvaluation out;
  out.points.resize(count);
  out.errors.resize(count);
  parallel_for(count, threads, [&](int i) {
    try {
      KillingPoint kp = evaluate_killing_point(metric, xi, points[i]);
      kp.index = i;
      out.points[i] = std::move(kp);
    } catch (const Error& e) {
      out.errors[i] = e.what();
    }
  });
  return out;
}

int endomorphism_rank(const TwoFormAsEndo& u) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(u.endo());
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > 1e-7 * s(0)) ++rank;
  return rank;
}

double xi_wedge_u_residual(const KillingPoint& kp) {
  const Tensor<double> w = wedge(frame_one_form(kp.xi), frame_two_form(kp.u.form()));
  return normalized(tensor_norm(w), kp.xi_norm * kp.u.form().norm());
}

std::vector<bool> support_mask(std::span<const KillingPoint> points) {
  double max_norm = 0.0;
  for (const auto& kp : points) max_norm = std::max(max_norm, kp.xi_norm);
  std::vector<bool> mask;
  mask.reserve(points.size());
  for (const auto& kp : points) mask.push_back(max_norm > 0.0 && kp.xi_norm >= 1e-6 * max_norm);
  return mask;
}

Classification classify(std::span<const KillingPoint> points, const Tolerances& tol) {
  Classification c;
  const std::vector<bool> mask = support_mask(points);
  std::vector<double> fs;
  c.rank_min = 1 << 20;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!mask[i]) {
      ++c.points_skipped;
      continue;
    }
    const KillingPoint& kp = points[i];
    fs.push_back(kp.f_fit);
    const int rank = endomorphism_rank(kp.u);
    c.rank_min = std::min(c.rank_min, rank);
    c.rank_max = std::max(c.rank_max, rank);
    c.max_xi_wedge_u = std::max(c.max_xi_wedge_u, xi_wedge_u_residual(kp));
  }
  c.points_used = static_cast<int>(fs.size());
  if (fs.empty()) {
    c.rank_min = 0;
    return c;
  }
  double sum = 0.0, abs_sum = 0.0;
  c.f_min = c.f_max = fs.front();
  for (double f : fs) {
    sum += f;
    abs_sum += std::abs(f);
    c.f_min = std::min(c.f_min, f);
    c.f_max = std::max(c.f_max, f);
  }
  c.f_mean = sum / fs.size();
  c.f_abs_mean = abs_sum / fs.size();
  double var = 0.0;
  for (double f : fs) var += (f - c.f_mean) * (f - c.f_mean);
  c.f_stddev = std::sqrt(var / fs.size());

  const double tol_f = tol.order2;
  const double f_bound = std::max(std::abs(c.f_min), std::abs(c.f_max));
  c.constant_ratio = f_bound <= tol_f ? 0.0 : c.f_stddev / (tol_f * c.f_abs_mean);
  c.rank2_ratio = c.max_xi_wedge_u / tol_f;
  const bool f_constant = c.constant_ratio <= 1.0;
  const bool rank2 = c.rank_min == 2 && c.rank_max == 2 && c.rank2_ratio <= 1.0;
  if (std::isnan(c.f_mean)) {
    c.tag = "undetermined";
  } else if (f_constant && rank2) {
    c.tag = "both";
  } else if (f_constant) {
    c.tag = "f-constant";
  } else if (rank2) {
    c.tag = "rank-2";
  } else {
    c.tag = "neither";
  }
  return c;
}

namespace {

constexpr const char* kSection4 = "section4";

Eigen::MatrixXd wedge_vectors(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return x * y.transpose() - y * x.transpose();
}

// u(X) as a frame vector: row X of the form matrix, i.e. U(X).
Eigen::VectorXd apply_u(const KillingPoint& kp, const Eigen::VectorXd& x) { return kp.u.apply(x); }

}  // namespace

SuiteResult killing_twistor_suite(std::span<const KillingPoint> points, const Tolerances& tol) {
  SuiteResult out;
  out.classification = classify(points, tol);
  const Classification& cls = out.classification;
  const bool rank2_branch = cls.tag == "rank-2" || cls.tag == "both";
  const std::vector<bool> mask = support_mask(points);
  static const char* kIdentities[] = {"nabla_xi_u",          "xi_wedge_delta_u",       "f_fit",
                                      "f_delta_vs_fit",      "u_xi_wedge_df_symmetric", "d_u_norm_vs_f_u_xi",
                                      "d_u_norm_vs_f_d_xi_norm", "f_u_xi_vs_f_d_xi_norm", "u_df_wedge_xi",
                                      "xi_wedge_dxi",        "rank2_reconstruction"};

  for (std::size_t i = 0; i < points.size(); ++i) {
    const KillingPoint& kp = points[i];
    auto add = [&](const char* name, double residual, double tolerance) {
      out.records.push_back(make_record(kSection4, name, kp.index, kp.point, residual, tolerance));
      return &out.records.back();
    };
    if (!mask[i]) {
      for (const char* name : kIdentities) {
        IdentityRecord r = not_applicable(kSection4, name, kp.index, kp.point, "outside the support of xi");
        r.status = RecordStatus::Skipped;
        r.aux["xi_norm"] = kp.xi_norm;
        out.records.push_back(std::move(r));
      }
      continue;
    }
    const int n = kp.n;
    const double X = kp.xi_norm;
    const double un = kp.u.form().norm();
    const double du = kp.nabla_u_norm();
    const double kappa = normalized(du, un);
    const double f = kp.f_fit;
    const double df_scale = kp.df.norm() + std::abs(f) * kappa;

    // nabla_xi u
    Eigen::MatrixXd nxi_u = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) nxi_u += kp.xi(a) * kp.nabla_u[a];
    IdentityRecord* r = add("nabla_xi_u", normalized(nxi_u.norm(), X * du), tol.order2);
    r->aux["f"] = f;
    r->aux["u_norm_sq"] = kp.u_norm_sq;
    r->aux["u_norm_sq_tensor"] = 2.0 * kp.u_norm_sq;
    r->aux["xi_norm"] = X;

    // xi ^ delta u
    add("xi_wedge_delta_u", normalized(wedge_vectors(kp.xi, kp.delta_u).norm(), X * kp.delta_u.norm() + X * du),
        tol.order2);

    r = add("f_fit", kp.f_fit_residual, tol.order2);
    r->aux["f"] = f;
    r = add("f_delta_vs_fit",
            normalized(std::abs(kp.f_fit - kp.f_delta), std::abs(kp.f_fit) + std::abs(kp.f_delta) + du / X),
            tol.order2);
    r->aux["f_delta"] = kp.f_delta;
    r->aux["f_fit"] = kp.f_fit;

    // u(xi) ^ df + u(df) ^ xi
    const Eigen::VectorXd u_xi = apply_u(kp, kp.xi);
    const Eigen::VectorXd u_df = apply_u(kp, kp.df);
    const Eigen::MatrixXd t1 = wedge_vectors(u_xi, kp.df);
    const Eigen::MatrixXd t2 = wedge_vectors(u_df, kp.xi);
    add("u_xi_wedge_df_symmetric", normalized((t1 + t2).norm(), t1.norm() + t2.norm() + un * X * df_scale),
        tol.order2);

    // d|u|^2 = -2 f u(xi) = f d|xi|^2
    const Eigen::VectorXd& g1 = kp.d_u_norm_sq;
    const Eigen::VectorXd g2 = -2.0 * f * u_xi;
    const Eigen::VectorXd g3 = f * kp.d_xi_norm_sq;
    const double gscale = un * du;
    add("d_u_norm_vs_f_u_xi", normalized((g1 - g2).norm(), g1.norm() + g2.norm() + gscale), tol.order2);
    add("d_u_norm_vs_f_d_xi_norm", normalized((g1 - g3).norm(), g1.norm() + g3.norm() + gscale), tol.order2);
    add("f_u_xi_vs_f_d_xi_norm", normalized((g2 - g3).norm(), g2.norm() + g3.norm() + gscale), tol.order2);

    add("u_df_wedge_xi", normalized(t2.norm(), u_df.norm() * X + un * X * df_scale), tol.order2);

    const int rank = endomorphism_rank(kp.u);
    const double xw = xi_wedge_u_residual(kp);
    if (rank2_branch) {
      r = add("xi_wedge_dxi", xw, tol.order1);
    } else {
      out.records.push_back(not_applicable(kSection4, "xi_wedge_dxi", kp.index, kp.point, "not the rank-2 branch"));
      r = &out.records.back();
      r->residual = xw;
    }
    r->aux["rank"] = rank;

    const Eigen::MatrixXd rebuilt = wedge_vectors(kp.xi, u_xi) / (X * X);
    const double rebuild = normalized((kp.u.form() - rebuilt).norm(), un + rebuilt.norm());
    if (rank2_branch) {
      add("rank2_reconstruction", rebuild, tol.order2);
    } else {
      out.records.push_back(
          not_applicable(kSection4, "rank2_reconstruction", kp.index, kp.point, "not the rank-2 branch"));
      out.records.back().residual = rebuild;
    }
  }
  return out;
}

std::vector<IdentityRecord> killing_suite(std::span<const KillingPoint> points, const Tolerances& tol) {
  std::vector<IdentityRecord> out;
  for (const KillingPoint& kp : points) {
    out.push_back(make_record("killing", "killing_equation", kp.index, kp.point, killing_residual(kp), tol.order1));
    out.push_back(
        make_record("killing", "nabla_xi_equals_u", kp.index, kp.point, nabla_xi_is_u_residual(kp), tol.order1));
    out.push_back(make_record("killing", "kostant", kp.index, kp.point, kostant_residual(kp), tol.order2));
  }
  return out;
}

std::vector<IdentityRecord> weitzenboeck_suite(std::span<const KillingPoint> points, bool xi_killing,
                                               const Tolerances& tol) {
  std::vector<IdentityRecord> out;
  for (const KillingPoint& kp : points) {
    if (xi_killing) {
      out.push_back(make_record("weitzenboeck", "rough_laplacian_is_half_hodge", kp.index, kp.point,
                                killing_weitzenboeck_residual(kp), tol.order2));
    } else {
      out.push_back(not_applicable("weitzenboeck", "rough_laplacian_is_half_hodge", kp.index, kp.point,
                                   "field is not Killing"));
    }
    out.push_back(make_record("weitzenboeck", "bochner", kp.index, kp.point, bochner_residual(kp), tol.order2));
  }
  return out;
}

std::vector<IdentityRecord> curvature_identity_suite(std::span<const KillingPoint> points, const Tolerances& tol,
                                                     std::uint64_t seed, int omegas) {
  static const char* kNames[] = {"curvature_commutator", "self_commutator", "ricci_commutes_with_u_squared",
                                 "curvature_action_consistency", "second_derivative_of_u"};
  std::vector<IdentityRecord> out;
  for (const KillingPoint& kp : points) {
    try {
      require_closed_twistor(kp, tol.order2);
    } catch (const NotApplicableError& e) {
      for (const char* name : kNames) out.push_back(not_applicable("section3", name, kp.index, kp.point, e.what()));
      continue;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(kp.index)};
    std::mt19937_64 rng(seq);
    double co = 0.0, ind = 0.0;
    for (int k = 0; k < omegas; ++k) {
      const Eigen::MatrixXd omega = random_skew(kp.n, rng);
      co = std::max(co, curvature_commutator_identity(kp.curvature, kp.u, omega));
      ind = std::max(ind, curvature_action_consistency(kp.curvature, kp.u, omega));
    }
    IdentityRecord r = make_record("section3", "curvature_commutator", kp.index, kp.point, co, tol.order2);
    r.aux["omegas"] = omegas;
    out.push_back(std::move(r));
    out.push_back(make_record("section3", "self_commutator", kp.index, kp.point,
                              self_commutator_residual(kp.curvature, kp.u), tol.order2));
    out.push_back(make_record("section3", "ricci_commutes_with_u_squared", kp.index, kp.point,
                              ricci_commutation(kp.curvature, kp.u), tol.order2));
    out.push_back(make_record("section3", "curvature_action_consistency", kp.index, kp.point, ind, tol.order1));
    out.push_back(make_record("section3", "second_derivative_of_u", kp.index, kp.point,
                              second_derivative_identity(kp), tol.order3));
  }
  return out;
}

std::vector<IdentityRecord> sasakian_case_checks(std::span<const KillingPoint> points,
                                                 const Classification& classification, const Tolerances& tol) {
  static const char* kNames[] = {"ricci_xi_trace", "ricci_xi_rough_laplacian", "characteristic_equation"};
  std::vector<IdentityRecord> out;
  const char* suite = "sasakian";
  std::string reason;
  if (classification.tag != "f-constant" && classification.tag != "both") reason = "f is not constant";
  const double c = -classification.f_mean;
  if (reason.empty() && std::abs(c) <= tol.order2) reason = "c = 0: xi is parallel";
  if (!reason.empty()) {
    for (const KillingPoint& kp : points)
      for (const char* name : kNames) out.push_back(not_applicable(suite, name, kp.index, kp.point, reason));
    return out;
  }
  double lambda_max = 0.0, dlambda_max = 0.0;
  for (const KillingPoint& kp : points) {
    lambda_max = std::max(lambda_max, kp.xi_norm * kp.xi_norm);
    dlambda_max = std::max(dlambda_max, kp.d_xi_norm_sq.norm());
  }
  const bool lambda_constant = dlambda_max <= 1e-8 * lambda_max;
  for (const KillingPoint& kp : points) {
    const int n = kp.n;
    const Eigen::VectorXd ric_xi = kp.curvature.ricci() * kp.xi;
    const Eigen::VectorXd target = (n - 1.0) * c * kp.xi;
    IdentityRecord r = make_record(suite, "ricci_xi_trace", kp.index, kp.point,
                                   normalized((ric_xi - target).norm(), ric_xi.norm() + target.norm()), tol.order2);
    r.aux["c"] = c;
    out.push_back(std::move(r));
    out.push_back(make_record(
        suite, "ricci_xi_rough_laplacian", kp.index, kp.point,
        normalized((ric_xi - kp.rough_laplacian).norm(), ric_xi.norm() + kp.rough_laplacian.norm()), tol.order2));

    const Eigen::VectorXd& dl = kp.d_xi_norm_sq;
    double worst = 0.0, scale = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          const double lower = c * (2.0 * dl(a) * (b == d) + dl(b) * (a == d) + dl(d) * (a == b));
          const double h = kp.nabla2_dlambda(a, b, d);
          worst = std::max(worst, std::abs(h + lower));
          scale = std::max(scale, std::abs(h) + std::abs(lower));
        }
    const double residual = normalized(worst, scale);
    if (lambda_constant) {
      IdentityRecord na = not_applicable(suite, "characteristic_equation", kp.index, kp.point, "|xi| is constant");
      na.residual = residual;
      out.push_back(std::move(na));
    } else {
      out.push_back(make_record(suite, "characteristic_equation", kp.index, kp.point, residual, tol.order3));
    }
  }
  return out;
}

std::vector<IdentityRecord> sasakian_suite(std::span<const KillingPoint> points, std::optional<double> k,
                                           const Tolerances& tol) {
  std::vector<IdentityRecord> out;
  const char* suite = "sasakian";
  for (const KillingPoint& kp : points) {
    if (!k) {
      out.push_back(not_applicable(suite, "sasakian_form", kp.index, kp.point, "no Sasakian constant"));
      out.push_back(not_applicable(suite, "sasakian_second_derivative", kp.index, kp.point, "no Sasakian constant"));
      continue;
    }
    const SasakianResidual s = sasakian_residual(kp, *k);
    IdentityRecord r = make_record(suite, "sasakian_form", kp.index, kp.point, s.form, tol.order2);
    r.aux["k"] = *k;
    out.push_back(std::move(r));
    out.push_back(make_record(suite, "sasakian_second_derivative", kp.index, kp.point, s.second_derivative, tol.order2));
  }
  if (k && !points.empty()) {
    double mean = 0.0;
    for (const KillingPoint& kp : points) mean += kp.xi_norm;
    mean /= points.size();
    double var = 0.0;
    for (const KillingPoint& kp : points) var += (kp.xi_norm - mean) * (kp.xi_norm - mean);
    const double stddev = std::sqrt(var / points.size());
    IdentityRecord r = make_record(suite, "xi_norm_constant", -1, {}, normalized(stddev, mean), tol.order1);
    r.aux["xi_norm_mean"] = mean;
    r.aux["xi_norm_stddev"] = stddev;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<IdentityRecord> twistor_suite(const FamilyInstance& instance, std::span<const KillingPoint> points,
                                          const Tolerances& tol) {
  std::vector<IdentityRecord> out;
  const char* suite = "twistor";
  for (const KillingPoint& kp : points) {
    if (instance.xi_killing) {
      out.push_back(make_record(suite, "twistor_half_dxi", kp.index, kp.point, twistor_residual(kp), tol.order2));
    } else {
      out.push_back(not_applicable(suite, "twistor_half_dxi", kp.index, kp.point, "field is not Killing"));
    }
    if (instance.potential && instance.base) {
      // The base chart is the instance chart with the leading circle dropped (torus) or the chart itself.
      const int drop = instance.kind == FamilyKind::WarpedMappingTorus ? 1 : 0;
      const std::vector<double> q(kp.point.begin() + drop, kp.point.end());
      const PointGeometry base(*instance.base, q, 3);
      const Tensor<Jet> dl = differential(evaluate(*instance.potential, base));
      IdentityRecord r = make_record(suite, "twistor_d_potential_on_base", kp.index, kp.point,
                                     twistor_residual(base, dl), tol.order2);
      r.aux["potential"] = evaluate(*instance.potential, base).value();
      out.push_back(std::move(r));
    }
    if (instance.kind == FamilyKind::GcvfFactor && instance.gamma) {
      const int m = kp.n;
      const double alpha = kp.nabla_xi.trace() / m;
      const Eigen::MatrixXd dev = kp.nabla_xi - alpha * Eigen::MatrixXd::Identity(m, m);
      IdentityRecord r = make_record(suite, "gradient_conformal", kp.index, kp.point,
                                     normalized(dev.norm(), kp.nabla_xi.norm() + std::abs(alpha) * std::sqrt(m)),
                                     tol.order2);
      r.aux["alpha"] = alpha;
      out.push_back(std::move(r));
      const double expected = instance.c * instance.gamma->derivatives(kp.point[instance.profile_axis])[1];
      r = make_record(suite, "conformal_factor_profile", kp.index, kp.point,
                      normalized(std::abs(alpha - expected), std::abs(alpha) + std::abs(expected) + kp.nabla_xi.norm() /
                                                                                                   std::sqrt(m)),
                      tol.order2);
      r.aux["alpha"] = alpha;
      r.aux["expected"] = expected;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<IdentityRecord> curvature_sanity_suite(const FamilyInstance& instance,
                                                   std::span<const KillingPoint> points, const Tolerances& tol) {
  std::vector<IdentityRecord> out;
  const char* suite = "curvature_sanity";
  for (const KillingPoint& kp : points) {
    const int n = kp.n;
    const FrameCurvature& R = kp.curvature;
    // Lowered frame components R(d, c, a, b) = <R(e_a, e_b) e_c, e_d>.
    auto rf = [&](int d, int c, int a, int b) { return R(a, b)(d, c); };
    double size = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) size = std::max(size, R(a, b).cwiseAbs().maxCoeff());
    double bianchi = 0.0, pair = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            bianchi = std::max(bianchi, std::abs(rf(d, c, a, b) + rf(d, a, b, c) + rf(d, b, c, a)));
            pair = std::max(pair, std::abs(rf(d, c, a, b) - rf(a, b, d, c)));
            pair = std::max(pair, std::abs(rf(d, c, a, b) + rf(c, d, a, b)));
          }
    out.push_back(make_record(suite, "first_bianchi", kp.index, kp.point, normalized(bianchi, size), tol.order1));
    out.push_back(make_record(suite, "curvature_pair_symmetry", kp.index, kp.point, normalized(pair, size),
                              tol.order1));

    const PointGeometry& geo = kp.geometry;
    const Tensor<double> ng = values(covariant_derivative(geo, geo.metric()));
    double ng_max = 0.0;
    for (std::size_t f = 0; f < ng.size(); ++f) ng_max = std::max(ng_max, std::abs(ng[f]));
    out.push_back(make_record(suite, "metric_compatibility", kp.index, kp.point,
                              normalized(ng_max, geo.frame().metric.cwiseAbs().maxCoeff()), tol.order1));

    if (instance.constant_curvature) {
      const double k0 = *instance.constant_curvature;
      const double unit = k0 != 0.0 ? std::abs(k0) : 1.0;
      double worst = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          worst = std::max(worst, std::abs(R.sectional(Eigen::VectorXd::Unit(n, a), Eigen::VectorXd::Unit(n, b)) - k0));
      IdentityRecord r = make_record(suite, "sectional_curvature_constant", kp.index, kp.point, worst / unit,
                                     tol.order2);
      r.aux["expected"] = k0;
      out.push_back(std::move(r));
      const double scal = n * (n - 1.0) * k0;
      r = make_record(suite, "scalar_curvature_constant", kp.index, kp.point,
                      std::abs(R.scalar() - scal) / (k0 != 0.0 ? std::abs(scal) : 1.0), tol.order2);
      r.aux["scalar"] = R.scalar();
      out.push_back(std::move(r));
    }
    if (instance.kind == FamilyKind::Flat) {
      const Tensor<double> gamma = values(geo.christoffel());
      double g_max = 0.0;
      for (std::size_t f = 0; f < gamma.size(); ++f) g_max = std::max(g_max, std::abs(gamma[f]));
      IdentityRecord r = make_record(suite, "flat_connection", kp.index, kp.point, std::max(g_max, size), 1e-12);
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<IdentityRecord> boundary_suite(const FamilyInstance& instance) {
  std::vector<IdentityRecord> out;
  for (const BoundaryReport& b : instance.boundary) {
    IdentityRecord r;
    r.suite = "boundary";
    r.identity = std::string(b.mode == BoundaryMode::Join ? "join_" : "gcvf_") + to_string(b.end) + "_expansion";
    r.residual = b.max_forbidden;
    r.tolerance = 1e-6;
    r.status = b.verdict == Verdict::Pass ? RecordStatus::Pass : RecordStatus::Fail;
    r.aux["condition_number"] = b.condition_number;
    r.aux["samples"] = b.samples;
    r.aux["refined_agrees"] = b.refined == b.verdict ? 1.0 : 0.0;
    r.aux["approximate"] = b.approximate ? 1.0 : 0.0;
    for (std::size_t i = 0; i < b.coefficients.size(); ++i) r.aux["c" + std::to_string(i)] = b.coefficients[i];
    r.note = std::string(to_string(b.verdict)) + (b.detail.empty() ? "" : ": " + b.detail);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace twistorlab
