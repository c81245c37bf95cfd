#include "twistorlab/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "twistorlab/errors.hpp"

namespace twistorlab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(BoundaryEnd e) { return e == BoundaryEnd::Origin ? "origin" : "far"; }

namespace {

constexpr int kDegree = 5;

struct Fit {
  std::vector<double> coeffs;
  double condition = 0.0;
};

// Samples h(t), h'(t), h''(t), h'''(t) where h is gamma or gamma^2 read from the end.
std::array<double, 4> local_data(const ProfileFunction& gamma, double l, BoundaryEnd end, BoundaryMode mode,
                                 double t) {
  const double s = end == BoundaryEnd::Origin ? t : l - t;
  std::array<double, 4> g = gamma.derivatives(s);
  if (end == BoundaryEnd::Far) {
    g[1] = -g[1];
    g[3] = -g[3];
  }
  if (mode == BoundaryMode::Join) return g;
  return {g[0] * g[0], 2 * g[0] * g[1], 2 * (g[1] * g[1] + g[0] * g[2]), 2 * (3 * g[1] * g[2] + g[0] * g[3])};
}

Fit fit_expansion(const ProfileFunction& gamma, double l, BoundaryEnd end, BoundaryMode mode, int samples,
                  double window) {
  // Work in tau = t / window so the columns are O(1); scale back afterwards.
  const int cols = kDegree + 1;
  Eigen::MatrixXd A(4 * samples, cols);
  Eigen::VectorXd b(4 * samples);
  for (int i = 0; i < samples; ++i) {
    const double tau = static_cast<double>(i + 1) / samples;
    const std::array<double, 4> h = local_data(gamma, l, end, mode, tau * window);
    double wpow = 1.0;
    for (int m = 0; m <= 3; ++m) {
      const int row = 4 * i + m;
      for (int k = 0; k < cols; ++k) {
        double falling = 1.0;
        for (int j = 0; j < m; ++j) falling *= k - j;
        A(row, k) = k >= m ? falling * std::pow(tau, k - m) : 0.0;
      }
      b(row) = h[m] * wpow;
      wpow *= window;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Fit fit;
  fit.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  const Eigen::VectorXd beta = svd.solve(b);
  fit.coeffs.resize(cols);
  for (int k = 0; k < cols; ++k) fit.coeffs[k] = beta(k) / std::pow(window, k);
  return fit;
}

double forbidden(const std::vector<double>& c, double cc, BoundaryEnd end, BoundaryMode mode) {
  if (mode == BoundaryMode::Gcvf) {
    return std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2] - 1.0), std::abs(c[3])});
  }
  if (end == BoundaryEnd::Origin) return std::max({std::abs(c[0]), std::abs(c[1] - 1.0), std::abs(c[2])});
  return std::max({std::abs(c[0] - 1.0 / cc), std::abs(c[1]), std::abs(c[3])});
}

Verdict decide(const Fit& fit, double cc, BoundaryEnd end, BoundaryMode mode, const SmoothnessOptions& o,
               double* max_forbidden) {
  *max_forbidden = forbidden(fit.coeffs, cc, end, mode);
  if (!(fit.condition <= o.max_condition)) return Verdict::Inconclusive;
  return *max_forbidden <= o.threshold ? Verdict::Pass : Verdict::Fail;
}

}  // namespace

BoundaryReport smoothness_analyzer(const ProfileFunction& gamma, double l, double c, BoundaryEnd end,
                                   BoundaryMode mode, const SmoothnessOptions& options) {
  if (!(l > options.window)) throw ParameterError("profile interval shorter than the analysis window");
  if (mode == BoundaryMode::Join && end == BoundaryEnd::Far && !(c > 0.0)) {
    throw ParameterError("far-end join condition needs c > 0");
  }
  BoundaryReport r;
  r.end = end;
  r.mode = mode;
  r.samples = options.samples;
  r.approximate = gamma.approximate();
  const Fit fit = fit_expansion(gamma, l, end, mode, options.samples, options.window);
  r.coefficients = fit.coeffs;
  r.condition_number = fit.condition;
  const Verdict first = decide(fit, c, end, mode, options, &r.max_forbidden);
  double refined_forbidden = 0.0;
  const Fit fine = fit_expansion(gamma, l, end, mode, 2 * options.samples, options.window);
  r.refined = decide(fine, c, end, mode, options, &refined_forbidden);
  r.verdict = first == r.refined ? first : Verdict::Inconclusive;

  std::ostringstream msg;
  msg << (mode == BoundaryMode::Join ? "join " : "gcvf ") << to_string(end) << ": max forbidden coefficient "
      << r.max_forbidden << " (threshold " << options.threshold << "), condition " << r.condition_number;
  if (first != r.refined) msg << "; verdict changed under refinement";
  if (r.approximate) msg << "; tabulated profile, verdict is approximate";
  r.detail = msg.str();
  return r;
}

}  // namespace twistorlab
