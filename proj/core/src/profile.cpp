#include "twistorlab/profile.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "twistorlab/errors.hpp"

namespace twistorlab {

ProfileFunction::ProfileFunction(std::string name, Derivatives derivatives, bool approximate)
    : name_(std::move(name)), derivatives_(std::move(derivatives)), approximate_(approximate) {}

ProfileFunction ProfileFunction::from_expression(std::string name, std::function<Jet(const Jet&)> expr) {
  return ProfileFunction(std::move(name), [expr = std::move(expr)](double s) {
    const Jet x = Jet::variable(1, 3, s, 0);
    const Jet y = expr(x);
    std::array<double, 4> out{};
    for (int k = 0; k <= 3; ++k) {
      const int multi[1] = {k};
      out[k] = y.partial(multi);
    }
    return out;
  });
}

ProfileFunction ProfileFunction::sine() {
  return ProfileFunction("sin", [](double s) {
    const double sn = std::sin(s), cs = std::cos(s);
    return std::array<double, 4>{sn, cs, -sn, -cs};
  });
}

ProfileFunction ProfileFunction::cosine() {
  return ProfileFunction("cos", [](double s) {
    const double sn = std::sin(s), cs = std::cos(s);
    return std::array<double, 4>{cs, -sn, -cs, sn};
  });
}

ProfileFunction ProfileFunction::constant(double value) { return polynomial({value}); }

ProfileFunction ProfileFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ParameterError("polynomial profile needs at least one coefficient");
  return ProfileFunction("polynomial", [coeffs = std::move(coeffs)](double s) {
    std::array<double, 4> out{};
    // Horner for each derivative order.
    for (int d = 0; d <= 3; ++d) {
      double acc = 0.0;
      for (int k = static_cast<int>(coeffs.size()) - 1; k >= d; --k) {
        double falling = 1.0;
        for (int j = 0; j < d; ++j) falling *= k - j;
        acc = acc * s + coeffs[k] * falling;
      }
      out[d] = acc;
    }
    return out;
  });
}

ProfileFunction ProfileFunction::perturbed_sine(double epsilon) {
  auto p = from_expression("perturbed_sin", [epsilon](const Jet& s) {
    const Jet sn = sin(s);
    return sn * (1.0 + epsilon * square(sn));
  });
  return p;
}

namespace {

// Cardinal quintic B-spline centred at 0 with unit spacing, m-th derivative.
double bspline5(double x, int m) {
  static constexpr double kBinom[7] = {1, 6, 15, 20, 15, 6, 1};
  double falling = 1.0;
  for (int j = 0; j < m; ++j) falling *= 5 - j;
  double acc = 0.0;
  for (int j = 0; j <= 6; ++j) {
    const double t = x + 3.0 - j;
    if (t <= 0.0) continue;
    acc += (j % 2 ? -1.0 : 1.0) * kBinom[j] * std::pow(t, 5 - m);
  }
  return acc * falling / 120.0;
}

struct QuinticSpline {
  double lower;
  double h;
  int nodes;
  Eigen::VectorXd coeffs;  // centres j = -2 .. nodes + 1

  std::array<double, 4> eval(double s) const {
    const double x = (s - lower) / h;
    const int centre = static_cast<int>(std::floor(x));
    std::array<double, 4> out{};
    for (int j = centre - 3; j <= centre + 3; ++j) {
      const int k = j + 2;
      if (k < 0 || k >= coeffs.size()) continue;
      double scale = 1.0;
      for (int m = 0; m <= 3; ++m) {
        out[m] += coeffs(k) * bspline5(x - j, m) / scale;
        scale *= h;
      }
    }
    return out;
  }
};

}  // namespace

ProfileFunction ProfileFunction::tabulated(double lower, double upper, std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  if (n < 6) throw ParameterError("tabulated profile needs at least 6 values");
  if (!(upper > lower)) throw ParameterError("tabulated profile needs upper > lower");
  auto spline = std::make_shared<QuinticSpline>();
  spline->lower = lower;
  spline->h = (upper - lower) / (n - 1);
  spline->nodes = n;
  const double h = spline->h;
  const int unknowns = n + 4;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(unknowns, unknowns);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(unknowns);
  for (int i = 0; i < n; ++i) {
    for (int j = i - 2; j <= i + 2; ++j) A(i, j + 2) = bspline5(i - j, 0);
    b(i) = values[i];
  }
  // One-sided fourth-order estimates of f' and f'' at both ends.
  const auto& f = values;
  const double d1_lo = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
  const double d1_hi = (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) / (12 * h);
  const double d2_lo = (45 * f[0] - 154 * f[1] + 214 * f[2] - 156 * f[3] + 61 * f[4] - 10 * f[5]) / (12 * h * h);
  const double d2_hi =
      (45 * f[n - 1] - 154 * f[n - 2] + 214 * f[n - 3] - 156 * f[n - 4] + 61 * f[n - 5] - 10 * f[n - 6]) / (12 * h * h);
  const int ends[2] = {0, n - 1};
  const double d1[2] = {d1_lo, d1_hi};
  const double d2[2] = {d2_lo, d2_hi};
  for (int e = 0; e < 2; ++e) {
    const int i = ends[e];
    for (int j = i - 2; j <= i + 2; ++j) {
      A(n + 2 * e, j + 2) = bspline5(i - j, 1) / h;
      A(n + 2 * e + 1, j + 2) = bspline5(i - j, 2) / (h * h);
    }
    b(n + 2 * e) = d1[e];
    b(n + 2 * e + 1) = d2[e];
  }
  spline->coeffs = A.partialPivLu().solve(b);
  return ProfileFunction("tabulated", [spline](double s) { return spline->eval(s); }, true);
}

Jet ProfileFunction::operator()(const Jet& s) const {
  const std::array<double, 4> d = derivatives_(s.value());
  return compose(s, std::span<const double>(d.data(), static_cast<std::size_t>(s.order()) + 1));
}

double integrate_profile(const ProfileFunction& gamma, double a, double b) {
  if (a == b) return 0.0;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&gamma](double t) { return gamma(t); }, a, b, 10, 1e-13, &error);
  if (!(error <= 1e-12) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "quadrature of " << gamma.name() << " on [" << a << ", " << b << "] did not converge (error estimate "
        << error << ")";
    throw QuadratureError(msg.str());
  }
  return value;
}

ProfileFunction lambda_from_gamma(const ProfileFunction& gamma, double l, double c) {
  if (!(c > 0.0)) throw ParameterError("lambda_from_gamma needs c > 0");
  return ProfileFunction("lambda[" + gamma.name() + "]", [gamma, l, c](double s) {
    const std::array<double, 4> g = gamma.derivatives(s);
    return std::array<double, 4>{c * integrate_profile(gamma, s, l), -c * g[0], -c * g[1], -c * g[2]};
  }, gamma.approximate());
}

}  // namespace twistorlab
