#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "twistorlab/jet.hpp"

namespace twistorlab {

/// A smooth function of one variable s, available with three derivatives.
///
/// Built-ins are analytic; tabulated profiles go through a quintic spline and
/// are flagged as approximate.
class ProfileFunction {
 public:
  using Derivatives = std::function<std::array<double, 4>(double)>;

  ProfileFunction() = default;
  ProfileFunction(std::string name, Derivatives derivatives, bool approximate = false);

  /// Build from an expression in univariate jet arithmetic.
  static ProfileFunction from_expression(std::string name, std::function<Jet(const Jet&)> expr);

  static ProfileFunction sine();
  static ProfileFunction cosine();
  static ProfileFunction constant(double value);
  /// sum_k coeffs[k] s^k
  static ProfileFunction polynomial(std::vector<double> coeffs);
  /// sin(s) (1 + eps sin^2 s)
  static ProfileFunction perturbed_sine(double epsilon);
  /// Quintic spline through values at s_i = lower + i (upper - lower) / (N - 1).
  static ProfileFunction tabulated(double lower, double upper, std::vector<double> values);

  const std::string& name() const { return name_; }
  bool approximate() const { return approximate_; }

  double operator()(double s) const { return derivatives_(s)[0]; }
  /// f, f', f'', f''' at s.
  std::array<double, 4> derivatives(double s) const { return derivatives_(s); }
  /// f(s) with s a jet in any number of chart variables.
  Jet operator()(const Jet& s) const;

 private:
  std::string name_;
  Derivatives derivatives_;
  bool approximate_ = false;
};

/// lambda(s) = c * int_s^l gamma(t) dt, with lambda' = -c gamma exactly.
/// Throws QuadratureError when the quadrature error estimate exceeds 1e-12.
ProfileFunction lambda_from_gamma(const ProfileFunction& gamma, double l, double c);

/// int_a^b gamma(t) dt by adaptive Gauss-Kronrod.
double integrate_profile(const ProfileFunction& gamma, double a, double b);

}  // namespace twistorlab
