#pragma once

// Finite-difference reference values for connection and curvature, computed
// from plain double evaluations of the metric only.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "twistorlab/chart.hpp"
#include "twistorlab/tensor.hpp"

namespace fd {

inline Eigen::MatrixXd metric_at(const twistorlab::MetricField& m, std::span<const double> p) {
  const auto q = twistorlab::coordinate_jets(p, 0);
  const auto g = m.eval(q);
  const int n = m.dim();
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = g(i, j).value();
  return out;
}

template <class F>
auto central(F&& f, std::vector<double> p, int axis, double h) {
  std::vector<double> plus = p, minus = p;
  plus[axis] += h;
  minus[axis] -= h;
  return ((f(plus) - f(minus)) / (2 * h)).eval();
}

// Richardson-extrapolated central difference, error O(h^4).
template <class F>
auto derivative(F&& f, const std::vector<double>& p, int axis, double h) {
  const auto coarse = central(f, p, axis, h);
  const auto fine = central(f, p, axis, h / 2);
  return ((4.0 * fine - coarse) / 3.0).eval();
}

// Gamma^k_ij as n matrices: out[k](i, j).
inline std::vector<Eigen::MatrixXd> christoffel(const twistorlab::MetricField& m, const std::vector<double>& p,
                                                double h = 1e-4) {
  const int n = m.dim();
  auto g = [&m](const std::vector<double>& x) { return metric_at(m, x); };
  std::vector<Eigen::MatrixXd> dg;
  for (int l = 0; l < n; ++l) dg.push_back(derivative(g, p, l, h));
  const Eigen::MatrixXd ginv = metric_at(m, p).inverse();
  std::vector<Eigen::MatrixXd> out(n, Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) out[k](i, j) += 0.5 * ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
  return out;
}

// R^l_kij with the layout (l, k, i, j) of PointGeometry::riemann.
inline twistorlab::Tensor<double> riemann(const twistorlab::MetricField& m, const std::vector<double>& p,
                                          double h = 1e-3) {
  using twistorlab::Slot;
  const int n = m.dim();
  const auto gamma = christoffel(m, p);
  // dgamma[a][l] = d_a Gamma^l as a matrix over (j, k)
  std::vector<std::vector<Eigen::MatrixXd>> dgamma(n);
  for (int a = 0; a < n; ++a) {
    for (int l = 0; l < n; ++l) {
      auto f = [&m, l](const std::vector<double>& x) { return christoffel(m, x)[l]; };
      dgamma[a].push_back(derivative(f, p, a, h));
    }
  }
  twistorlab::Tensor<double> r(n, {Slot::Contra, Slot::Co, Slot::Co, Slot::Co}, 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = dgamma[i][l](j, k) - dgamma[j][l](i, k);
          for (int s = 0; s < n; ++s) v += gamma[l](i, s) * gamma[s](j, k) - gamma[l](j, s) * gamma[s](i, k);
          r(l, k, i, j) = v;
        }
  return r;
}

// max |a - b| / max(|b|_inf, 1)
inline double relative_error(const twistorlab::Tensor<double>& a, const twistorlab::Tensor<double>& b) {
  double diff = 0.0, scale = 1.0;
  for (std::size_t f = 0; f < a.size(); ++f) {
    diff = std::max(diff, std::abs(a[f] - b[f]));
    scale = std::max(scale, std::abs(b[f]));
  }
  return diff / scale;
}

}  // namespace fd
