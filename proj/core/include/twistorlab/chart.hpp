#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "twistorlab/jet.hpp"
#include "twistorlab/tensor.hpp"

namespace twistorlab {

/// One axis of a coordinate box.
struct Axis {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  /// Exclusion width at both ends (coordinate singularities live there).
  double margin = 0.0;
  /// Angle coordinate; no margin is needed and any value is accepted.
  bool periodic = false;
};

/// Open coordinate box on which all evaluation happens.
class ChartDomain {
 public:
  ChartDomain() = default;
  explicit ChartDomain(std::vector<Axis> axes);

  /// Margin of 5% of the axis length unless the axis is periodic.
  static Axis bounded(std::string name, double lower, double upper, double min_margin = 0.0);
  static Axis angle(std::string name, double period = 6.283185307179586);

  int dim() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int i) const { return axes_[i]; }
  const std::vector<Axis>& axes() const { return axes_; }

  double sample_lower(int i) const { return axes_[i].lower + axes_[i].margin; }
  double sample_upper(int i) const { return axes_[i].upper - axes_[i].margin; }

  bool contains(std::span<const double> point) const;
  /// Throws DomainError naming the first offending axis.
  void require_contains(std::span<const double> point) const;

 private:
  std::vector<Axis> axes_;
};

using MetricFn = std::function<Tensor<Jet>(std::span<const Jet>)>;
using VectorFn = std::function<Tensor<Jet>(std::span<const Jet>)>;
using ScalarFn = std::function<Jet(std::span<const Jet>)>;
using TensorFn = std::function<Tensor<Jet>(std::span<const Jet>)>;

/// Riemannian metric g_ij on a chart, evaluable in jet arithmetic.
struct MetricField {
  std::string label;
  ChartDomain domain;
  MetricFn eval;

  int dim() const { return domain.dim(); }
};

/// Contravariant vector field components X^i.
struct VectorField {
  std::string label;
  VectorFn eval;
};

struct ScalarField {
  std::string label;
  ScalarFn eval;
};

/// A (p,q)-tensor field; forms are alternating with covariant slots only.
struct TensorField {
  std::string label;
  std::vector<Slot> slots;
  bool alternating = false;
  TensorFn eval;
};

/// Symmetric metric from its diagonal.
Tensor<Jet> diagonal_metric(std::span<const Jet> diagonal);

/// Coordinate jets x_i + h_i at a point.
std::vector<Jet> coordinate_jets(std::span<const double> point, int order);

/// Radical-inverse Halton points over the margined box, shifted by a
/// seed-dependent Cranley-Patterson rotation.
std::vector<std::vector<double>> halton_points(const ChartDomain& domain, int count, std::uint64_t seed);

}  // namespace twistorlab
