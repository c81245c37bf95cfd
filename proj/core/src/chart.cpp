#include "twistorlab/chart.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "twistorlab/errors.hpp"

namespace twistorlab {

ChartDomain::ChartDomain(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.size() < 2) throw ParameterError("chart dimension must be at least 2");
  for (const auto& a : axes_) {
    if (a.margin < 0.0) throw ParameterError("axis '" + a.name + "' has a negative margin");
    if (!(a.lower + 2.0 * a.margin < a.upper)) {
      throw ParameterError("axis '" + a.name + "' has an empty sampling region");
    }
  }
}

Axis ChartDomain::bounded(std::string name, double lower, double upper, double min_margin) {
  const double margin = std::max(0.05 * (upper - lower), min_margin);
  return Axis{std::move(name), lower, upper, margin, false};
}

Axis ChartDomain::angle(std::string name, double period) { return Axis{std::move(name), 0.0, period, 0.0, true}; }

bool ChartDomain::contains(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (axes_[i].periodic) continue;
    if (!(point[i] >= sample_lower(i) && point[i] <= sample_upper(i))) return false;
  }
  return true;
}

void ChartDomain::require_contains(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dim()) {
    throw DomainError("point has " + std::to_string(point.size()) + " coordinates, chart has " +
                      std::to_string(dim()));
  }
  for (int i = 0; i < dim(); ++i) {
    if (axes_[i].periodic) continue;
    if (!(point[i] >= sample_lower(i) && point[i] <= sample_upper(i))) {
      std::ostringstream msg;
      msg << "coordinate " << axes_[i].name << " = " << point[i] << " outside [" << sample_lower(i) << ", "
          << sample_upper(i) << "]";
      throw DomainError(msg.str());
    }
  }
}

Tensor<Jet> diagonal_metric(std::span<const Jet> diagonal) {
  const int n = static_cast<int>(diagonal.size());
  const Jet zero = Jet::constant(diagonal[0].dim(), diagonal[0].order(), 0.0);
  Tensor<Jet> g(n, {Slot::Co, Slot::Co}, zero);
  for (int i = 0; i < n; ++i) g(i, i) = diagonal[i];
  return g;
}

std::vector<Jet> coordinate_jets(std::span<const double> point, int order) {
  const int n = static_cast<int>(point.size());
  std::vector<Jet> x;
  x.reserve(n);
  for (int i = 0; i < n; ++i) x.push_back(Jet::variable(n, order, point[i], i));
  return x;
}

namespace {

double radical_inverse(std::uint64_t index, int base) {
  double inv_base = 1.0 / base;
  double f = inv_base;
  double out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % base);
    index /= base;
    f *= inv_base;
  }
  return out;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace

std::vector<std::vector<double>> halton_points(const ChartDomain& domain, int count, std::uint64_t seed) {
  const int n = domain.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(n);
  for (auto& s : shift) s = unit(rng);

  std::vector<std::vector<double>> points(count, std::vector<double>(n));
  for (int k = 0; k < count; ++k) {
    for (int i = 0; i < n; ++i) {
      double u = radical_inverse(static_cast<std::uint64_t>(k) + 1, kPrimes[i]) + shift[i];
      u -= std::floor(u);
      const double lo = domain.sample_lower(i);
      const double hi = domain.sample_upper(i);
      points[k][i] = lo + u * (hi - lo);
    }
  }
  return points;
}

}  // namespace twistorlab
