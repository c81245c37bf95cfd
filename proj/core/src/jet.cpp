#include "twistorlab/jet.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <mutex>
#include <string>

#include "twistorlab/errors.hpp"

namespace twistorlab {

namespace {

void enumerate(int dim, int degree, int axis, std::array<std::uint8_t, kMaxJetDim>& current,
               std::vector<std::array<std::uint8_t, kMaxJetDim>>& out) {
  if (axis == dim - 1) {
    current[axis] = static_cast<std::uint8_t>(degree);
    out.push_back(current);
    current[axis] = 0;
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[axis] = static_cast<std::uint8_t>(e);
    enumerate(dim, degree - e, axis + 1, current, out);
  }
  current[axis] = 0;
}

}  // namespace

MonomialTable::MonomialTable(int dim) : dim_(dim) {
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    std::array<std::uint8_t, kMaxJetDim> current{};
    enumerate(dim, d, 0, current, exps_);
    count_[d] = static_cast<int>(exps_.size());
  }
  const int total = count_[kMaxJetOrder];
  degree_.resize(total);
  for (int m = 0; m < total; ++m) {
    int deg = 0;
    for (int a = 0; a < dim; ++a) deg += exps_[m][a];
    degree_[m] = deg;
  }
  raise_.assign(total, {});
  for (int m = 0; m < total; ++m) {
    for (int a = 0; a < kMaxJetDim; ++a) {
      if (a >= dim || degree_[m] == kMaxJetOrder) {
        raise_[m][a] = -1;
        continue;
      }
      std::array<int, kMaxJetDim> e{};
      for (int b = 0; b < dim; ++b) e[b] = exps_[m][b];
      e[a] += 1;
      raise_[m][a] = find(std::span<const int>(e.data(), dim));
    }
  }
  // Products sorted by output degree so products(order) is a prefix.
  for (int out_deg = 0; out_deg <= kMaxJetOrder; ++out_deg) {
    for (int i = 0; i < total; ++i) {
      for (int j = 0; j < total; ++j) {
        if (degree_[i] + degree_[j] != out_deg) continue;
        std::array<int, kMaxJetDim> e{};
        for (int b = 0; b < dim; ++b) e[b] = exps_[i][b] + exps_[j][b];
        const int k = find(std::span<const int>(e.data(), dim));
        products_.push_back({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                             static_cast<std::uint8_t>(k)});
      }
    }
    product_count_[out_deg] = static_cast<int>(products_.size());
  }
}

int MonomialTable::find(std::span<const int> exponents) const {
  int deg = 0;
  for (int e : exponents) deg += e;
  if (deg > kMaxJetOrder) return -1;
  const int begin = deg == 0 ? 0 : count_[deg - 1];
  for (int m = begin; m < count_[deg]; ++m) {
    bool same = true;
    for (int a = 0; a < dim_ && same; ++a) same = exps_[m][a] == exponents[a];
    if (same) return m;
  }
  return -1;
}

const MonomialTable& MonomialTable::get(int dim) {
  if (dim < 1 || dim > kMaxJetDim) {
    throw ValenceError("jet dimension must be in [1, " + std::to_string(kMaxJetDim) + "], got " +
                       std::to_string(dim));
  }
  static std::once_flag once;
  static std::array<const MonomialTable*, kMaxJetDim + 1> tables{};
  std::call_once(once, [] {
    for (int d = 1; d <= kMaxJetDim; ++d) tables[d] = new MonomialTable(d);
  });
  return *tables[dim];
}

Jet Jet::constant(int dim, int order, double value) {
  MonomialTable::get(dim);
  Jet out(dim, order);
  out.c_[0] = value;
  return out;
}

Jet Jet::variable(int dim, int order, double value, int axis) {
  const auto& table = MonomialTable::get(dim);
  Jet out(dim, order);
  out.c_[0] = value;
  if (order >= 1) out.c_[table.raise(0, axis)] = 1.0;
  return out;
}

int Jet::size() const { return MonomialTable::get(dim_).count(order_); }

double Jet::partial(std::span<const int> multi_index) const {
  const auto& table = MonomialTable::get(dim_);
  const int index = table.find(multi_index);
  if (index < 0 || table.degree(index) > order_) {
    throw OrderError("partial derivative beyond jet order " + std::to_string(order_));
  }
  double factorial = 1.0;
  for (int e : multi_index) {
    for (int k = 2; k <= e; ++k) factorial *= k;
  }
  return c_[index] * factorial;
}

double Jet::gradient(int axis) const {
  if (order_ < 1) throw OrderError("gradient of an order-0 jet");
  return c_[MonomialTable::get(dim_).raise(0, axis)];
}

Jet Jet::derivative(int axis) const {
  if (order_ == 0) throw OrderError("derivative requested beyond the available jet order");
  const auto& table = MonomialTable::get(dim_);
  Jet out(dim_, order_ - 1);
  const int n = table.count(order_ - 1);
  for (int m = 0; m < n; ++m) {
    const int up = table.raise(m, axis);
    out.c_[m] = c_[up] * (table.exponents(m)[axis] + 1);
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order >= order_) return *this;
  Jet out(dim_, order);
  const int n = MonomialTable::get(dim_).count(order);
  std::copy_n(c_.begin(), n, out.c_.begin());
  return out;
}

Jet& Jet::operator+=(const Jet& rhs) {
  if (rhs.order_ < order_) *this = truncated(rhs.order_);
  if (order_ > 0) assert(dim_ == rhs.dim_);
  const int n = size();
  for (int m = 0; m < n; ++m) c_[m] += rhs.c_[m];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  if (rhs.order_ < order_) *this = truncated(rhs.order_);
  if (order_ > 0) assert(dim_ == rhs.dim_);
  const int n = size();
  for (int m = 0; m < n; ++m) c_[m] -= rhs.c_[m];
  return *this;
}

Jet& Jet::operator*=(double rhs) {
  const int n = size();
  for (int m = 0; m < n; ++m) c_[m] *= rhs;
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }

Jet Jet::operator-() const {
  Jet out = *this;
  const int n = size();
  for (int m = 0; m < n; ++m) out.c_[m] = -c_[m];
  return out;
}

Jet operator*(const Jet& lhs, const Jet& rhs) {
  const int order = std::min(lhs.order_, rhs.order_);
  if (order == 0) {
    const Jet& shape = lhs.order_ == 0 ? lhs : rhs;
    Jet out(shape.dim_, 0);
    out.c_[0] = lhs.c_[0] * rhs.c_[0];
    return out;
  }
  assert(lhs.dim_ == rhs.dim_);
  Jet out(lhs.dim_, order);
  for (const auto& p : MonomialTable::get(lhs.dim_).products(order)) {
    out.c_[p.out] += lhs.c_[p.lhs] * rhs.c_[p.rhs];
  }
  return out;
}

Jet& Jet::operator/=(const Jet& rhs) {
  const double v = rhs.value();
  const double d[4] = {1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v)};
  return *this *= compose(rhs, d);
}

Jet operator/(double lhs, const Jet& rhs) {
  const double v = rhs.value();
  const double d[4] = {1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v)};
  return compose(rhs, d) * lhs;
}

Jet compose(const Jet& x, std::span<const double> derivatives) {
  const int order = std::min<int>(x.order(), static_cast<int>(derivatives.size()) - 1);
  Jet p = x.truncated(order);
  p.coefficient(0) = 0.0;
  // Horner in the nilpotent part: sum_k F^(k)/k! p^k.
  static constexpr double kInvFactorial[4] = {1.0, 1.0, 0.5, 1.0 / 6.0};
  Jet out = Jet::constant(x.dim(), order, derivatives[order] * kInvFactorial[order]);
  for (int k = order - 1; k >= 0; --k) {
    out = out * p;
    out.coefficient(0) += derivatives[k] * kInvFactorial[k];
  }
  return out;
}

Jet sin(const Jet& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const double d[4] = {s, c, -s, -c};
  return compose(x, d);
}

Jet cos(const Jet& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const double d[4] = {c, -s, -c, s};
  return compose(x, d);
}

Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  const double d[4] = {e, e, e, e};
  return compose(x, d);
}

Jet log(const Jet& x) {
  const double v = x.value();
  const double d[4] = {std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)};
  return compose(x, d);
}

Jet sqrt(const Jet& x) {
  const double v = x.value();
  const double r = std::sqrt(v);
  const double d[4] = {r, 0.5 / r, -0.25 / (r * v), 0.375 / (r * v * v)};
  return compose(x, d);
}

Jet pow(const Jet& x, double exponent) {
  const double v = x.value();
  const double a = exponent;
  const double d[4] = {std::pow(v, a), a * std::pow(v, a - 1), a * (a - 1) * std::pow(v, a - 2),
                       a * (a - 1) * (a - 2) * std::pow(v, a - 3)};
  return compose(x, d);
}

Jet square(const Jet& x) { return x * x; }

}  // namespace twistorlab
