#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace twistorlab {

inline constexpr int kMaxJetDim = 6;
inline constexpr int kMaxJetOrder = 3;
// Number of monomials of degree <= 3 in 6 variables.
inline constexpr int kMaxJetTerms = 84;

/// Layout of the monomials of degree <= kMaxJetOrder in `dim` variables.
///
/// Monomials are graded: every monomial of degree k comes after all monomials
/// of degree < k, so truncating a jet to order k keeps a prefix of its
/// coefficient array.
class MonomialTable {
 public:
  struct Product {
    std::uint8_t lhs;
    std::uint8_t rhs;
    std::uint8_t out;
  };

  static const MonomialTable& get(int dim);

  int dim() const { return dim_; }
  /// Number of monomials of degree <= order.
  int count(int order) const { return count_[order]; }
  int degree(int index) const { return degree_[index]; }
  const std::array<std::uint8_t, kMaxJetDim>& exponents(int index) const { return exps_[index]; }
  /// Index of (monomial * x_axis), or -1 if that exceeds the maximum order.
  int raise(int index, int axis) const { return raise_[index][axis]; }
  /// Index of the monomial with the given exponents, or -1.
  int find(std::span<const int> exponents) const;
  /// All coefficient products whose output degree is <= order.
  std::span<const Product> products(int order) const {
    return {products_.data(), static_cast<std::size_t>(product_count_[order])};
  }

 private:
  explicit MonomialTable(int dim);

  int dim_;
  std::array<int, kMaxJetOrder + 1> count_{};
  std::vector<std::array<std::uint8_t, kMaxJetDim>> exps_;
  std::vector<int> degree_;
  std::vector<std::array<int, kMaxJetDim>> raise_;
  std::vector<Product> products_;
  std::array<int, kMaxJetOrder + 1> product_count_{};
};

/// Truncated multivariate Taylor expansion of a scalar function around a
/// chart point, in all chart directions, up to `order` (0..3).
///
/// Coefficients are stored in monomial form: f(x + h) = sum_a c_a h^a, so a
/// partial derivative is the coefficient times the multi-index factorial.
/// Arithmetic between jets of different order truncates to the smaller one.
class Jet {
 public:
  Jet() = default;

  static Jet constant(int dim, int order, double value);
  /// The coordinate function x_axis expanded around `value`.
  static Jet variable(int dim, int order, double value, int axis);

  int dim() const { return dim_; }
  int order() const { return order_; }
  double value() const { return c_[0]; }

  double coefficient(int index) const { return c_[index]; }
  double& coefficient(int index) { return c_[index]; }
  /// Plain partial derivative at the expansion point for a multi-index.
  double partial(std::span<const int> multi_index) const;
  /// First partial derivative at the expansion point.
  double gradient(int axis) const;

  /// Expansion of the partial derivative along `axis`; one order lower.
  /// Throws OrderError on an order-0 jet.
  Jet derivative(int axis) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs) { c_[0] += rhs; return *this; }
  Jet& operator-=(double rhs) { c_[0] -= rhs; return *this; }
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs) { return *this *= 1.0 / rhs; }

  Jet operator-() const;

  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(const Jet& lhs, const Jet& rhs);
  friend Jet operator/(const Jet& lhs, const Jet& rhs) { Jet out = lhs; return out /= rhs; }
  friend Jet operator+(Jet lhs, double rhs) { return lhs += rhs; }
  friend Jet operator+(double lhs, Jet rhs) { return rhs += lhs; }
  friend Jet operator-(Jet lhs, double rhs) { return lhs -= rhs; }
  friend Jet operator-(double lhs, const Jet& rhs) { Jet out = -rhs; return out += lhs; }
  friend Jet operator*(Jet lhs, double rhs) { return lhs *= rhs; }
  friend Jet operator*(double lhs, Jet rhs) { return rhs *= lhs; }
  friend Jet operator/(Jet lhs, double rhs) { return lhs /= rhs; }
  friend Jet operator/(double lhs, const Jet& rhs);

  /// Number of meaningful coefficients (monomials of degree <= order).
  int size() const;

 private:
  Jet(int dim, int order) : dim_(static_cast<std::uint8_t>(dim)), order_(static_cast<std::uint8_t>(order)) {}

  std::uint8_t dim_ = 1;
  std::uint8_t order_ = 0;
  std::array<double, kMaxJetTerms> c_{};
};

/// F(x) for a univariate F given its derivatives F^(k)(x.value()), k = 0..order.
Jet compose(const Jet& x, std::span<const double> derivatives);

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double exponent);
Jet square(const Jet& x);

}  // namespace twistorlab
