#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

#include "twistorlab/jet.hpp"

namespace twistorlab {

/// Index position of one tensor slot.
enum class Slot : std::uint8_t { Co, Contra };

/// Dense component array of a (p,q)-tensor on an n-dimensional chart.
///
/// Components are stored row-major over all slots, so T(i0, i1, ...) sits at
/// sum_k i_k n^(rank-1-k). `S` is `double` for point values and `Jet` for
/// fields expanded around a point.
template <class S>
class Tensor {
 public:
  static constexpr int kMaxRank = 6;

  Tensor() = default;
  Tensor(int dim, std::vector<Slot> slots, const S& fill)
      : dim_(dim), slots_(std::move(slots)), data_(ipow(dim, static_cast<int>(slots_.size())), fill) {}

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(slots_.size()); }
  const std::vector<Slot>& slots() const { return slots_; }
  Slot slot(int k) const { return slots_[k]; }
  std::size_t size() const { return data_.size(); }

  S& operator[](std::size_t flat) { return data_[flat]; }
  const S& operator[](std::size_t flat) const { return data_[flat]; }

  template <class... I>
  S& operator()(I... idx) {
    return data_[flat_of(idx...)];
  }
  template <class... I>
  const S& operator()(I... idx) const {
    return data_[flat_of(idx...)];
  }

  S& at(std::span<const int> idx) { return data_[flat(idx)]; }
  const S& at(std::span<const int> idx) const { return data_[flat(idx)]; }

  std::size_t flat(std::span<const int> idx) const {
    assert(static_cast<int>(idx.size()) == rank());
    std::size_t f = 0;
    for (int i : idx) f = f * dim_ + static_cast<std::size_t>(i);
    return f;
  }

  void unflat(std::size_t f, std::span<int> idx) const {
    for (int k = rank() - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(f % dim_);
      f /= dim_;
    }
  }

  std::span<S> data() { return data_; }
  std::span<const S> data() const { return data_; }

  /// Stride of slot k in the flat layout.
  std::size_t stride(int k) const { return ipow(dim_, rank() - 1 - k); }

 private:
  static std::size_t ipow(int base, int exp) {
    std::size_t out = 1;
    for (int k = 0; k < exp; ++k) out *= static_cast<std::size_t>(base);
    return out;
  }

  template <class... I>
  std::size_t flat_of(I... idx) const {
    assert(static_cast<int>(sizeof...(I)) == rank());
    std::size_t f = 0;
    ((f = f * dim_ + static_cast<std::size_t>(idx)), ...);
    return f;
  }

  int dim_ = 0;
  std::vector<Slot> slots_;
  std::vector<S> data_;
};

/// Values at the expansion point.
inline Tensor<double> values(const Tensor<Jet>& t) {
  Tensor<double> out(t.dim(), t.slots(), 0.0);
  for (std::size_t f = 0; f < t.size(); ++f) out[f] = t[f].value();
  return out;
}

/// Largest absolute component.
inline double max_abs(const Tensor<double>& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, v < 0 ? -v : v);
  return m;
}

}  // namespace twistorlab
