#include "twistorlab/forms.hpp"

#include <string>

namespace twistorlab {

namespace {

void check_shape(const Tensor<Jet>& t, int dim, const std::vector<Slot>& slots, const std::string& label) {
  if (t.dim() != dim) throw ValenceError(label + ": evaluator returned the wrong dimension");
  if (t.slots() != slots) throw ValenceError(label + ": evaluator returned the wrong valence");
}

void check_alternating(const Tensor<Jet>& t, const std::string& label) {
  std::vector<int> idx(t.rank());
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.unflat(f, idx);
    for (int a = 0; a < t.rank(); ++a) {
      for (int b = a + 1; b < t.rank(); ++b) {
        std::swap(idx[a], idx[b]);
        const double swapped = t.at(idx).value();
        std::swap(idx[a], idx[b]);
        if (t[f].value() + swapped != 0.0) throw ValenceError(label + ": form is not alternating");
      }
    }
  }
}

Jet zero_like(const Tensor<Jet>& t, int order) { return Jet::constant(t.dim(), std::max(order, 0), 0.0); }

// Contract slot 0 of `t` with x.
Tensor<double> contract_first(const Tensor<double>& t, std::span<const double> x) { return interior(x, t); }

}  // namespace

Tensor<Jet> evaluate(const TensorField& field, const PointGeometry& geometry) {
  Tensor<Jet> t = field.eval(geometry.coordinates());
  check_shape(t, geometry.dim(), field.slots, field.label);
  if (field.alternating) {
    detail::require_form(t, field.label.c_str());
    check_alternating(t, field.label);
  }
  return t;
}

Tensor<Jet> evaluate(const VectorField& field, const PointGeometry& geometry) {
  Tensor<Jet> t = field.eval(geometry.coordinates());
  check_shape(t, geometry.dim(), {Slot::Contra}, field.label);
  return t;
}

Jet evaluate(const ScalarField& field, const PointGeometry& geometry) { return field.eval(geometry.coordinates()); }

Tensor<Jet> covariant_derivative(const PointGeometry& geometry, const Tensor<Jet>& t) {
  const int n = t.dim();
  const int r = t.rank();
  if (t[0].order() < 1) throw OrderError("covariant derivative of an order-0 jet");
  const Tensor<Jet>& gamma = geometry.christoffel();
  std::vector<Slot> slots{Slot::Co};
  slots.insert(slots.end(), t.slots().begin(), t.slots().end());
  const int order = std::min(t[0].order() - 1, gamma[0].order());
  Tensor<Jet> out(n, slots, zero_like(t, order));
  std::vector<int> idx(r);
  const std::size_t block = t.size();
  for (int k = 0; k < n; ++k) {
    for (std::size_t f = 0; f < block; ++f) {
      Jet acc = t[f].derivative(k).truncated(order);
      t.unflat(f, idx);
      for (int s = 0; s < r; ++s) {
        const std::size_t stride = t.stride(s);
        const int a = idx[s];
        const std::size_t base = f - static_cast<std::size_t>(a) * stride;
        for (int m = 0; m < n; ++m) {
          if (t.slot(s) == Slot::Contra) {
            acc += gamma(a, k, m) * t[base + m * stride];
          } else {
            acc -= gamma(m, k, a) * t[base + m * stride];
          }
        }
      }
      out[k * block + f] = acc;
    }
  }
  return out;
}

Tensor<Jet> second_covariant_derivative(const PointGeometry& geometry, const Tensor<Jet>& t) {
  return covariant_derivative(geometry, covariant_derivative(geometry, t));
}

Tensor<Jet> exterior_derivative(const Tensor<Jet>& form) {
  detail::require_form(form, "exterior derivative");
  const int n = form.dim();
  const int p = form.rank();
  if (form[0].order() < 1) throw OrderError("exterior derivative of an order-0 jet");
  const int order = form[0].order() - 1;
  Tensor<Jet> out(n, std::vector<Slot>(p + 1, Slot::Co), zero_like(form, order));
  if (p + 1 > n) return out;
  // partials[k * size + f] = d_k form[f]
  std::vector<Jet> partials;
  partials.reserve(n * form.size());
  for (int k = 0; k < n; ++k)
    for (std::size_t f = 0; f < form.size(); ++f) partials.push_back(form[f].derivative(k));
  std::vector<int> idx(p + 1), rest(p);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflat(f, idx);
    Jet acc = zero_like(form, order);
    for (int s = 0; s <= p; ++s) {
      for (int q = 0, w = 0; q <= p; ++q) {
        if (q != s) rest[w++] = idx[q];
      }
      const Jet& term = partials[idx[s] * form.size() + form.flat(rest)];
      if (s % 2 == 0) {
        acc += term;
      } else {
        acc -= term;
      }
    }
    out[f] = acc;
  }
  return out;
}

Tensor<Jet> codifferential(const PointGeometry& geometry, const Tensor<Jet>& form) {
  detail::require_form(form, "codifferential");
  if (form.rank() < 1) throw ValenceError("codifferential of a 0-form");
  const int n = form.dim();
  const Tensor<Jet> nabla = covariant_derivative(geometry, form);
  const Tensor<Jet>& ginv = geometry.inverse_metric();
  std::vector<Slot> slots(form.slots().begin() + 1, form.slots().end());
  const int order = nabla[0].order();
  Tensor<Jet> out(n, slots, zero_like(form, order));
  const std::size_t block = out.size();
  for (std::size_t f = 0; f < block; ++f) {
    Jet acc = zero_like(form, order);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) acc -= ginv(a, b) * nabla[(a * n + b) * block + f];
    out[f] = acc;
  }
  return out;
}

Tensor<Jet> differential(const Jet& f) {
  const int n = f.dim();
  Tensor<Jet> out(n, {Slot::Co}, Jet::constant(n, std::max(f.order() - 1, 0), 0.0));
  for (int i = 0; i < n; ++i) out[i] = f.derivative(i);
  return out;
}

Tensor<Jet> flat(const PointGeometry& geometry, const Tensor<Jet>& vector) {
  if (vector.slots() != std::vector<Slot>{Slot::Contra}) throw ValenceError("flat expects a vector");
  const int n = vector.dim();
  const Tensor<Jet>& g = geometry.metric();
  Tensor<Jet> out(n, {Slot::Co}, zero_like(vector, 0));
  for (int i = 0; i < n; ++i) {
    Jet acc = g(i, 0) * vector[0];
    for (int j = 1; j < n; ++j) acc += g(i, j) * vector[j];
    out[i] = acc;
  }
  return out;
}

Tensor<Jet> sharp(const PointGeometry& geometry, const Tensor<Jet>& one_form) {
  if (one_form.slots() != std::vector<Slot>{Slot::Co}) throw ValenceError("sharp expects a 1-form");
  const int n = one_form.dim();
  const Tensor<Jet>& ginv = geometry.inverse_metric();
  Tensor<Jet> out(n, {Slot::Contra}, zero_like(one_form, 0));
  for (int i = 0; i < n; ++i) {
    Jet acc = ginv(i, 0) * one_form[0];
    for (int j = 1; j < n; ++j) acc += ginv(i, j) * one_form[j];
    out[i] = acc;
  }
  return out;
}

Jet metric_inner(const PointGeometry& geometry, const Tensor<Jet>& a, const Tensor<Jet>& b, double divisor) {
  if (a.slots() != b.slots()) throw ValenceError("metric_inner needs tensors of equal valence");
  detail::require_form(a, "metric_inner");
  const int n = a.dim();
  const Tensor<Jet>& ginv = geometry.inverse_metric();
  Tensor<Jet> raised = b;
  for (int s = 0; s < b.rank(); ++s) {
    Tensor<Jet> next = raised;
    const std::size_t stride = raised.stride(s);
    std::vector<int> idx(b.rank());
    for (std::size_t f = 0; f < raised.size(); ++f) {
      raised.unflat(f, idx);
      const int i = idx[s];
      const std::size_t base = f - static_cast<std::size_t>(i) * stride;
      Jet acc = ginv(i, 0) * raised[base];
      for (int j = 1; j < n; ++j) acc += ginv(i, j) * raised[base + j * stride];
      next[f] = acc;
    }
    raised = std::move(next);
  }
  Jet acc = a[0] * raised[0];
  for (std::size_t f = 1; f < a.size(); ++f) acc += a[f] * raised[f];
  return acc / divisor;
}

Tensor<double> exterior_derivative(const PointGeometry& geometry, const TensorField& form) {
  return values(exterior_derivative(evaluate(form, geometry)));
}

Tensor<double> codifferential(const PointGeometry& geometry, const TensorField& form) {
  return values(codifferential(geometry, evaluate(form, geometry)));
}

Tensor<double> covariant_derivative(const PointGeometry& geometry, const TensorField& field,
                                    std::span<const double> x) {
  return contract_first(values(covariant_derivative(geometry, evaluate(field, geometry))), x);
}

Tensor<double> second_covariant_derivative(const PointGeometry& geometry, const TensorField& field,
                                           std::span<const double> x, std::span<const double> y) {
  const Tensor<double> full = values(second_covariant_derivative(geometry, evaluate(field, geometry)));
  return contract_first(contract_first(full, x), y);
}

OneFormLaplacians laplacians_on_1forms(const PointGeometry& geometry, const Tensor<Jet>& one_form) {
  if (one_form.slots() != std::vector<Slot>{Slot::Co}) throw ValenceError("expected a 1-form");
  if (one_form[0].order() < 3 || geometry.order() < 3) throw OrderError("1-form Laplacians need order-3 jets");
  const int n = one_form.dim();
  const Tensor<double> hess = values(second_covariant_derivative(geometry, one_form));
  const Eigen::MatrixXd& ginv = geometry.frame().inverse_metric;
  OneFormLaplacians out{Tensor<double>(n, {Slot::Co}, 0.0), Tensor<double>(n, {Slot::Co}, 0.0)};
  for (int c = 0; c < n; ++c) {
    double acc = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) acc -= ginv(a, b) * hess(a, b, c);
    out.rough[c] = acc;
  }
  const Tensor<Jet> delta = codifferential(geometry, one_form);
  const Tensor<double> d_delta = values(exterior_derivative(delta));
  const Tensor<double> delta_d = values(codifferential(geometry, exterior_derivative(one_form)));
  for (int c = 0; c < n; ++c) out.hodge[c] = d_delta[c] + delta_d[c];
  return out;
}

OneFormLaplacians laplacians_on_1forms(const PointGeometry& geometry, const TensorField& one_form) {
  return laplacians_on_1forms(geometry, evaluate(one_form, geometry));
}

}  // namespace twistorlab
