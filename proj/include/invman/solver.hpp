#pragma once

// Order-by-order solution of the invariance equations for the stable and
// unstable parametrisations, and the normal-form tail G of the pulled-back
// field.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "invman/errors.hpp"
#include "invman/series.hpp"
#include "invman/spectrum.hpp"

namespace invman {

// Cauchy data for a non-polynomial nonlinearity: sup |F| <= sup_norm on the
// polydisc of the given radius.
struct AnalyticBound {
  double radius = 0.0;
  double sup_norm = 0.0;
};

// z' = Lambda z + F(z), with F given by its Taylor polynomial.
template <Scalar T>
struct VectorField {
  Spectrum<T> spectrum;
  SeriesVector<T> nonlinearity;
  std::optional<AnalyticBound> analytic;

  [[nodiscard]] std::size_t dim() const { return spectrum.dim(); }

  [[nodiscard]] int degree() const {
    int deg = 0;
    for (const auto& s : nonlinearity) deg = std::max(deg, s.max_order());
    return deg;
  }
};

template <Scalar T>
VectorField<T> make_vector_field(Spectrum<T> spectrum, SeriesVector<T> nonlinearity,
                                 std::optional<AnalyticBound> analytic = std::nullopt) {
  const std::size_t d = spectrum.dim();
  if (nonlinearity.size() != d)
    throw DimensionMismatch("vector field: expected " + std::to_string(d) + " components");
  for (const auto& s : nonlinearity) {
    if (s.dim() != d) throw DimensionMismatch("vector field: component series has wrong dimension");
    if (!s.empty() && s.min_order() < 2) throw ValidationError("vector field: F must have no terms of order < 2");
  }
  if (analytic && !(analytic->radius > 0.0 && analytic->sup_norm >= 0.0))
    throw ValidationError("vector field: analytic bound needs radius > 0 and sup norm >= 0");
  return VectorField<T>{std::move(spectrum), std::move(nonlinearity), analytic};
}

enum class Side { Stable, Unstable };

inline std::string_view side_name(Side s) { return s == Side::Stable ? "stable" : "unstable"; }

// phi (stable side) or psi (unstable side): d component series in the full
// zeta variables, supported on V_s resp. V_u, orders 2 .. order.
template <Scalar T>
struct ManifoldParam {
  Side side = Side::Stable;
  int order = 0;
  std::size_t stable_dim = 0;
  SeriesVector<T> components;

  [[nodiscard]] std::size_t dim() const { return components.size(); }
  [[nodiscard]] std::size_t parameter_dim() const {
    return side == Side::Stable ? stable_dim : dim() - stable_dim;
  }
  // First zeta coordinate carrying the parameter.
  [[nodiscard]] std::size_t parameter_offset() const { return side == Side::Stable ? 0 : stable_dim; }
  [[nodiscard]] IndexClass index_class() const {
    return side == Side::Stable ? IndexClass::StableOnly : IndexClass::UnstableOnly;
  }

  [[nodiscard]] T coefficient(std::size_t i, const MultiIndex& m) const { return components.at(i).coeff(m); }

  // (t, 0) + phi(t), or (0, t) + psi(t), as series in zeta.
  [[nodiscard]] SeriesVector<T> embedding() const {
    SeriesVector<T> out = components;
    const std::size_t d = dim();
    for (std::size_t j = 0; j < parameter_dim(); ++j) {
      const std::size_t c = parameter_offset() + j;
      out[c].add(MultiIndex::unit(d, c), T(1.0));
    }
    return out;
  }

  // Point on the parametrised manifold at parameter t.
  [[nodiscard]] std::vector<T> evaluate(std::span<const T> t) const {
    if (t.size() != parameter_dim()) throw DimensionMismatch("ManifoldParam::evaluate: parameter dimension");
    std::vector<T> zeta(dim(), T(0.0));
    for (std::size_t j = 0; j < t.size(); ++j) zeta[parameter_offset() + j] = t[j];
    std::vector<T> point(dim());
    for (std::size_t i = 0; i < dim(); ++i) point[i] = zeta[i] + invman::evaluate<T>(components[i], zeta);
    return point;
  }
};

template <Scalar T>
struct NormalFormTail {
  int order = 0;
  std::size_t stable_dim = 0;
  SeriesVector<T> components;  // keys in U only
};

namespace detail {

template <Scalar T>
void check_order(const VectorField<T>& vf, int n1) {
  const int needed = std::max(2, vf.spectrum.resonance_order);
  if (n1 < needed)
    throw OrderTooSmall("order " + std::to_string(n1) + " is below the required minimum " + std::to_string(needed));
}

template <Scalar T>
T divide_by_divisor(const T& numerator, const T& divisor) {
  if (contains_zero(divisor)) throw InconclusiveInterval("small divisor interval contains zero");
  return numerator / divisor;
}

template <Scalar T>
ManifoldParam<T> solve_side(const VectorField<T>& vf, int n1, Side side) {
  check_order(vf, n1);
  const std::size_t d = vf.dim();
  ManifoldParam<T> p;
  p.side = side;
  p.order = n1;
  p.stable_dim = vf.spectrum.stable_dim();
  p.components.assign(d, PolySeries<T>(d, n1));

  const IndexClass cls = p.index_class();
  IncrementalComposition<T> composition(vf.nonlinearity, d);
  SeriesVector<T> inner = p.embedding();
  for (int k = 2; k <= n1; ++k) {
    const SeriesVector<T> numerators = composition.advance(inner);
    for (std::size_t i = 0; i < d; ++i) {
      for (const auto& [m, c] : numerators[i]) {
        if (classify(m, p.stable_dim) != cls)
          throw std::logic_error("solver: composition left the invariant index slice");
        const T a = divide_by_divisor(c, small_divisor(vf.spectrum, m, i));
        p.components[i].set(m, a);
        inner[i].set(m, a);
      }
    }
  }
  return p;
}

}  // namespace detail

// alpha_{i,m_s} = [F_i((xi, 0) + phi^[k-1](xi))]_{m_s} / (m_s . lambda - (lambda, mu)_i)
template <Scalar T>
ManifoldParam<T> solve_stable(const VectorField<T>& vf, int n1) {
  return detail::solve_side(vf, n1, Side::Stable);
}

// beta_{i,m_u} = [F_i((0, eta) + psi^[k-1](eta))]_{m_u} / (m_u . mu - (lambda, mu)_i)
template <Scalar T>
ManifoldParam<T> solve_unstable(const VectorField<T>& vf, int n1) {
  return detail::solve_side(vf, n1, Side::Unstable);
}

// L phi - [F((xi,0) + phi)]_{V_s} (resp. the unstable mirror), truncated at
// the parametrisation order. Recomputes the composition directly, not
// through the incremental route the solver uses.
template <Scalar T>
SeriesVector<T> invariance_residual(const VectorField<T>& vf, const ManifoldParam<T>& p) {
  const std::size_t d = vf.dim();
  if (p.dim() != d) throw DimensionMismatch("invariance_residual: parametrisation dimension");
  SeriesVector<T> inner = p.embedding();
  for (auto& s : inner) s = truncate(s, p.order);
  const SeriesVector<T> image = filter(compose_truncated(vf.nonlinearity, inner, p.order), p.index_class(), p.stable_dim);
  SeriesVector<T> residual;
  residual.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    PolySeries<T> r(d, p.order);
    for (const auto& [m, a] : p.components[i]) r.add(m, small_divisor(vf.spectrum, m, i) * a);
    r -= image[i];
    residual.push_back(std::move(r));
  }
  return residual;
}

// Mixed-index tail of the pulled-back field:
//   g_m = [ [F(Theta)]_U - D(phi + psi) G^[|m|-1] ]_m,  m in U, |m| <= n.
template <Scalar T>
NormalFormTail<T> normal_form_tail(const VectorField<T>& vf, const ManifoldParam<T>& phi,
                                   const ManifoldParam<T>& psi, int n) {
  if (phi.side != Side::Stable || psi.side != Side::Unstable)
    throw std::invalid_argument("normal_form_tail: expects (stable, unstable) parametrisations");
  if (n < 2) throw OrderTooSmall("normal_form_tail: order must be at least 2");
  if (phi.order < n || psi.order < n)
    throw OrderTooSmall("normal_form_tail: parametrisations are computed only to order " +
                        std::to_string(std::min(phi.order, psi.order)));
  const std::size_t d = vf.dim();
  const std::size_t ds = vf.spectrum.stable_dim();

  SeriesVector<T> theta(d, PolySeries<T>(d, n));
  SeriesVector<T> shift(d, PolySeries<T>(d, n));
  for (std::size_t i = 0; i < d; ++i) {
    shift[i] = truncate(phi.components[i], n) + truncate(psi.components[i], n);
    theta[i] = shift[i];
    theta[i].add(MultiIndex::unit(d, i), T(1.0));
  }
  const SeriesVector<T> mixed = filter(compose_truncated(vf.nonlinearity, theta, n), IndexClass::Mixed, ds);

  std::vector<SeriesVector<T>> jacobian(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) jacobian[i].push_back(differentiate(shift[i], j));

  NormalFormTail<T> g{n, ds, SeriesVector<T>(d, PolySeries<T>(d, n))};
  for (int k = 2; k <= n; ++k) {
    SeriesVector<T> next;
    next.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
      PolySeries<T> part = mixed[i].homogeneous_part(k);
      for (std::size_t j = 0; j < d; ++j) part -= multiply_order(jacobian[i][j], g.components[j], k);
      next.push_back(std::move(part));
    }
    for (std::size_t i = 0; i < d; ++i)
      for (const auto& [m, c] : next[i]) {
        if (classify(m, ds) != IndexClass::Mixed) throw std::logic_error("normal_form_tail: non-mixed term");
        g.components[i].set(m, c);
      }
  }
  return g;
}

// D Theta (Lambda zeta + G) - Lambda Theta - F(Theta), truncated at order n.
// Vanishes through order n when phi, psi and G solve the invariance and
// normal-form equations.
template <Scalar T>
SeriesVector<T> pullback_residual(const VectorField<T>& vf, const ManifoldParam<T>& phi,
                                  const ManifoldParam<T>& psi, const NormalFormTail<T>& g) {
  const int n = g.order;
  const std::size_t d = vf.dim();
  SeriesVector<T> theta(d, PolySeries<T>(d, n));
  SeriesVector<T> pulled(d, PolySeries<T>(d, n));  // Lambda zeta + G
  for (std::size_t i = 0; i < d; ++i) {
    theta[i] = truncate(phi.components[i], n) + truncate(psi.components[i], n);
    theta[i].add(MultiIndex::unit(d, i), T(1.0));
    pulled[i] = truncate(g.components[i], n);
    pulled[i].add(MultiIndex::unit(d, i), vf.spectrum.eigenvalue(i));
  }
  const SeriesVector<T> f_theta = compose_truncated(vf.nonlinearity, theta, n);
  SeriesVector<T> residual;
  residual.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    PolySeries<T> r(d, n);
    for (std::size_t j = 0; j < d; ++j) r += multiply(differentiate(theta[i], j), pulled[j], n);
    r -= theta[i] * vf.spectrum.eigenvalue(i);
    r -= f_theta[i];
    residual.push_back(std::move(r));
  }
  return residual;
}

}  // namespace invman
