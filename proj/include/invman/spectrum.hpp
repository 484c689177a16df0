#pragma once

// The diagonal linear part of a saddle, its non-resonance check and the
// uniform small-divisor constant Omega.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "invman/errors.hpp"
#include "invman/multi_index.hpp"
#include "invman/scalar.hpp"

namespace invman {

template <Scalar T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// Coordinates follow the diagonal diag(lambda_{d_s}, ..., lambda_1, mu_1, ..., mu_{d_u}),
// i.e. both eigenvalue lists are stored ascending.
template <Scalar T>
struct Spectrum {
  VectorX<T> stable;    // lambda_{d_s} <= ... <= lambda_1 < 0
  VectorX<T> unstable;  // 0 < mu_1 <= ... <= mu_{d_u}
  int resonance_order = 1;  // N
  T omega{0.0};

  [[nodiscard]] std::size_t stable_dim() const { return static_cast<std::size_t>(stable.size()); }
  [[nodiscard]] std::size_t unstable_dim() const { return static_cast<std::size_t>(unstable.size()); }
  [[nodiscard]] std::size_t dim() const { return stable_dim() + unstable_dim(); }

  // (lambda, mu)_i in coordinate order.
  [[nodiscard]] const T& eigenvalue(std::size_t i) const {
    const auto ds = stable_dim();
    return i < ds ? stable(static_cast<Eigen::Index>(i)) : unstable(static_cast<Eigen::Index>(i - ds));
  }

  [[nodiscard]] const T& lambda_1() const { return stable(stable.size() - 1); }
  [[nodiscard]] const T& lambda_ds() const { return stable(0); }
  [[nodiscard]] const T& mu_1() const { return unstable(0); }
  [[nodiscard]] const T& mu_du() const { return unstable(unstable.size() - 1); }
};

// Eigenvalue labels as written in the system: coordinate j < d_s carries
// lambda_{d_s - j}, coordinate d_s + j carries mu_{j + 1}.
inline std::string eigenvalue_label(std::size_t coordinate, std::size_t stable_dim) {
  if (coordinate < stable_dim) return "lambda_" + std::to_string(stable_dim - coordinate);
  return "mu_" + std::to_string(coordinate - stable_dim + 1);
}

template <Scalar T>
T dot(const MultiIndex& m, const Spectrum<T>& s) {
  T acc(0.0);
  for (std::size_t j = 0; j < m.dim(); ++j)
    if (m[j] != 0) acc += T(static_cast<double>(m[j])) * s.eigenvalue(j);
  return acc;
}

// m . (lambda, mu) - (lambda, mu)_i for m in V_s or V_u.
template <Scalar T>
T small_divisor(const Spectrum<T>& s, const MultiIndex& m, std::size_t i) {
  if (m.dim() != s.dim()) throw DimensionMismatch("small_divisor: index dimension differs from spectrum");
  if (i >= s.dim()) throw std::out_of_range("small_divisor: component out of range");
  if (classify(m, s.stable_dim()) == IndexClass::Mixed)
    throw std::invalid_argument("small_divisor: no divisor for a mixed index");
  return dot(m, s) - s.eigenvalue(i);
}

// Omega(k) = min(|k lambda_1 - lambda_{d_s}|, |k mu_1 - mu_{d_u}|).
template <Scalar T>
T omega_of(const Spectrum<T>& s, int k) {
  using std::abs;
  using std::min;
  const T kk(static_cast<double>(k));
  return min(abs(kk * s.lambda_1() - s.lambda_ds()), abs(kk * s.mu_1() - s.mu_du()));
}

namespace detail {

// ceil(a / b) for same-signed a, b, rounded up when the quotient is enclosed.
template <Scalar T>
int ceil_ratio(const T& a, const T& b) {
  const T q = a / b;
  return static_cast<int>(std::ceil(upper(q)));
}

// Calls fn(m, dot) for every index of the given order supported on
// coordinates [first, first + count) of a d-dimensional index.
template <Scalar T>
void for_each_slice_index(const Spectrum<T>& s, std::size_t first, std::size_t count, int order,
                          const std::function<void(const MultiIndex&, const T&)>& fn) {
  const std::size_t d = s.dim();
  for_each_index_of_order(count, order, [&](const MultiIndex& sub) {
    MultiIndex m(d);
    for (std::size_t j = 0; j < count; ++j) m[first + j] = sub[j];
    fn(m, dot(m, s));
  });
}

inline std::string relation_text(const MultiIndex& m, std::size_t i, std::size_t stable_dim) {
  std::ostringstream os;
  bool first = true;
  // highest label first reads naturally: 2*lambda_1 = lambda_2
  for (std::size_t j = m.dim(); j-- > 0;) {
    if (m[j] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (m[j] != 1) os << m[j] << '*';
    os << eigenvalue_label(j, stable_dim);
  }
  os << " = " << eigenvalue_label(i, stable_dim);
  return os.str();
}

// Checks m . v != v_i for 2 <= |m| <= max_order on one side.
template <Scalar T>
void check_side(const Spectrum<T>& s, std::size_t first, std::size_t count, int max_order) {
  for (int k = 2; k <= max_order; ++k) {
    for_each_slice_index<T>(s, first, count, k, [&](const MultiIndex& m, const T& mdot) {
      for (std::size_t i = first; i < first + count; ++i) {
        const T diff = mdot - s.eigenvalue(i);
        if (is_point_zero(diff)) {
          throw ResonanceDetected(m.exponents(), i,
                                  "resonance detected: " + relation_text(m, i, s.stable_dim()));
        }
        if (contains_zero(diff)) {
          throw InconclusiveInterval("cannot exclude resonance " + relation_text(m, i, s.stable_dim()));
        }
      }
    });
  }
}

}  // namespace detail

template <Scalar T>
T omega_global(const Spectrum<T>& s, int safety_order = 200);

// Validates ordering and signs, checks finite rational independence of both
// eigenvalue lists up to the orders ceil(lambda_{d_s}/lambda_1) and
// ceil(mu_{d_u}/mu_1), and fills in N and Omega.
template <Scalar T>
Spectrum<T> verify_spectrum(std::span<const double> lambda, std::span<const double> mu, int safety_order = 200) {
  if (lambda.empty() || mu.empty()) throw SignViolation("spectrum needs at least one stable and one unstable eigenvalue");
  for (double v : lambda)
    if (!std::isfinite(v) || !(v < 0.0)) throw SignViolation("stable eigenvalues must be finite and negative");
  for (double v : mu)
    if (!std::isfinite(v) || !(v > 0.0)) throw SignViolation("unstable eigenvalues must be finite and positive");
  if (!std::is_sorted(lambda.begin(), lambda.end()))
    throw OrderingViolation("stable eigenvalues must be listed ascending (lambda_{d_s} <= ... <= lambda_1)");
  if (!std::is_sorted(mu.begin(), mu.end()))
    throw OrderingViolation("unstable eigenvalues must be listed ascending (mu_1 <= ... <= mu_{d_u})");

  Spectrum<T> s;
  s.stable.resize(static_cast<Eigen::Index>(lambda.size()));
  s.unstable.resize(static_cast<Eigen::Index>(mu.size()));
  for (std::size_t i = 0; i < lambda.size(); ++i) s.stable(static_cast<Eigen::Index>(i)) = T(lambda[i]);
  for (std::size_t i = 0; i < mu.size(); ++i) s.unstable(static_cast<Eigen::Index>(i)) = T(mu[i]);

  const int stable_order = detail::ceil_ratio(s.lambda_ds(), s.lambda_1());
  const int unstable_order = detail::ceil_ratio(s.mu_du(), s.mu_1());
  s.resonance_order = std::max(stable_order, unstable_order);

  detail::check_side(s, 0, s.stable_dim(), stable_order);
  detail::check_side(s, s.stable_dim(), s.unstable_dim(), unstable_order);

  s.omega = omega_global(s, safety_order);
  return s;
}

// Uniform bound |m . (lambda, mu) - nu| >= Omega |m| over m in V, |m| >= 2.
// Uses N_eff = max(N, 2): the explicit minimum over 2 <= |m| < N_eff joined
// with Omega(N_eff) / N_eff, then lowered further by every ratio enumerated
// up to `safety_order`.
template <Scalar T>
T omega_global(const Spectrum<T>& s, int safety_order) {
  using std::min;
  const int n_eff = std::max(s.resonance_order, 2);
  T omega = omega_of(s, n_eff) / T(static_cast<double>(n_eff));
  const int top = std::max(n_eff - 1, safety_order);
  const std::size_t d = s.dim();
  for (int k = 2; k <= top; ++k) {
    const T kk(static_cast<double>(k));
    auto visit = [&](const MultiIndex&, const T& mdot) {
      for (std::size_t i = 0; i < d; ++i) {
        using std::abs;
        omega = min(omega, abs(mdot - s.eigenvalue(i)) / kk);
      }
    };
    detail::for_each_slice_index<T>(s, 0, s.stable_dim(), k, visit);
    detail::for_each_slice_index<T>(s, s.stable_dim(), s.unstable_dim(), k, visit);
  }
  if (!(lower(omega) > 0.0)) throw NonpositiveOmega("uniform small-divisor bound is not positive");
  return omega;
}

}  // namespace invman
