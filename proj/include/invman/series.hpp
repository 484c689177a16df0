#pragma once

// Truncated multivariate power series over a scalar T (double or Interval).
//
// A PolySeries is scalar valued; vector-valued maps (F, phi, psi, G) are
// SeriesVector<T>, one series per component. Storage is a sparse map in
// graded order, absent keys are zero, and no key exceeds the truncation
// order.

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "invman/errors.hpp"
#include "invman/multi_index.hpp"
#include "invman/scalar.hpp"

namespace invman {

template <Scalar T>
class PolySeries {
 public:
  using Map = std::map<MultiIndex, T, GradedLess>;
  using const_iterator = typename Map::const_iterator;

  explicit PolySeries(std::size_t dim = 1, int order = 0) : dim_(dim), order_(order) {}

  // The coordinate function z_j.
  static PolySeries variable(std::size_t dim, std::size_t j, int order) {
    PolySeries s(dim, order);
    if (order >= 1) s.set(MultiIndex::unit(dim, j), T(1.0));
    return s;
  }

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] const Map& terms() const { return terms_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] const_iterator begin() const { return terms_.begin(); }
  [[nodiscard]] const_iterator end() const { return terms_.end(); }

  [[nodiscard]] T coeff(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? T(0.0) : it->second;
  }

  void set(const MultiIndex& m, const T& value) {
    check_key(m);
    terms_.insert_or_assign(m, value);
  }

  void add(const MultiIndex& m, const T& value) {
    check_key(m);
    auto [it, inserted] = terms_.try_emplace(m, value);
    if (!inserted) it->second += value;
  }

  // Keys of exactly order k, as an iterator range.
  [[nodiscard]] std::pair<const_iterator, const_iterator> order_range(int k) const {
    if (k < 0) return {terms_.end(), terms_.end()};
    return {terms_.lower_bound(first_of_order(dim_, k)), terms_.lower_bound(first_of_order(dim_, k + 1))};
  }

  [[nodiscard]] PolySeries homogeneous_part(int k) const {
    PolySeries out(dim_, k);
    auto [first, last] = order_range(k);
    out.terms_.insert(first, last);
    return out;
  }

  // Lowest / highest order present; -1 for the zero series.
  [[nodiscard]] int min_order() const { return terms_.empty() ? -1 : terms_.begin()->first.order(); }
  [[nodiscard]] int max_order() const { return terms_.empty() ? -1 : terms_.rbegin()->first.order(); }

  PolySeries& operator+=(const PolySeries& o) {
    check_dim(o);
    for (const auto& [m, c] : o.terms_)
      if (m.order() <= order_) add(m, c);
    return *this;
  }
  PolySeries& operator-=(const PolySeries& o) {
    check_dim(o);
    for (const auto& [m, c] : o.terms_)
      if (m.order() <= order_) add(m, -c);
    return *this;
  }
  PolySeries& operator*=(const T& s) {
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend PolySeries operator+(PolySeries a, const PolySeries& b) { return a += b; }
  friend PolySeries operator-(PolySeries a, const PolySeries& b) { return a -= b; }
  friend PolySeries operator*(PolySeries a, const T& s) { return a *= s; }
  friend PolySeries operator*(const T& s, PolySeries a) { return a *= s; }

  friend bool operator==(const PolySeries& a, const PolySeries& b) {
    return a.dim_ == b.dim_ && a.order_ == b.order_ && a.terms_ == b.terms_;
  }

 private:
  void check_key(const MultiIndex& m) const {
    if (m.dim() != dim_) throw DimensionMismatch("PolySeries: key dimension differs from series dimension");
    if (m.order() > order_) throw std::out_of_range("PolySeries: key order exceeds truncation order");
  }
  void check_dim(const PolySeries& o) const {
    if (o.dim_ != dim_) throw DimensionMismatch("PolySeries: dimension mismatch");
  }

  std::size_t dim_;
  int order_;
  Map terms_;
};

template <Scalar T>
using SeriesVector = std::vector<PolySeries<T>>;

template <Scalar T>
PolySeries<T> truncate(const PolySeries<T>& s, int n) {
  PolySeries<T> out(s.dim(), n);
  for (const auto& [m, c] : s)
    if (m.order() <= n) out.set(m, c);
  return out;
}

// Cauchy product, discarding every term of order > n.
template <Scalar T>
PolySeries<T> multiply(const PolySeries<T>& a, const PolySeries<T>& b, int n) {
  if (a.dim() != b.dim()) throw DimensionMismatch("multiply: dimension mismatch");
  PolySeries<T> out(a.dim(), n);
  for (const auto& [ma, ca] : a) {
    const int oa = ma.order();
    if (oa > n) break;
    for (const auto& [mb, cb] : b) {
      if (oa + mb.order() > n) break;
      out.add(ma + mb, ca * cb);
    }
  }
  return out;
}

// Order-k terms of a * b only.
template <Scalar T>
PolySeries<T> multiply_order(const PolySeries<T>& a, const PolySeries<T>& b, int k) {
  if (a.dim() != b.dim()) throw DimensionMismatch("multiply_order: dimension mismatch");
  PolySeries<T> out(a.dim(), k);
  const int lo = std::max(0, a.min_order());
  const int hi = std::min(k, a.max_order());
  for (int p = lo; p <= hi; ++p) {
    auto [af, al] = a.order_range(p);
    if (af == al) continue;
    auto [bf, bl] = b.order_range(k - p);
    for (auto ia = af; ia != al; ++ia)
      for (auto ib = bf; ib != bl; ++ib) out.add(ia->first + ib->first, ia->second * ib->second);
  }
  return out;
}

template <Scalar T>
PolySeries<T> differentiate(const PolySeries<T>& s, std::size_t j) {
  PolySeries<T> out(s.dim(), std::max(0, s.order() - 1));
  for (const auto& [m, c] : s) {
    if (m[j] == 0) continue;
    MultiIndex dm = m;
    dm[j] -= 1;
    out.set(dm, c * T(static_cast<double>(m[j])));
  }
  return out;
}

// Keeps exactly the terms whose index classifies into `cls`.
template <Scalar T>
PolySeries<T> filter(const PolySeries<T>& s, IndexClass cls, std::size_t stable_dim) {
  PolySeries<T> out(s.dim(), s.order());
  for (const auto& [m, c] : s)
    if (classify(m, stable_dim) == cls) out.set(m, c);
  return out;
}

template <Scalar T>
SeriesVector<T> filter(const SeriesVector<T>& v, IndexClass cls, std::size_t stable_dim) {
  SeriesVector<T> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(filter(s, cls, stable_dim));
  return out;
}

// z^m at a point, with z_j^e computed by repeated squaring.
template <Scalar T>
T monomial_value(const MultiIndex& m, std::span<const T> point) {
  T value(1.0);
  for (std::size_t j = 0; j < m.dim(); ++j)
    if (m[j] != 0) value *= pow(point[j], m[j]);
  return value;
}

template <Scalar T>
T evaluate(const PolySeries<T>& s, std::span<const T> point) {
  if (point.size() != s.dim()) throw DimensionMismatch("evaluate: point dimension mismatch");
  T sum(0.0);
  for (const auto& [m, c] : s) sum += c * monomial_value<T>(m, point);
  return sum;
}

// Naive interval evaluation: the result contains the range of s over the box.
template <Scalar T>
Interval eval_enclosure(const PolySeries<T>& s, std::span<const Interval> box) {
  if (box.size() != s.dim()) throw DimensionMismatch("eval_enclosure: box dimension mismatch");
  Interval sum(0.0);
  for (const auto& [m, c] : s) {
    Interval coeff;
    if constexpr (is_interval_v<T>)
      coeff = c;
    else
      coeff = Interval(c);
    sum += coeff * monomial_value<Interval>(m, box);
  }
  return sum;
}

template <Scalar T>
std::vector<Interval> eval_enclosure(const SeriesVector<T>& v, std::span<const Interval> box) {
  std::vector<Interval> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(eval_enclosure(s, box));
  return out;
}

namespace detail {

inline void check_composable(std::size_t outer_components, std::size_t outer_dim, std::size_t inner_size) {
  if (outer_dim != inner_size)
    throw DimensionMismatch("compose: outer dimension " + std::to_string(outer_dim) + " but " +
                            std::to_string(inner_size) + " inner components");
  (void)outer_components;
}

template <Scalar T>
void check_no_constant(const SeriesVector<T>& inner) {
  for (const auto& s : inner)
    if (!s.empty() && s.min_order() == 0) throw ConstantTermError("compose: inner series has a constant term");
}

}  // namespace detail

// F o inner, truncated at order n. Each monomial of F is evaluated by
// repeated truncated multiplication of cached powers of the inner components.
template <Scalar T>
SeriesVector<T> compose_truncated(const SeriesVector<T>& outer, const SeriesVector<T>& inner, int n) {
  if (outer.empty()) return {};
  detail::check_composable(outer.size(), outer.front().dim(), inner.size());
  detail::check_no_constant(inner);
  if (inner.empty()) throw DimensionMismatch("compose: empty inner map");
  const std::size_t dim = inner.front().dim();
  for (const auto& s : inner)
    if (s.dim() != dim) throw DimensionMismatch("compose: inner components of different dimension");

  // powers[j][e] = inner_j^e truncated at n
  std::vector<std::vector<PolySeries<T>>> powers(inner.size());
  auto power = [&](std::size_t j, int e) -> const PolySeries<T>& {
    auto& cache = powers[j];
    if (cache.empty()) {
      PolySeries<T> one(dim, n);
      one.set(MultiIndex(dim), T(1.0));
      cache.push_back(std::move(one));
    }
    while (static_cast<int>(cache.size()) <= e) cache.push_back(multiply(cache.back(), inner[j], n));
    return cache[static_cast<std::size_t>(e)];
  };

  SeriesVector<T> out;
  out.reserve(outer.size());
  for (const auto& component : outer) {
    PolySeries<T> acc(dim, n);
    for (const auto& [m, c] : component) {
      PolySeries<T> term(dim, n);
      term.set(MultiIndex(dim), c);
      for (std::size_t j = 0; j < m.dim(); ++j) {
        if (m[j] == 0) continue;
        term = multiply(term, power(j, m[j]), n);
        if (term.empty()) break;
      }
      acc += term;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

// Order-by-order composition F o inner for recursions in which the inner
// map grows one order at a time. F must have no terms of order < 2, so the
// order-k part of F o inner depends only on inner terms of order < k.
//
// Each monomial of F is a chain of products node = left * inner_j; every node
// caches its homogeneous parts, so step k costs only the order-k convolutions.
template <Scalar T>
class IncrementalComposition {
 public:
  IncrementalComposition(const SeriesVector<T>& outer, std::size_t dim) : outer_(outer), dim_(dim) {
    if (outer.empty()) return;
    detail::check_composable(outer.size(), outer.front().dim(), outer.front().dim());
    const std::size_t nvars = outer.front().dim();
    inner_parts_.resize(nvars);
    for (std::size_t j = 0; j < nvars; ++j) node_for(MultiIndex::unit(nvars, j));
    for (const auto& component : outer_) {
      for (const auto& [m, c] : component) {
        if (m.order() < 2) throw ValidationError("IncrementalComposition: outer map has terms of order < 2");
        node_for(m);
      }
    }
  }

  [[nodiscard]] int current_order() const { return order_; }

  // Advances to order k = current_order() + 1 and returns the order-k part of
  // each component of F o inner. `inner` must be complete through order k - 1;
  // its terms of order k - 1 are read now and cached.
  SeriesVector<T> advance(const SeriesVector<T>& inner) {
    const int k = ++order_;
    if (outer_.empty()) return {};
    if (inner.size() != inner_parts_.size()) throw DimensionMismatch("IncrementalComposition: inner size");
    detail::check_no_constant(inner);
    // Orders 1 .. k-1 of the inner map must be cached before computing order k.
    for (std::size_t j = 0; j < inner.size(); ++j) {
      auto& parts = inner_parts_[j];
      if (parts.empty()) parts.emplace_back(dim_, 0);
      while (static_cast<int>(parts.size()) < k) {
        const int o = static_cast<int>(parts.size());
        parts.push_back(inner[j].homogeneous_part(o));
      }
    }

    for (auto& node : nodes_) {
      if (node.left == kLeaf) continue;
      PolySeries<T> part(dim_, k);
      const auto& left = nodes_[node.left];
      const auto& factor = inner_parts_[node.factor];
      for (int a = left.degree; a <= k - 1; ++a) {
        const auto& lp = part_of(left, a);
        if (lp.empty()) continue;
        const auto& fp = factor[static_cast<std::size_t>(k - a)];
        if (fp.empty()) continue;
        part += multiply_order(lp, fp, k);
      }
      while (static_cast<int>(node.parts.size()) < k) node.parts.emplace_back(dim_, static_cast<int>(node.parts.size()));
      node.parts.push_back(std::move(part));
    }

    SeriesVector<T> out;
    out.reserve(outer_.size());
    for (const auto& component : outer_) {
      PolySeries<T> acc(dim_, k);
      for (const auto& [m, c] : component) {
        const auto& node = nodes_[index_.at(m)];
        if (static_cast<int>(node.parts.size()) <= k) continue;
        const auto& p = node.parts[static_cast<std::size_t>(k)];
        for (const auto& [key, v] : p) acc.add(key, c * v);
      }
      out.push_back(std::move(acc));
    }
    return out;
  }

 private:
  static constexpr std::size_t kLeaf = static_cast<std::size_t>(-1);

  struct Node {
    std::size_t left;    // kLeaf for a single variable
    std::size_t factor;  // inner component multiplied in last
    int degree;
    std::vector<PolySeries<T>> parts;  // parts[o] = order-o part, for product nodes
  };

  const PolySeries<T>& part_of(const Node& node, int o) const {
    if (node.left == kLeaf) {
      const auto& parts = inner_parts_[node.factor];
      return o < static_cast<int>(parts.size()) ? parts[static_cast<std::size_t>(o)] : empty_;
    }
    return o < static_cast<int>(node.parts.size()) ? node.parts[static_cast<std::size_t>(o)] : empty_;
  }

  std::size_t node_for(const MultiIndex& m) {
    if (auto it = index_.find(m); it != index_.end()) return it->second;
    const int degree = m.order();
    std::size_t last = m.dim();
    for (std::size_t j = m.dim(); j-- > 0;)
      if (m[j] > 0) {
        last = j;
        break;
      }
    Node node{kLeaf, last, degree, {}};
    if (degree > 1) {
      MultiIndex rest = m;
      rest[last] -= 1;
      node.left = node_for(rest);
    }
    nodes_.push_back(std::move(node));
    index_.emplace(m, nodes_.size() - 1);
    return nodes_.size() - 1;
  }

  SeriesVector<T> outer_;
  std::size_t dim_;
  int order_ = 1;
  std::vector<Node> nodes_;
  std::map<MultiIndex, std::size_t, GradedLess> index_;
  std::vector<std::vector<PolySeries<T>>> inner_parts_;
  PolySeries<T> empty_{};
};

}  // namespace invman
