#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <vector>

namespace invman {

// Exponent vector of a monomial in d = d_s + d_u variables. The first d_s
// entries are the stable exponents m_s, the remaining d_u the unstable m_u.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dim) : e_(dim, 0) {}
  MultiIndex(std::initializer_list<int> e) : e_(e) {}
  explicit MultiIndex(std::vector<int> e) : e_(std::move(e)) {}

  static MultiIndex unit(std::size_t dim, std::size_t i) {
    MultiIndex m(dim);
    m.e_[i] = 1;
    return m;
  }

  [[nodiscard]] std::size_t dim() const { return e_.size(); }
  [[nodiscard]] int operator[](std::size_t i) const { return e_[i]; }
  int& operator[](std::size_t i) { return e_[i]; }
  [[nodiscard]] const std::vector<int>& exponents() const { return e_; }

  [[nodiscard]] int order() const;
  [[nodiscard]] int stable_order(std::size_t stable_dim) const;
  [[nodiscard]] int unstable_order(std::size_t stable_dim) const;

  MultiIndex& operator+=(const MultiIndex& o);
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  friend std::ostream& operator<<(std::ostream& os, const MultiIndex& m);

 private:
  std::vector<int> e_;
};

// Graded order: by total degree, then lexicographically descending, so the
// first index of order k is (k, 0, ..., 0). Keys of equal order are contiguous.
struct GradedLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

// V_s: |m_u| = 0, V_u: |m_s| = 0, U: both nonzero. Total and exclusive for
// |m| >= 2; the zero index classifies as StableOnly.
enum class IndexClass { StableOnly, UnstableOnly, Mixed };

IndexClass classify(const MultiIndex& m, std::size_t stable_dim);

// Number of d-dimensional multi-indices of order k: binomial(k + d - 1, d - 1).
std::uint64_t mindex_count(int d, int k);

// Calls fn(m) for each index of dimension d and order k in graded order.
void for_each_index_of_order(std::size_t d, int k, const std::function<void(const MultiIndex&)>& fn);

std::vector<MultiIndex> indices_of_order(std::size_t d, int k);

// First key of order k under GradedLess.
MultiIndex first_of_order(std::size_t d, int k);

}  // namespace invman
