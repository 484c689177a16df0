#include "invman/multi_index.hpp"

#include <numeric>
#include <stdexcept>

namespace invman {

int MultiIndex::order() const { return std::accumulate(e_.begin(), e_.end(), 0); }

int MultiIndex::stable_order(std::size_t stable_dim) const {
  return std::accumulate(e_.begin(), e_.begin() + static_cast<std::ptrdiff_t>(stable_dim), 0);
}

int MultiIndex::unstable_order(std::size_t stable_dim) const {
  return std::accumulate(e_.begin() + static_cast<std::ptrdiff_t>(stable_dim), e_.end(), 0);
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& o) {
  if (o.dim() != dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
  return *this;
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& m) {
  os << '(';
  for (std::size_t i = 0; i < m.dim(); ++i) os << (i ? "," : "") << m[i];
  return os << ')';
}

bool GradedLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int oa = a.order();
  const int ob = b.order();
  if (oa != ob) return oa < ob;
  return a.exponents() > b.exponents();
}

IndexClass classify(const MultiIndex& m, std::size_t stable_dim) {
  if (m.unstable_order(stable_dim) == 0) return IndexClass::StableOnly;
  if (m.stable_order(stable_dim) == 0) return IndexClass::UnstableOnly;
  return IndexClass::Mixed;
}

std::uint64_t mindex_count(int d, int k) {
  if (d < 1 || k < 0) throw std::invalid_argument("mindex_count: need d >= 1 and k >= 0");
  // binomial(k + d - 1, d - 1), built so every intermediate is an integer
  std::uint64_t result = 1;
  for (int j = 1; j < d; ++j) {
    result = result * static_cast<std::uint64_t>(k + j) / static_cast<std::uint64_t>(j);
  }
  return result;
}

namespace {

void enumerate(MultiIndex& m, std::size_t pos, int remaining,
               const std::function<void(const MultiIndex&)>& fn) {
  if (pos + 1 == m.dim()) {
    m[pos] = remaining;
    fn(m);
    m[pos] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    m[pos] = e;
    enumerate(m, pos + 1, remaining - e, fn);
  }
  m[pos] = 0;
}

}  // namespace

void for_each_index_of_order(std::size_t d, int k, const std::function<void(const MultiIndex&)>& fn) {
  if (d == 0) return;
  MultiIndex m(d);
  enumerate(m, 0, k, fn);
}

std::vector<MultiIndex> indices_of_order(std::size_t d, int k) {
  std::vector<MultiIndex> out;
  for_each_index_of_order(d, k, [&](const MultiIndex& m) { out.push_back(m); });
  return out;
}

MultiIndex first_of_order(std::size_t d, int k) {
  MultiIndex m(d);
  if (d > 0) m[0] = k;
  return m;
}

}  // namespace invman
