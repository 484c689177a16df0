#pragma once

// Closed real intervals with outward rounding.
//
// Every arithmetic result is rounded to nearest and then, only when the
// rounding error is nonzero, pushed one ulp outward. The sign of the rounding
// error is recovered exactly (TwoSum for sums, fma residuals for products and
// quotients), so exact operations on representable inputs stay points.

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

namespace invman {

namespace rounding {

inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }

// Results below this magnitude may have inexact error terms (subnormal range).
inline constexpr double kUnderflowGuard = 1e-290;

// [lo, hi] bounds on the exact value given the rounded value and the sign of
// (exact - rounded).
inline std::pair<double, double> from_error_sign(double rounded, double err_sign) {
  if (err_sign > 0) return {rounded, up(rounded)};
  if (err_sign < 0) return {down(rounded), rounded};
  return {rounded, rounded};
}

inline std::pair<double, double> widen_both(double v) { return {down(v), up(v)}; }

inline std::pair<double, double> sum(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) {
    if (std::isfinite(a) && std::isfinite(b)) return widen_both(s);
    return {s, s};
  }
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return from_error_sign(s, err);
}

inline std::pair<double, double> product(double a, double b) {
  const double p = a * b;
  if (!std::isfinite(p)) {
    if (std::isfinite(a) && std::isfinite(b)) return widen_both(p);
    return {p, p};
  }
  if (p == 0.0) {
    if (a == 0.0 || b == 0.0) return {0.0, 0.0};
    return {-std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::denorm_min()};
  }
  if (std::abs(p) < kUnderflowGuard) return widen_both(p);
  return from_error_sign(p, std::fma(a, b, -p));
}

inline std::pair<double, double> quotient(double a, double b) {
  const double q = a / b;
  if (!std::isfinite(q)) {
    if (std::isfinite(a) && std::isfinite(b) && b != 0.0) return widen_both(q);
    return {q, q};
  }
  if (q == 0.0) {
    if (a == 0.0) return {0.0, 0.0};
    return {-std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::denorm_min()};
  }
  if (std::abs(q) < kUnderflowGuard) return widen_both(q);
  // exact - q = r / b
  const double r = std::fma(-q, b, a);
  return from_error_sign(q, b > 0 ? r : -r);
}

}  // namespace rounding

class Interval {
 public:
  constexpr Interval() = default;
  // NOLINTNEXTLINE(google-explicit-constructor): points convert implicitly.
  constexpr Interval(double v) : lo_(v), hi_(v) {}
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo <= hi)) throw std::invalid_argument("Interval: lower bound exceeds upper bound");
  }

  [[nodiscard]] constexpr double lower() const { return lo_; }
  [[nodiscard]] constexpr double upper() const { return hi_; }
  [[nodiscard]] double mid() const { return lo_ == hi_ ? lo_ : 0.5 * lo_ + 0.5 * hi_; }
  [[nodiscard]] double width() const { return rounding::sum(hi_, -lo_).second; }
  [[nodiscard]] double mag() const { return std::max(std::abs(lo_), std::abs(hi_)); }
  [[nodiscard]] double mig() const {
    if (lo_ <= 0.0 && hi_ >= 0.0) return 0.0;
    return std::min(std::abs(lo_), std::abs(hi_));
  }
  [[nodiscard]] constexpr bool contains(double v) const { return lo_ <= v && v <= hi_; }
  [[nodiscard]] constexpr bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  [[nodiscard]] constexpr bool contains_zero() const { return contains(0.0); }
  [[nodiscard]] constexpr bool is_point() const { return lo_ == hi_; }

  Interval operator-() const { return Interval(-hi_, -lo_); }

  Interval& operator+=(const Interval& o) {
    lo_ = rounding::sum(lo_, o.lo_).first;
    hi_ = rounding::sum(hi_, o.hi_).second;
    return *this;
  }
  Interval& operator-=(const Interval& o) {
    const double lo = rounding::sum(lo_, -o.hi_).first;
    hi_ = rounding::sum(hi_, -o.lo_).second;
    lo_ = lo;
    return *this;
  }
  Interval& operator*=(const Interval& o) {
    const auto p1 = rounding::product(lo_, o.lo_);
    const auto p2 = rounding::product(lo_, o.hi_);
    const auto p3 = rounding::product(hi_, o.lo_);
    const auto p4 = rounding::product(hi_, o.hi_);
    lo_ = std::min({p1.first, p2.first, p3.first, p4.first});
    hi_ = std::max({p1.second, p2.second, p3.second, p4.second});
    return *this;
  }
  // Division by an interval containing zero is a domain error, never a widening.
  Interval& operator/=(const Interval& o) {
    if (o.contains_zero()) throw std::domain_error("Interval: division by an interval containing zero");
    const auto q1 = rounding::quotient(lo_, o.lo_);
    const auto q2 = rounding::quotient(lo_, o.hi_);
    const auto q3 = rounding::quotient(hi_, o.lo_);
    const auto q4 = rounding::quotient(hi_, o.hi_);
    lo_ = std::min({q1.first, q2.first, q3.first, q4.first});
    hi_ = std::max({q1.second, q2.second, q3.second, q4.second});
    return *this;
  }

  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
  friend Interval operator/(Interval a, const Interval& b) { return a /= b; }

  friend bool operator==(const Interval& a, const Interval& b) = default;

  friend std::ostream& operator<<(std::ostream& os, const Interval& x) {
    return os << '[' << x.lo_ << ", " << x.hi_ << ']';
  }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline Interval abs(const Interval& x) {
  if (x.lower() >= 0.0) return x;
  if (x.upper() <= 0.0) return -x;
  return Interval(0.0, x.mag());
}

// Enclosure of {min(a, b) : a in x, b in y}.
inline Interval min(const Interval& x, const Interval& y) {
  return Interval(std::min(x.lower(), y.lower()), std::min(x.upper(), y.upper()));
}

inline Interval max(const Interval& x, const Interval& y) {
  return Interval(std::max(x.lower(), y.lower()), std::max(x.upper(), y.upper()));
}

// Tight integer power: even powers of intervals straddling zero stay non-negative.
inline Interval pow(const Interval& x, int e) {
  if (e < 0) return Interval(1.0) / pow(x, -e);
  if (e == 0) return Interval(1.0);
  Interval base = x;
  if (e % 2 == 0) {
    if (x.contains_zero())
      base = Interval(0.0, x.mag());
    else if (x.upper() < 0.0)
      base = -x;
  }
  Interval result(1.0);
  int n = e;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

inline Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lower(), b.lower()), std::max(a.upper(), b.upper()));
}

}  // namespace invman

namespace Eigen {

template <>
struct NumTraits<invman::Interval> : GenericNumTraits<double> {
  using Real = invman::Interval;
  using NonInteger = invman::Interval;
  using Nested = invman::Interval;
  using Literal = invman::Interval;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 6,
    MulCost = 12
  };
};

}  // namespace Eigen
