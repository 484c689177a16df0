#pragma once

// The scalar interface every series and certificate routine is written
// against. Two realisations: `double` (plain floating point) and `Interval`
// (outward rounded). Generic code uses only these free functions.

#include <cmath>
#include <string_view>
#include <type_traits>

#include "invman/interval.hpp"

namespace invman {

template <class T>
inline constexpr bool is_interval_v = std::is_same_v<T, Interval>;

template <class T>
concept Scalar = std::is_same_v<T, double> || std::is_same_v<T, Interval>;

inline double lower(double x) { return x; }
inline double upper(double x) { return x; }
inline double mid(double x) { return x; }
inline double width(double) { return 0.0; }
inline double mag(double x) { return std::abs(x); }
inline bool contains(double x, double v) { return x == v; }
inline bool contains_zero(double x) { return x == 0.0; }
inline bool is_point_zero(double x) { return x == 0.0; }

inline double lower(const Interval& x) { return x.lower(); }
inline double upper(const Interval& x) { return x.upper(); }
inline double mid(const Interval& x) { return x.mid(); }
inline double width(const Interval& x) { return x.width(); }
inline double mag(const Interval& x) { return x.mag(); }
inline bool contains(const Interval& x, double v) { return x.contains(v); }
inline bool contains_zero(const Interval& x) { return x.contains_zero(); }
inline bool is_point_zero(const Interval& x) { return x.lower() == 0.0 && x.upper() == 0.0; }

inline double pow(double x, int e) {
  double result = 1.0;
  double base = e < 0 ? 1.0 / x : x;
  for (int n = e < 0 ? -e : e; n > 0; n >>= 1) {
    if (n & 1) result *= base;
    base *= base;
  }
  return result;
}

template <Scalar T>
constexpr std::string_view mode_name() {
  return is_interval_v<T> ? "interval" : "float";
}

}  // namespace invman
