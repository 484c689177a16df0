#pragma once

// Shared fixtures for the test binaries: the planar saddle, a generator of
// random non-resonant polynomial saddles, and residual metrics.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "invman/certificate.hpp"
#include "invman/system_io.hpp"

namespace invman::testing {

inline SystemFile planar_system() {
  SystemFile sys;
  sys.stable_dim = 1;
  sys.unstable_dim = 1;
  sys.lambda = {-0.4};
  sys.mu = {1.5};
  sys.monomials = {{0, MultiIndex{2, 0}, 1.0}, {0, MultiIndex{0, 2}, 1.0},
                   {1, MultiIndex{3, 0}, -1.0}, {1, MultiIndex{0, 3}, 1.0}};
  return sys;
}

template <Scalar T>
VectorField<T> planar_field() {
  return make_vector_field<T>(planar_system());
}

// Random saddle with d <= 3, deg F <= 4, eigenvalues of moderate ratio so
// that N stays small. Spectra failing the non-resonance check are redrawn.
inline SystemFile random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim_dist(2, 3);
  std::uniform_real_distribution<double> eig(0.3, 2.0);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> deg_dist(2, 4);
  std::bernoulli_distribution keep(0.6);

  while (true) {
    SystemFile sys;
    const int d = dim_dist(rng);
    sys.stable_dim = std::uniform_int_distribution<int>(1, d - 1)(rng);
    sys.unstable_dim = static_cast<std::size_t>(d) - sys.stable_dim;
    for (std::size_t i = 0; i < sys.stable_dim; ++i) sys.lambda.push_back(-eig(rng));
    for (std::size_t i = 0; i < sys.unstable_dim; ++i) sys.mu.push_back(eig(rng));
    std::sort(sys.lambda.begin(), sys.lambda.end());
    std::sort(sys.mu.begin(), sys.mu.end());
    const int deg = deg_dist(rng);
    for (std::size_t c = 0; c < sys.dim(); ++c)
      for (int k = 2; k <= deg; ++k)
        for (const auto& m : indices_of_order(sys.dim(), k))
          if (keep(rng)) sys.monomials.push_back({c, m, coef(rng)});
    try {
      (void)verify_spectrum<double>(sys.lambda, sys.mu);
      return sys;
    } catch (const Error&) {
    }
  }
}

// max over coefficients of |residual| / (largest |coefficient| of that order
// in p, or 1 when the order is empty).
template <Scalar T>
double max_relative_residual(const SeriesVector<T>& residual, const ManifoldParam<T>& p) {
  std::vector<double> scale(static_cast<std::size_t>(p.order) + 1, 0.0);
  for (const auto& s : p.components)
    for (const auto& [m, c] : s) scale[static_cast<std::size_t>(m.order())] = std::max(scale[static_cast<std::size_t>(m.order())], mag(c));
  double worst = 0.0;
  for (const auto& s : residual)
    for (const auto& [m, c] : s) {
      const double sc = scale[static_cast<std::size_t>(m.order())];
      worst = std::max(worst, mag(c) / (sc > 0.0 ? sc : 1.0));
    }
  return worst;
}

inline bool all_contain_zero(const SeriesVector<Interval>& residual) {
  for (const auto& s : residual)
    for (const auto& [m, c] : s)
      if (!c.contains_zero()) return false;
  return true;
}

}  // namespace invman::testing
