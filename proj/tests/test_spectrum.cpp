#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "invman/spectrum.hpp"

using namespace invman;

namespace {

// Brute-force min of |m.(lambda,mu) - nu| / |m| over m in V, 2 <= |m| <= top,
// using explicit nested loops rather than the library's enumerator.
double brute_force_ratio(const std::vector<double>& lambda, const std::vector<double>& mu, int top) {
  std::vector<double> all = lambda;
  all.insert(all.end(), mu.begin(), mu.end());
  double best = INFINITY;
  auto scan = [&](const std::vector<double>& side) {
    const std::size_t n = side.size();
    std::vector<int> e(n, 0);
    // odometer over exponent vectors with sum <= top
    while (true) {
      int order = 0;
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        order += e[j];
        dot += e[j] * side[j];
      }
      if (order >= 2 && order <= top)
        for (double nu : all) best = std::min(best, std::abs(dot - nu) / order);
      std::size_t j = 0;
      while (j < n) {
        ++e[j];
        int s = 0;
        for (int v : e) s += v;
        if (s <= top) break;
        e[j] = 0;
        ++j;
      }
      if (j == n) break;
    }
  };
  scan(lambda);
  scan(mu);
  return best;
}

}  // namespace

TEST_CASE("verify_spectrum accepts the planar spectrum with N = 1") {
  const std::vector<double> l{-0.4}, m{1.5};
  const auto s = verify_spectrum<double>(l, m);
  CHECK(s.resonance_order == 1);
  CHECK(s.dim() == 2);
  CHECK(s.omega == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("verify_spectrum rejects an exact 1:2 resonance") {
  const std::vector<double> l{-2.0, -1.0}, m{1.0};
  try {
    (void)verify_spectrum<double>(l, m);
    FAIL("expected ResonanceDetected");
  } catch (const ResonanceDetected& e) {
    CHECK(e.exponents() == std::vector<int>{0, 2, 0});
    CHECK(e.component() == 0);
    CHECK(std::string(e.what()).find("2*lambda_1 = lambda_2") != std::string::npos);
  }
  CHECK_THROWS_AS((void)verify_spectrum<Interval>(l, m), ResonanceDetected);
}

TEST_CASE("verify_spectrum with lambda = (-2.5, -1) checks all orders up to 3") {
  const std::vector<double> l{-2.5, -1.0}, m{1.0};
  const auto s = verify_spectrum<double>(l, m);
  CHECK(s.resonance_order == 3);
  // every stable relation of order 2..3 is nonzero: 7 multi-indices
  int count = 0;
  for (int k = 2; k <= 3; ++k)
    for (int a = 0; a <= k; ++a) {
      const double dot = a * -2.5 + (k - a) * -1.0;
      CHECK(dot != -2.5);
      CHECK(dot != -1.0);
      ++count;
    }
  CHECK(count == 7);
}

TEST_CASE("verify_spectrum input errors") {
  const std::vector<double> unsorted{-1.0, -2.0}, ok{1.0}, pos{0.5}, neg{-0.5};
  CHECK_THROWS_AS((void)verify_spectrum<double>(unsorted, ok), OrderingViolation);
  CHECK_THROWS_AS((void)verify_spectrum<double>(pos, ok), SignViolation);
  CHECK_THROWS_AS((void)verify_spectrum<double>(neg, neg), SignViolation);
  CHECK_THROWS_AS((void)verify_spectrum<double>(std::vector<double>{}, ok), SignViolation);
  const std::vector<double> mu_unsorted{2.0, 1.0};
  CHECK_THROWS_AS((void)verify_spectrum<double>(neg, mu_unsorted), OrderingViolation);
}

TEST_CASE("small_divisor on the planar spectrum") {
  const std::vector<double> l{-0.4}, m{1.5};
  const auto s = verify_spectrum<double>(l, m);
  CHECK(small_divisor(s, MultiIndex{2, 0}, 0) == doctest::Approx(-0.4));
  CHECK(small_divisor(s, MultiIndex{0, 2}, 0) == doctest::Approx(3.4));
  CHECK(small_divisor(s, MultiIndex{0, 3}, 1) == doctest::Approx(3.0));
  CHECK_THROWS_AS((void)small_divisor(s, MultiIndex{1, 1}, 0), std::invalid_argument);

  const auto si = verify_spectrum<Interval>(l, m);
  CHECK(small_divisor(si, MultiIndex{0, 2}, 0).contains(small_divisor(s, MultiIndex{0, 2}, 0)));
}

TEST_CASE("omega_of") {
  const auto planar = verify_spectrum<double>(std::vector<double>{-0.4}, std::vector<double>{1.5});
  CHECK(omega_of(planar, 2) == doctest::Approx(0.4));
  CHECK(omega_of(planar, 1) == 0.0);
  const auto wide = verify_spectrum<double>(std::vector<double>{-2.5, -1.0}, std::vector<double>{1.0});
  CHECK(omega_of(wide, 3) == doctest::Approx(0.5));
}

TEST_CASE("omega_global against the brute-force oracle") {
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> spectra{
      {{-0.4}, {1.5}}, {{-2.5, -1.0}, {1.0}}, {{-1.3}, {0.7, 1.9}}, {{-1.7, -0.6}, {0.45}}};
  for (const auto& [l, m] : spectra) {
    const auto s = verify_spectrum<double>(l, m);
    const double oracle = brute_force_ratio(l, m, 200);
    CHECK(s.omega <= oracle * (1 + 1e-14));
    // the safety net reaches the enumerated minimum
    CHECK(s.omega == doctest::Approx(std::min(oracle, omega_of(s, std::max(s.resonance_order, 2)) /
                                                          std::max(s.resonance_order, 2)))
                         .epsilon(1e-13));
  }
  const auto planar = verify_spectrum<double>(std::vector<double>{-0.4}, std::vector<double>{1.5});
  CHECK(brute_force_ratio({-0.4}, {1.5}, 200) == doctest::Approx(0.2));
  CHECK(planar.omega == doctest::Approx(0.2));
}

TEST_CASE("Omega(k)/k is non-decreasing beyond N_eff") {
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> spectra{
      {{-0.4}, {1.5}}, {{-2.5, -1.0}, {1.0}}, {{-1.7, -0.6}, {0.45, 2.2}}};
  for (const auto& [l, m] : spectra) {
    const auto s = verify_spectrum<double>(l, m);
    const int n_eff = std::max(s.resonance_order, 2);
    double prev = 0.0;
    for (int k = n_eff; k <= 10000; ++k) {
      const double v = omega_of(s, k) / k;
      CHECK(v >= prev * (1 - 1e-15));
      prev = v;
    }
  }
}

TEST_CASE("perturbed resonant spectra are accepted away from the resonance") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> eps(1e-6, 0.3);
  for (int trial = 0; trial < 100; ++trial) {
    const double e = eps(rng);
    // lambda_2 = 2 lambda_1 + e (still ascending, |e| small)
    const std::vector<double> l{-2.0 + e, -1.0}, m{1.0};
    const auto s = verify_spectrum<double>(l, m);
    CHECK(lower(s.omega) > 0.0);
    CHECK(s.omega <= brute_force_ratio(l, m, 60) * (1 + 1e-14));
  }
}

TEST_CASE("interval spectrum encloses the float spectrum") {
  const std::vector<double> l{-1.7, -0.6}, m{0.45};
  const auto sf = verify_spectrum<double>(l, m);
  const auto si = verify_spectrum<Interval>(l, m);
  CHECK(sf.resonance_order == si.resonance_order);
  CHECK(si.omega.contains(sf.omega));
  CHECK(si.omega.lower() > 0.0);
}

TEST_CASE("straddling intervals are inconclusive") {
  Spectrum<Interval> s;
  s.stable.resize(2);
  s.unstable.resize(1);
  s.stable << Interval(-2.0 - 1e-9, -2.0 + 1e-9), Interval(-1.0);
  s.unstable << Interval(1.0);
  CHECK_THROWS_AS(detail::check_side(s, 0, 2, 2), InconclusiveInterval);
}
