#pragma once

// Majorant chain, heuristic geometric fit and the verified radius of
// convergence for the stable/unstable parametrisations.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "invman/errors.hpp"
#include "invman/series.hpp"
#include "invman/solver.hpp"
#include "invman/spectrum.hpp"

namespace invman {

struct MajorantData {
  std::vector<double> gamma;  // gamma[k], k = 0 .. n1; entries 0, 1 are zero
  std::vector<double> fhat;   // c_hat[k], k = 0 .. rho
  std::vector<double> delta;  // upper bounds on delta[k], k = 0 .. n1
  int rho = 2;
  int fit_start = 1;  // n0 = floor(n1 / 2); the fit window is n0 < k <= n1
};

struct GeometricBound {
  double C = 0.0;
  double M = 0.0;
};

template <Scalar T>
struct Certificate {
  int n1 = 0;
  int rho = 2;
  double r_theta = 0.0;  // verified radius
  double C = 0.0;        // heuristic gamma_k <= C M^k
  double M = 0.0;
  T omega{0.0};
  T quadratic{0.0};  // A_{2 r_theta}
  int shrink_iterations = 0;
  bool degenerate_fit = false;
  double sigma_at_radius = 0.0;  // upper bound on sum_{k<=n1} delta_k r_theta^k
  std::vector<double> lambda;
  std::vector<double> mu;
};

struct CertifyOptions {
  std::optional<int> rho;           // defaults to deg F
  double fallback_radius = 1.0;     // candidate when the fit window is degenerate
  double shrink_factor = 0.95;
  int max_shrinks = 10000;
};

// gamma_k = sum_{|m|=k} max_i |alpha_{i,m}| + sum_{|m|=k} max_i |beta_{i,m}|,
// using upper endpoints in interval mode.
template <Scalar T>
std::vector<double> joint_majorant(const ManifoldParam<T>& phi, const ManifoldParam<T>& psi) {
  const int n1 = std::max(phi.order, psi.order);
  std::vector<double> gamma(static_cast<std::size_t>(std::max(n1, 1)) + 1, 0.0);
  auto accumulate = [&](const ManifoldParam<T>& p) {
    std::map<MultiIndex, double, GradedLess> row_max;
    for (const auto& component : p.components)
      for (const auto& [m, c] : component) {
        double& v = row_max[m];
        v = std::max(v, mag(c));
      }
    for (const auto& [m, v] : row_max) {
      auto& g = gamma[static_cast<std::size_t>(m.order())];
      g = rounding::sum(g, v).second;
    }
  };
  accumulate(phi);
  accumulate(psi);
  return gamma;
}

// Least squares of log gamma_k against (1, k) over floor(n1/2) < k <= n1,
// skipping zeros, then C raised until gamma_k <= C M^k on the window.
GeometricBound fit_geometric_bound(const std::vector<double>& gamma, int n1);

// c_hat_k = sum_{|m|=k} max_i |c_{i,m}|, k = 0 .. rho (upper bounds).
template <Scalar T>
std::vector<double> fhat_coeffs(const VectorField<T>& vf, int rho) {
  std::vector<double> c(static_cast<std::size_t>(std::max(rho, 0)) + 1, 0.0);
  std::map<MultiIndex, double, GradedLess> row_max;
  for (const auto& component : vf.nonlinearity)
    for (const auto& [m, v] : component) {
      double& r = row_max[m];
      r = std::max(r, mag(v));
    }
  for (const auto& [m, v] : row_max) {
    const int k = m.order();
    if (k <= rho) c[static_cast<std::size_t>(k)] = rounding::sum(c[static_cast<std::size_t>(k)], v).second;
  }
  return c;
}

// Closed geometric bound on sum_{k>rho} N_d(k) t^{k-2}, using
// N_d(k+1)/N_d(k) <= (rho+1+d)/(rho+2) for k > rho.
template <Scalar T>
T cauchy_tail_sum(double t, int rho, std::size_t d) {
  const T ratio = T(t) * T(static_cast<double>(rho + 1 + static_cast<int>(d))) / T(static_cast<double>(rho + 2));
  if (!(upper(ratio) < 1.0)) throw TailDiverges("Cauchy tail does not close: raise rho or shrink the radius");
  const T first = T(static_cast<double>(mindex_count(static_cast<int>(d), rho + 1))) * pow(T(t), rho - 1);
  return first / (T(1.0) - ratio);
}

// A_{s''} = sum_{k=2}^{rho} c_hat_k s''^{k-2} + A^rho_{s''}; the tail term is
// zero unless F carries analytic data.
template <Scalar T>
T quadratic_bound(const std::vector<double>& fhat, double s2, int rho, std::size_t d,
                  const std::optional<AnalyticBound>& analytic) {
  T sum(0.0);
  for (int k = std::min(rho, static_cast<int>(fhat.size()) - 1); k >= 2; --k)
    sum = sum * T(s2) + T(fhat[static_cast<std::size_t>(k)]);
  if (analytic) {
    const double sp = analytic->radius;
    if (!(s2 < sp)) throw TailDiverges("quadratic bound: s'' must be smaller than the analyticity radius");
    const T scale = T(analytic->sup_norm) / (T(sp) * T(sp));
    sum += scale * cauchy_tail_sum<T>(upper(T(s2) / T(sp)), rho, d);
  }
  return sum;
}

template <Scalar T>
int default_rho(const VectorField<T>& vf) {
  return std::max(2, vf.degree());
}

template <Scalar T>
void check_rho(const VectorField<T>& vf, int rho) {
  if (rho < 2) throw ValidationError("rho must be at least 2");
  if (!vf.analytic && rho < vf.degree())
    throw ValidationError("rho below the polynomial degree needs an analytic bound for the tail");
}

template <Scalar T>
T quadratic_bound(const VectorField<T>& vf, double s2, int rho) {
  check_rho(vf, rho);
  return quadratic_bound<T>(fhat_coeffs(vf, rho), s2, rho, vf.dim(), vf.analytic);
}

struct RadiusOptions {
  double shrink_factor = 0.95;
  int max_shrinks = 10000;
};

template <Scalar T>
struct RadiusCheck {
  double radius = 0.0;
  int iterations = 0;
  T quadratic{0.0};
};

// Largest radius s''/2 the analytic clamp allows.
inline double analytic_radius_cap(const AnalyticBound& a, int rho, std::size_t d) {
  return 0.5 * 0.99 * a.radius * static_cast<double>(rho + 2) / static_cast<double>(rho + 1 + static_cast<int>(d));
}

// r <= Omega / (4 A_{2r}) holds with certainty (A = 0 passes trivially).
template <Scalar T>
bool radius_condition_holds(double r, const T& omega, const T& quadratic) {
  if (is_point_zero(quadratic) || upper(quadratic) <= 0.0) return true;
  const T bound = omega / (T(4.0) * quadratic);
  return r <= lower(bound);
}

// Shrinks r by the shrink factor until r <= Omega / (4 A_{2r}).
template <Scalar T>
RadiusCheck<T> verify_radius(const Spectrum<T>& s, const VectorField<T>& vf, double r_candidate, int rho,
                             const RadiusOptions& opts = {}) {
  if (!(r_candidate > 0.0)) throw std::invalid_argument("verify_radius: candidate radius must be positive");
  if (!(lower(s.omega) > 0.0)) throw NonpositiveOmega("verify_radius: Omega must be positive");
  check_rho(vf, rho);
  const auto fhat = fhat_coeffs(vf, rho);
  double r = r_candidate;
  if (vf.analytic) r = std::min(r, analytic_radius_cap(*vf.analytic, rho, vf.dim()));
  for (int it = 0; it <= opts.max_shrinks; ++it) {
    const T a = quadratic_bound<T>(fhat, 2.0 * r, rho, vf.dim(), vf.analytic);
    if (radius_condition_holds(r, s.omega, a)) return {r, it, a};
    r *= opts.shrink_factor;
  }
  throw MaxIterationsExceeded("verify_radius: no admissible radius after " + std::to_string(opts.max_shrinks) +
                              " shrinks");
}

// delta_k = [F_hat(w + sigma^[k-1](w))]_k / (Omega k), k = 2 .. n.
template <Scalar T>
std::vector<T> sigma_coeffs(const std::vector<double>& fhat, const T& omega, int n) {
  if (!(lower(omega) > 0.0)) throw NonpositiveOmega("sigma_coeffs: Omega must be positive");
  std::vector<T> delta(static_cast<std::size_t>(std::max(n, 1)) + 1, T(0.0));
  PolySeries<T> outer(1, std::max(2, static_cast<int>(fhat.size()) - 1));
  for (std::size_t k = 2; k < fhat.size(); ++k)
    if (fhat[k] != 0.0) outer.set(MultiIndex{static_cast<int>(k)}, T(fhat[k]));
  IncrementalComposition<T> composition({outer}, 1);
  SeriesVector<T> inner{PolySeries<T>::variable(1, 0, std::max(n, 1))};
  for (int k = 2; k <= n; ++k) {
    const auto part = composition.advance(inner);
    const T value = part[0].coeff(MultiIndex{k}) / (omega * T(static_cast<double>(k)));
    delta[static_cast<std::size_t>(k)] = value;
    if (!is_point_zero(value)) inner[0].set(MultiIndex{k}, value);
  }
  return delta;
}

// Tail bound r (|zeta|/r)^{n1+1} / (1 - |zeta|/r); +infinity for |zeta| >= r.
template <Scalar T>
double remainder_bound(const Certificate<T>& cert, double zeta_norm) {
  if (zeta_norm < 0.0) throw std::invalid_argument("remainder_bound: negative norm");
  const double r = cert.r_theta;
  if (!(zeta_norm < r)) return std::numeric_limits<double>::infinity();
  if (zeta_norm == 0.0) return 0.0;
  if constexpr (is_interval_v<T>) {
    const Interval q = Interval(zeta_norm) / Interval(r);
    return upper(Interval(r) * pow(q, cert.n1 + 1) / (Interval(1.0) - q));
  } else {
    const double q = zeta_norm / r;
    return r * pow(q, cert.n1 + 1) / (1.0 - q);
  }
}

template <Scalar T>
struct CertificationRun {
  ManifoldParam<T> stable;
  ManifoldParam<T> unstable;
  MajorantData majorants;
  Certificate<T> certificate;
};

// Solve both sides, fit (C, M), verify r_theta starting from 1/M.
template <Scalar T>
CertificationRun<T> certify(const VectorField<T>& vf, int n1, const CertifyOptions& opts = {}) {
  CertificationRun<T> run;
  run.stable = solve_stable(vf, n1);
  run.unstable = solve_unstable(vf, n1);

  const int rho = opts.rho.value_or(default_rho(vf));
  check_rho(vf, rho);

  auto& maj = run.majorants;
  maj.gamma = joint_majorant(run.stable, run.unstable);
  maj.fhat = fhat_coeffs(vf, rho);
  maj.rho = rho;
  maj.fit_start = n1 / 2;

  auto& cert = run.certificate;
  cert.n1 = n1;
  cert.rho = rho;
  cert.omega = vf.spectrum.omega;
  for (Eigen::Index i = 0; i < vf.spectrum.stable.size(); ++i) cert.lambda.push_back(mid(vf.spectrum.stable(i)));
  for (Eigen::Index i = 0; i < vf.spectrum.unstable.size(); ++i) cert.mu.push_back(mid(vf.spectrum.unstable(i)));

  double candidate = 0.0;
  try {
    const GeometricBound fit = fit_geometric_bound(maj.gamma, n1);
    cert.C = fit.C;
    cert.M = fit.M;
    candidate = 1.0 / fit.M;
  } catch (const DegenerateWindow&) {
    cert.degenerate_fit = true;
    cert.M = 1.0;
    cert.C = 0.0;
    for (double g : maj.gamma) cert.C = std::max(cert.C, g);
    candidate = opts.fallback_radius;
  }

  const auto check = verify_radius(vf.spectrum, vf, candidate, rho, {opts.shrink_factor, opts.max_shrinks});
  cert.r_theta = check.radius;
  cert.shrink_iterations = check.iterations;
  cert.quadratic = check.quadratic;

  const auto delta = sigma_coeffs<T>(maj.fhat, vf.spectrum.omega, n1);
  maj.delta.assign(delta.size(), 0.0);
  T partial(0.0);
  for (std::size_t k = 2; k < delta.size(); ++k) {
    maj.delta[k] = upper(delta[k]);
    partial += delta[k] * pow(T(cert.r_theta), static_cast<int>(k));
  }
  cert.sigma_at_radius = upper(partial);
  return run;
}

template <Scalar T>
Certificate<T> build_certificate(const VectorField<T>& vf, int n1, std::optional<int> rho = std::nullopt) {
  CertifyOptions opts;
  opts.rho = rho;
  return certify(vf, n1, opts).certificate;
}

}  // namespace invman
