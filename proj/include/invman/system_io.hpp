#pragma once

// System-definition files, run configuration and the artifact writers used
// by the command-line front end.
//
// System file format (line based, '#' starts a comment):
//
//   dim_stable 1
//   dim_unstable 1
//   lambda -0.4
//   mu 1.5
//   # F <component> <exponents...> <coefficient>
//   F 1  2 0   1.0
//   F 2  3 0  -1.0
//   analytic <radius> <sup_norm>        (optional)

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "invman/certificate.hpp"
#include "invman/multi_index.hpp"
#include "invman/solver.hpp"

namespace invman {

struct Monomial {
  std::size_t component = 0;  // 0-based
  MultiIndex exponents;
  double coefficient = 0.0;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct SystemFile {
  std::size_t stable_dim = 0;
  std::size_t unstable_dim = 0;
  std::vector<double> lambda;
  std::vector<double> mu;
  std::vector<Monomial> monomials;  // merged, in (component, graded index) order
  std::optional<AnalyticBound> analytic;

  [[nodiscard]] std::size_t dim() const { return stable_dim + unstable_dim; }
};

bool operator==(const SystemFile& a, const SystemFile& b);

// Throws ParseError (with line number) or ValidationError.
SystemFile parse_system_file(std::string_view text);

// Inverse of parse_system_file; doubles are written in shortest round-trip form.
std::string format_system(const SystemFile& sys);

std::string format_double(double v);

// Verifies the spectrum (may throw ResonanceDetected etc.) and builds F.
template <Scalar T>
VectorField<T> make_vector_field(const SystemFile& sys) {
  auto spectrum = verify_spectrum<T>(sys.lambda, sys.mu);
  const std::size_t d = sys.dim();
  int degree = 2;
  for (const auto& m : sys.monomials) degree = std::max(degree, m.exponents.order());
  SeriesVector<T> f(d, PolySeries<T>(d, degree));
  for (const auto& m : sys.monomials) f[m.component].add(m.exponents, T(m.coefficient));
  return make_vector_field<T>(std::move(spectrum), std::move(f), sys.analytic);
}

template <Scalar T>
VectorField<T> parse_system(std::string_view text) {
  return make_vector_field<T>(parse_system_file(text));
}

enum class Mode { Float, Interval };

struct RunConfig {
  std::filesystem::path input;
  int order = 20;
  Mode mode = Mode::Float;
  std::optional<int> rho;
  std::optional<int> normal_form_order;
  int samples = 201;
  std::filesystem::path out_dir = ".";
};

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kParseError = 2,
  kResonance = 3,
  kInconclusive = 4,
  kTailDiverges = 5,
  kIterationCap = 6,
};

// Runs the whole pipeline and writes the artifacts into cfg.out_dir:
//   certificate.json, coefficients.csv, enclosure_stable.csv,
//   enclosure_unstable.csv, plot_manifolds.py and, with a normal-form
//   order, normal_form.csv. Diagnostics go to `diag`. Returns an ExitCode.
int run_pipeline(const RunConfig& cfg, std::ostream& diag);

struct EnclosureSample {
  std::vector<double> parameter;
  std::vector<double> lower;  // point coordinates; lower == upper in float mode
  std::vector<double> upper;
  double remainder = 0.0;
};

// Samples (t,0)+phi(t) (or the unstable mirror) on [-r+eps, r-eps]^p with
// `count` points per axis. Interval mode encloses each point, coefficients
// included; the remainder is the tail bound at |t|.
template <Scalar T>
std::vector<EnclosureSample> emit_enclosure_samples(const ManifoldParam<T>& p, const Certificate<T>& cert,
                                                    int count) {
  std::vector<EnclosureSample> out;
  if (count <= 0) return out;
  const std::size_t dims = p.parameter_dim();
  const double r = cert.r_theta;
  const double edge = r * (1.0 - 1e-3);
  std::vector<double> axis;
  if (count == 1) {
    axis.push_back(0.0);
  } else {
    for (int j = 0; j < count; ++j) axis.push_back(-edge + 2.0 * edge * j / (count - 1));
  }
  std::vector<std::size_t> idx(dims, 0);
  while (true) {
    EnclosureSample sample;
    double norm = 0.0;
    for (std::size_t a = 0; a < dims; ++a) {
      sample.parameter.push_back(axis[idx[a]]);
      norm = std::max(norm, std::abs(axis[idx[a]]));
    }
    if (norm < r) {
      if constexpr (is_interval_v<T>) {
        std::vector<Interval> t(sample.parameter.begin(), sample.parameter.end());
        for (const auto& v : p.evaluate(t)) {
          sample.lower.push_back(v.lower());
          sample.upper.push_back(v.upper());
        }
      } else {
        sample.lower = p.evaluate(sample.parameter);
        sample.upper = sample.lower;
      }
      sample.remainder = remainder_bound(cert, norm);
      out.push_back(std::move(sample));
    }
    std::size_t a = 0;
    while (a < dims && ++idx[a] == axis.size()) idx[a++] = 0;
    if (a == dims) break;
  }
  return out;
}

// Writers. All output is UTF-8 with '\n' line endings.
template <Scalar T>
std::string certificate_json(const Certificate<T>& cert);

template <Scalar T>
std::string coefficients_csv(const ManifoldParam<T>& phi, const ManifoldParam<T>& psi);

template <Scalar T>
std::string normal_form_csv(const NormalFormTail<T>& g);

std::string enclosure_csv(std::string_view side, std::size_t dim, bool interval,
                          std::span<const EnclosureSample> samples);

std::string plot_script();

}  // namespace invman
