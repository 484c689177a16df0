#include "invman/system_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

namespace invman {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "expected a number, got '" + std::string(s) + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite number '" + std::string(s) + "'");
  return v;
}

long parse_int(std::string_view s, std::size_t line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "expected an integer, got '" + std::string(s) + "'");
  return v;
}

struct RawMonomial {
  std::size_t line;
  long component;
  std::vector<int> exponents;
  double coefficient;
};

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

bool operator==(const SystemFile& a, const SystemFile& b) {
  auto same_analytic = [](const std::optional<AnalyticBound>& x, const std::optional<AnalyticBound>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (x->radius == y->radius && x->sup_norm == y->sup_norm);
  };
  return a.stable_dim == b.stable_dim && a.unstable_dim == b.unstable_dim && a.lambda == b.lambda &&
         a.mu == b.mu && a.monomials == b.monomials && same_analytic(a.analytic, b.analytic);
}

SystemFile parse_system_file(std::string_view text) {
  std::optional<long> ds, du;
  std::optional<std::vector<double>> lambda, mu;
  std::optional<AnalyticBound> analytic;
  std::vector<RawMonomial> raw;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto f = split_fields(line);
    if (f.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    const std::string_view key = f[0];
    if (key == "dim_stable" || key == "dim_unstable") {
      if (f.size() != 2) throw ParseError(line_no, std::string(key) + " takes one integer");
      const long v = parse_int(f[1], line_no);
      if (v < 1) throw ValidationError(std::string(key) + " must be at least 1");
      (key == "dim_stable" ? ds : du) = v;
    } else if (key == "lambda" || key == "mu") {
      std::vector<double> values;
      for (std::size_t i = 1; i < f.size(); ++i) values.push_back(parse_double(f[i], line_no));
      if (values.empty()) throw ParseError(line_no, std::string(key) + " needs at least one value");
      (key == "lambda" ? lambda : mu) = std::move(values);
    } else if (key == "F") {
      if (!ds || !du) throw ParseError(line_no, "F lines must follow dim_stable and dim_unstable");
      const std::size_t d = static_cast<std::size_t>(*ds + *du);
      if (f.size() != d + 3)
        throw ParseError(line_no, "F line needs a component, " + std::to_string(d) + " exponents and a coefficient");
      RawMonomial m{line_no, parse_int(f[1], line_no), {}, 0.0};
      for (std::size_t j = 0; j < d; ++j) {
        const long e = parse_int(f[2 + j], line_no);
        if (e < 0) throw ParseError(line_no, "negative exponent");
        m.exponents.push_back(static_cast<int>(e));
      }
      m.coefficient = parse_double(f[d + 2], line_no);
      raw.push_back(std::move(m));
    } else if (key == "analytic") {
      if (f.size() != 3) throw ParseError(line_no, "analytic takes a radius and a sup-norm bound");
      analytic = AnalyticBound{parse_double(f[1], line_no), parse_double(f[2], line_no)};
      if (!(analytic->radius > 0.0) || analytic->sup_norm < 0.0)
        throw ValidationError("analytic bound needs radius > 0 and sup norm >= 0");
    } else {
      throw ParseError(line_no, "unknown keyword '" + std::string(key) + "'");
    }
    if (eol == text.size()) break;
  }

  if (!ds || !du) throw ValidationError("missing dim_stable or dim_unstable");
  if (!lambda || !mu) throw ValidationError("missing lambda or mu");
  SystemFile sys;
  sys.stable_dim = static_cast<std::size_t>(*ds);
  sys.unstable_dim = static_cast<std::size_t>(*du);
  if (lambda->size() != sys.stable_dim) throw ValidationError("lambda count differs from dim_stable");
  if (mu->size() != sys.unstable_dim) throw ValidationError("mu count differs from dim_unstable");
  for (double v : *lambda)
    if (!(v < 0.0)) throw ValidationError("stable eigenvalues must be negative");
  for (double v : *mu)
    if (!(v > 0.0)) throw ValidationError("unstable eigenvalues must be positive");
  if (!std::is_sorted(lambda->begin(), lambda->end()) || !std::is_sorted(mu->begin(), mu->end()))
    throw ValidationError("eigenvalues must be listed ascending");
  sys.lambda = std::move(*lambda);
  sys.mu = std::move(*mu);
  sys.analytic = analytic;

  const std::size_t d = sys.dim();
  std::map<std::pair<std::size_t, MultiIndex>, double,
           decltype([](const auto& a, const auto& b) {
             if (a.first != b.first) return a.first < b.first;
             return GradedLess{}(a.second, b.second);
           })>
      merged;
  for (const auto& m : raw) {
    if (m.component < 1 || static_cast<std::size_t>(m.component) > d)
      throw ValidationError("line " + std::to_string(m.line) + ": component out of range");
    MultiIndex idx(m.exponents);
    if (idx.order() < 2)
      throw ValidationError("line " + std::to_string(m.line) + ": monomial of order < 2 (F must be O(z^2))");
    merged[{static_cast<std::size_t>(m.component - 1), idx}] += m.coefficient;
  }
  for (const auto& [key, c] : merged) sys.monomials.push_back({key.first, key.second, c});
  return sys;
}

std::string format_system(const SystemFile& sys) {
  std::ostringstream os;
  os << "dim_stable " << sys.stable_dim << '\n';
  os << "dim_unstable " << sys.unstable_dim << '\n';
  os << "lambda";
  for (double v : sys.lambda) os << ' ' << format_double(v);
  os << "\nmu";
  for (double v : sys.mu) os << ' ' << format_double(v);
  os << '\n';
  if (sys.analytic)
    os << "analytic " << format_double(sys.analytic->radius) << ' ' << format_double(sys.analytic->sup_norm) << '\n';
  os << "# F <component> <exponents...> <coefficient>\n";
  for (const auto& m : sys.monomials) {
    os << "F " << m.component + 1;
    for (int e : m.exponents.exponents()) os << ' ' << e;
    os << ' ' << format_double(m.coefficient) << '\n';
  }
  return os.str();
}

namespace {

nlohmann::json scalar_json(double v) { return v; }
nlohmann::json scalar_json(const Interval& v) { return nlohmann::json::array({v.lower(), v.upper()}); }

std::string exponent_text(const MultiIndex& m) {
  std::string s;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    if (j) s += ' ';
    s += std::to_string(m[j]);
  }
  return s;
}

template <Scalar T>
std::string value_fields(const T& v) {
  if constexpr (is_interval_v<T>)
    return format_double(v.lower()) + "," + format_double(v.upper());
  else
    return format_double(v);
}

template <Scalar T>
std::string value_header() {
  return is_interval_v<T> ? "value_lo,value_hi" : "value";
}

}  // namespace

template <Scalar T>
std::string certificate_json(const Certificate<T>& cert) {
  nlohmann::ordered_json j;
  j["n1"] = cert.n1;
  j["r_theta"] = cert.r_theta;
  j["C"] = cert.C;
  j["M"] = cert.M;
  j["Omega"] = scalar_json(cert.omega);
  j["A"] = scalar_json(cert.quadratic);
  j["mode"] = std::string(mode_name<T>());
  j["shrink_iterations"] = cert.shrink_iterations;
  j["lambda"] = cert.lambda;
  j["mu"] = cert.mu;
  j["rho"] = cert.rho;
  j["degenerate_fit"] = cert.degenerate_fit;
  j["sigma_at_r_theta"] = cert.sigma_at_radius;
  j["remainder"] = {{"radius", cert.r_theta}, {"exponent", cert.n1 + 1}};
  return j.dump(2) + "\n";
}

template <Scalar T>
std::string coefficients_csv(const ManifoldParam<T>& phi, const ManifoldParam<T>& psi) {
  std::ostringstream os;
  os << "side,component,exponents," << value_header<T>() << '\n';
  for (const auto* p : {&phi, &psi}) {
    for (std::size_t i = 0; i < p->components.size(); ++i)
      for (const auto& [m, c] : p->components[i])
        os << side_name(p->side) << ',' << i + 1 << ',' << exponent_text(m) << ',' << value_fields(c) << '\n';
  }
  return os.str();
}

template <Scalar T>
std::string normal_form_csv(const NormalFormTail<T>& g) {
  std::ostringstream os;
  os << "component,exponents," << value_header<T>() << '\n';
  for (std::size_t i = 0; i < g.components.size(); ++i)
    for (const auto& [m, c] : g.components[i]) os << i + 1 << ',' << exponent_text(m) << ',' << value_fields(c) << '\n';
  return os.str();
}

std::string enclosure_csv(std::string_view side, std::size_t dim, bool interval,
                          std::span<const EnclosureSample> samples) {
  std::ostringstream os;
  const std::size_t params = samples.empty() ? 0 : samples.front().parameter.size();
  os << "side";
  for (std::size_t a = 0; a < params; ++a) os << ",t" << a + 1;
  for (std::size_t j = 0; j < dim; ++j) {
    if (interval)
      os << ",z" << j + 1 << "_lo,z" << j + 1 << "_hi";
    else
      os << ",z" << j + 1;
  }
  os << ",remainder\n";
  for (const auto& s : samples) {
    os << side;
    for (double t : s.parameter) os << ',' << format_double(t);
    for (std::size_t j = 0; j < dim; ++j) {
      os << ',' << format_double(s.lower[j]);
      if (interval) os << ',' << format_double(s.upper[j]);
    }
    os << ',' << format_double(s.remainder) << '\n';
  }
  return os.str();
}

std::string plot_script() {
  return R"(#!/usr/bin/env python3
"""Plot the sampled manifold enclosures written next to this script.

Draws the first and last coordinates of every sample with a box of
half-width equal to the remainder bound (plus the coefficient enclosure in
interval mode). Usage: python3 plot_manifolds.py [output.png]
"""
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import Rectangle

HERE = os.path.dirname(os.path.abspath(__file__))


def load(name):
    path = os.path.join(HERE, name)
    if not os.path.exists(path):
        return [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def coordinate(header, row, j):
    lo = f"z{j}_lo"
    if lo in header:
        return float(row[header.index(lo)]), float(row[header.index(f"z{j}_hi")])
    v = float(row[header.index(f"z{j}")])
    return v, v


def main():
    fig, ax = plt.subplots(figsize=(6, 6))
    for name, colour in (("enclosure_stable.csv", "tab:blue"), ("enclosure_unstable.csv", "tab:red")):
        header, rows = load(name)
        if not rows:
            continue
        dim = sum(1 for h in header if h.startswith("z") and not h.endswith("_hi"))
        first, last = 1, dim
        xs, ys = [], []
        for row in rows:
            rem = float(row[header.index("remainder")])
            x0, x1 = coordinate(header, row, first)
            y0, y1 = coordinate(header, row, last)
            ax.add_patch(Rectangle((x0 - rem, y0 - rem), x1 - x0 + 2 * rem, y1 - y0 + 2 * rem,
                                   fill=False, edgecolor=colour, linewidth=0.3))
            xs.append(0.5 * (x0 + x1))
            ys.append(0.5 * (y0 + y1))
        ax.plot(xs, ys, color=colour, linewidth=1.0, label=name.split("_")[1].split(".")[0])
    ax.set_xlabel("z1")
    ax.set_ylabel("z_d")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend()
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(HERE, "manifolds.png")
    fig.savefig(out, dpi=150)


if __name__ == "__main__":
    main()
)";
}

template std::string certificate_json<double>(const Certificate<double>&);
template std::string certificate_json<Interval>(const Certificate<Interval>&);
template std::string coefficients_csv<double>(const ManifoldParam<double>&, const ManifoldParam<double>&);
template std::string coefficients_csv<Interval>(const ManifoldParam<Interval>&, const ManifoldParam<Interval>&);
template std::string normal_form_csv<double>(const NormalFormTail<double>&);
template std::string normal_form_csv<Interval>(const NormalFormTail<Interval>&);

}  // namespace invman
