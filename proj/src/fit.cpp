#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "invman/certificate.hpp"

namespace invman {

GeometricBound fit_geometric_bound(const std::vector<double>& gamma, int n1) {
  const int n0 = n1 / 2;
  std::vector<int> window;
  for (int k = n0 + 1; k <= n1 && k < static_cast<int>(gamma.size()); ++k)
    if (gamma[static_cast<std::size_t>(k)] > 0.0) window.push_back(k);
  if (window.size() < 2)
    throw DegenerateWindow("fit window (" + std::to_string(n0) + ", " + std::to_string(n1) + "] has " +
                           std::to_string(window.size()) + " nonzero coefficient(s)");

  const auto rows = static_cast<Eigen::Index>(window.size());
  Eigen::MatrixX2d design(rows, 2);
  Eigen::VectorXd logs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const int k = window[static_cast<std::size_t>(r)];
    design(r, 0) = 1.0;
    design(r, 1) = static_cast<double>(k);
    logs(r) = std::log(gamma[static_cast<std::size_t>(k)]);
  }
  const Eigen::Vector2d coef = (design.transpose() * design).ldlt().solve(design.transpose() * logs);

  GeometricBound fit{std::exp(coef(0)), std::exp(coef(1))};
  for (int k : window) {
    const double g = gamma[static_cast<std::size_t>(k)];
    const double mk = std::pow(fit.M, k);
    if (g > fit.C * mk) {
      fit.C = g / mk;
      while (fit.C * mk < g) fit.C = std::nextafter(fit.C, std::numeric_limits<double>::infinity());
    }
  }
  return fit;
}

}  // namespace invman
