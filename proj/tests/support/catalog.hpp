#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "trapkit/scalar_field.hpp"

namespace trapkit::testing {

struct CatalogEntry {
  std::string expr;
  int dim;
  std::vector<std::string> grad;
};

/// Polynomials with hand-derived gradients.
inline const std::vector<CatalogEntry>& polynomial_catalog() {
  static const std::vector<CatalogEntry> c{
      {"x1 - 0.5*x1^2", 1, {"1 - x1"}},
      {"x1^2", 1, {"2*x1"}},
      {"x1^3 - 2*x1", 1, {"3*x1^2 - 2"}},
      {"0.25*x1^4 - x1^2 + x1", 1, {"x1^3 - 2*x1 + 1"}},
      {"x1^2 + 3*x1*x2 - x2^2", 2, {"2*x1 + 3*x2", "3*x1 - 2*x2"}},
      {"x1^2*x2 + x2^3", 2, {"2*x1*x2", "x1^2 + 3*x2^2"}},
      {"x1*x2*x3 + x1^2 - x3", 3, {"x2*x3 + 2*x1", "x1*x3", "x1*x2 - 1"}},
  };
  return c;
}

inline ScalarField catalog_field(const CatalogEntry& e) { return parse_field(e.expr, e.dim, "", e.grad); }

/// x^2 sin(1/x) extended by 0 at the origin.
inline ScalarField x2_sin_inv_x() {
  return ScalarField::native(
      1, [](std::span<const double> x) { return x[0] == 0.0 ? 0.0 : x[0] * x[0] * std::sin(1.0 / x[0]); },
      "x2_sin_inv_x");
}

inline Point random_point(std::mt19937_64& rng, int dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> c;
  for (int i = 0; i < dim; ++i) c.push_back(u(rng));
  return Point(c);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace trapkit::testing
