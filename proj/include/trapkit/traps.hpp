#pragma once

#include <optional>
#include <vector>

#include "trapkit/grid.hpp"
#include "trapkit/rationality.hpp"
#include "trapkit/subdifferential.hpp"

namespace trapkit {

/// Is xbar not worthwhile to quit? L_xi(x/xbar) = phi(x) - phi(xbar) + xi C(xbar, x)
/// must stay >= -gamma on the region (gamma = 0: exact trap; strict: > 0 off-center).
struct TrapQuery {
  ScalarField phi;
  Point xbar;
  WeightFactor xi{0.0};
  CostModel cost;
  Ball region;
  double gamma = 0.0;
  bool strict = false;
  bool whole_domain = false;  // region stands for all of X (global trap claim)

  TrapQuery(ScalarField phi_, Point xbar_, WeightFactor xi_, Ball region_, double gamma_ = 0.0, bool strict_ = false)
      : phi(std::move(phi_)), xbar(std::move(xbar_)), xi(xi_), cost(CostModel::unit(phi.dim())),
        region(std::move(region_)), gamma(gamma_), strict(strict_) {}
};

struct TrapVerdict {
  bool is_trap = false;
  double worst_margin = 0.0;     // trap check: min L_xi; certificates: min E_{x*}
  std::optional<Point> witness;  // where worst_margin is attained
  std::optional<double> xi_lower;             // certificates: trap for every xi > xi_lower
  std::optional<double> neighborhood_radius;  // certificates: radius of the certified neighborhood
  std::optional<double> subgradient_margin;   // certificates: eps-subgradient test slack
  std::optional<bool> flat_enough;            // approximate certificates: |x*| * radius <= gamma
  bool global_claim = false;
  int grid_per_axis = 0;
  std::size_t grid_points = 0;
};

/// Grid check of the trap inequality over grid points lying in q.region.
TrapVerdict is_stationary_trap(const TrapQuery& q, const GridSpec& grid);

/// Weight margin nu used to size the certified neighborhood (xi = eps + nu).
inline constexpr double kCertificateNu = 0.1;

/// Exact-trap certificate: x* is an eps-subgradient and <x*, x - xbar> >= 0 on
/// the grid ball. On success xbar is a trap for every xi > eps; the verdict
/// also carries a neighborhood radius on which the xi = eps + nu trap holds.
TrapVerdict trap_certificate(const ScalarField& phi, const Point& xbar, double eps, const Point& xstar,
                             const GridSpec& grid, const ProbeSpec& probe = {}, double nu = kCertificateNu);

/// gamma-approximate version: <x*, x - xbar> >= -gamma on the grid ball.
TrapVerdict approx_trap_certificate(const ScalarField& phi, const Point& xbar, double eps, const Point& xstar,
                                    double gamma, const GridSpec& grid, const ProbeSpec& probe = {},
                                    double nu = kCertificateNu);

struct ClassifyOptions {
  std::vector<double> eps_scan;  // default {0, 0.1, ..., 2}
  int per_axis = 41;             // minimizer grid resolution on the probe ball

  ClassifyOptions();
};

struct TrapClassification {
  bool flat_at_zero = false;        // 0 is a regular subgradient
  std::optional<double> flat_eps;   // smallest scanned eps with 0 an eps-subgradient
  double eps_min = 0.0;             // minimal subdifferential factor for x* = 0
  bool local_minimizer = false;     // xi = 0 trap: phi(x) >= phi(xbar) on the probe ball
  double minimizer_margin = 0.0;
  std::vector<Point> nonzero_rates; // certified nonzero regular subgradients
};

TrapClassification classify_trap(const ScalarField& phi, const Point& xbar, const ProbeSpec& probe = {},
                                 const ClassifyOptions& opts = {});

}  // namespace trapkit
