#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trapkit/evaluations.hpp"
#include "trapkit/subdifferential.hpp"
#include "trapkit/traps.hpp"

namespace trapkit {

/// gamma, lambda > 0, closed region V(xbar) and the grid realizing it.
struct EkelandParams {
  double gamma = 0.0;
  double lambda = 0.0;
  Ball region;
  GridSpec grid;

  EkelandParams(double gamma_, double lambda_, Ball region_, GridSpec grid_);
  double kappa() const { return gamma / lambda; }
};

struct DescentTrace {
  std::vector<Point> iterates;           // x_0 = xbar, x_1, ...
  Point final;
  std::vector<double> objective_values;  // theta(x_j)
};

/// xbar is not a gamma-approximate trap on the region; carries the failed verdict.
class HypothesisError : public ContractError {
 public:
  HypothesisError(const std::string& what, TrapVerdict verdict) : ContractError(what), verdict_(std::move(verdict)) {}
  const TrapVerdict& verdict() const { return verdict_; }

 private:
  TrapVerdict verdict_;
};

struct EkelandResult {
  Point x_gamma;
  DescentTrace trace;
  TrapVerdict hypothesis;
};

/// theta(x) = phi(x) - phi(xbar) + xi |x - xbar|, +inf where phi is.
double ekeland_objective(const ScalarField& phi, const Point& xbar, WeightFactor xi, const Point& x);

/// Region grid points plus xbar, lexicographically sorted without duplicates.
std::vector<Point> region_candidates(const Point& xbar, const EkelandParams& p);

/// Grid Ekeland descent: x_{j+1} is the lexicographically least minimizer of
/// theta + (gamma/lambda)|. - x_j| over candidates within lambda of xbar; a move
/// happens only on strict improvement. Throws HypothesisError when xbar is not
/// a gamma-approximate trap on the region.
EkelandResult ekeland_descend(const ScalarField& phi, const Point& xbar, WeightFactor xi, const EkelandParams& p);

/// Q(x_gamma) <= Q(x) + (gamma/lambda)|x - x_gamma| on the region grid, with
/// Q = phi + xi |. - xbar|. worst_gap is the smallest slack.
EvaluationVerdict verify_perturbed_min(const ScalarField& phi, const Point& xbar, WeightFactor xi,
                                       const Point& x_gamma, const EkelandParams& p);

struct RateCheck {
  std::string status;     // "pass" or "inconclusive"
  double kappa = 0.0;     // gamma / lambda
  double slack = 0.0;     // one grid step
  bool interior = false;  // x_gamma strictly inside the region
  // 1-D: regular subdifferential of Q restricted to the region, at x_gamma.
  std::optional<Interval> hull;
  std::vector<Interval> intervals;  // `hull` clipped to the default scan range
  // hull meets [-kappa - slack, kappa + slack], or some point within one grid step
  // of x_gamma has the rate +-(kappa + slack) in its regular subdifferential
  std::optional<bool> intersects;
  std::optional<double> representative;
  std::optional<double> nearby;     // sample near that point when the second route was needed
  std::optional<bool> rate1;        // representative - xi n in the subdifferential of phi, n a norm subgradient
  // rate2: ball(center, radius) = grad phi(x_gamma) + xi * (norm subdifferential)
  std::optional<Point> rate2_center;
  std::optional<double> rate2_radius;
  std::optional<bool> rate2;        // that set meets the kappa ball within slack
  std::optional<double> rate2_error;  // |center - hull midpoint| (1-D, interior, x_gamma != xbar)
};

/// Checks for a rate x* in the regular subdifferential of Q at x_gamma with
/// |x*| <= gamma/lambda, and its decompositions. 1-D uses subdifferential
/// intervals; higher dimensions need an analytic gradient and check rate2 only.
RateCheck rate_bound_check(const ScalarField& phi, const Point& xbar, WeightFactor xi, const Point& x_gamma,
                           const EkelandParams& p, const ProbeSpec& probe = {});

}  // namespace trapkit
