#pragma once

#include <functional>
#include <optional>

#include "trapkit/grid.hpp"
#include "trapkit/rationality.hpp"
#include "trapkit/scalar_field.hpp"

namespace trapkit {

/// Absolute tolerance of every grid inequality.
inline constexpr double kGridTol = 1e-9;

/// E_{x*}(y/xbar) = <x*, y - xbar>: a linear evaluation with rate x* anchored at xbar.
struct LinearEvaluation {
  Point rate;
  Point anchor;
};

double linear_estimate(const LinearEvaluation& le, const Point& y);

/// Any single-point evaluation l(y/xbar) of a payoff.
using Evaluation = std::function<ExtReal(const Point&)>;

/// l(y/xbar) = value_at_anchor + <x*, y - xbar>.
Evaluation affine_evaluation(double value_at_anchor, LinearEvaluation le);
Evaluation field_evaluation(ScalarField f);

/// Verdict of a grid inequality check with the neighborhood search:
/// radii r, r/2, ..., r/2^10 around xbar, largest passing radius reported.
struct EvaluationVerdict {
  bool holds = false;
  double worst_gap = 0.0;        // min over the grid of the inequality slack
  std::optional<Point> witness;  // most violating point (lexicographically least)
  double radius = 0.0;           // passing radius, or the smallest tried on failure
  std::size_t points = 0;        // grid points scanned at `radius`
};

/// g(y) <= l(y/xbar) near xbar, i.e. A(y/xbar) <= E(y/xbar).
/// The grid supplies the starting radius and resolution and is recentred at xbar.
/// ContractError if l(xbar/xbar) != g(xbar).
EvaluationVerdict check_optimistic(const ScalarField& g, const Evaluation& l, const Point& xbar,
                                   const GridSpec& grid);

/// g(y) >= l(y/xbar) near xbar.
EvaluationVerdict check_pessimistic(const ScalarField& g, const Evaluation& l, const Point& xbar,
                                    const GridSpec& grid);

/// phi(x) - phi(xbar) >= <x*, x - xbar> near xbar: x* is a local classical
/// subgradient, equivalently a rate of a local linear optimistic evaluation of phi.
EvaluationVerdict subgradient_optimistic_cert(const ScalarField& phi, const Point& xbar, const Point& xstar,
                                              const GridSpec& grid);

/// phi(x) - phi(xbar) + xi C(xbar, x) >= <x*, x - xbar> near xbar, the
/// proximal-payoff evaluation that eps-subgradients characterise for xi > eps.
/// ContractError unless xi > eps >= 0.
EvaluationVerdict proximal_evaluation_check(const ScalarField& phi, const CostModel& c, WeightFactor xi,
                                            const Point& xbar, const Point& xstar, double eps,
                                            const GridSpec& grid);

struct SupportVerdict {
  bool holds = false;
  double anchor_gap = 0.0;      // |s(xbar) - phi(xbar)|
  double gradient_error = 0.0;  // max_i |grad s(xbar)_i - x*_i|
  EvaluationVerdict minorant;   // phi(x) - s(x) >= 0 on the grid
};

/// Checks a candidate smooth minorant s of phi touching at xbar with grad s(xbar) = x*.
SupportVerdict verify_support_function(const ScalarField& s, const ScalarField& phi, const Point& xbar,
                                       const Point& xstar, const GridSpec& grid);

}  // namespace trapkit
