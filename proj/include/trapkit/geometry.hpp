#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trapkit/expr.hpp"
#include "trapkit/subdifferential.hpp"
#include "trapkit/traps.hpp"

namespace trapkit {

/// Closed subset of R^n: halfspace <a, x> <= b, closed ball, box or a
/// conjunction of closed comparisons.
class RegionSet {
 public:
  enum class Kind { Halfspace, Ball, Box, Predicate };

  static RegionSet halfspace(Point normal, double offset);
  static RegionSet ball(Point center, double radius);
  static RegionSet box(Point lo, Point hi);
  static RegionSet predicate(std::string_view text, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool contains(const Point& x) const;
  /// Membership in the translate Omega - a: x + a in Omega.
  bool contains_shifted(const Point& x, const Point& a) const { return contains(x + a); }
  std::string describe() const;

 private:
  RegionSet(Kind k, int dim) : kind_(k), dim_(dim) {}

  Kind kind_;
  int dim_;
  Point a_, b_;      // halfspace normal / ball center / box lo ; box hi
  double scalar_ = 0.0;  // halfspace offset / ball radius
  std::vector<Constraint> pred_;
  std::string text_;
};

/// x* in the eps-normal set of omega at xbar: limsup over omega-points x -> xbar
/// of <x*, x - xbar> / |x - xbar| <= eps, estimated on the innermost shells.
/// estimate is -inf when no shell sample lies in omega. margin = eps - estimate.
MembershipResult eps_normal_member(const RegionSet& omega, const Point& xbar, const Point& xstar, double eps,
                                   const ProbeSpec& probe = {});

/// Linear-utility proximal payoff u(x) - xi |x - xbar| <= u(xbar) on grid points
/// of omega, u = <x*, .>, with the neighborhood search around xbar. Both the
/// payoff form and the advantage/cost form are evaluated and cross-checked.
TrapVerdict trap_relative_check(const Point& xstar, WeightFactor xi, const Point& xbar, const RegionSet& omega,
                                const GridSpec& grid);

struct ShiftOutcome {
  bool empty = false;            // no grid point in both shifted sets
  std::optional<Point> overlap;  // first overlap point otherwise
};

struct ExtremalityCertificate {
  bool extremal = false;
  std::optional<std::size_t> cutoff;  // first index of the passing tail
  std::vector<ShiftOutcome> shifts;
};

/// Local extremality of {omega1, omega2} at xbar: for the supplied shifts
/// (a_1k, a_2k), (omega1 - a_1k) and (omega2 - a_2k) share no grid point of
/// region. Extremal when the passing tail ends at the last shift, has length
/// >= min(3, #shifts) and the shift sizes decrease along it.
ExtremalityCertificate is_locally_extremal(const RegionSet& omega1, const RegionSet& omega2, const Point& xbar,
                                           const std::vector<std::pair<Point, Point>>& shifts, const Ball& region,
                                           const GridSpec& grid);

struct WitnessScan {
  int per_axis = 21;     // grid for the points x_i in the eps-ball
  int directions = 720;  // unit directions for x*_1 (0.5 degree resolution)
};

struct ExtremalWitness {
  Point x1, x2;
  Point rate1, rate2;
  double eps = 0.0;
};

struct RelativeTrapSample {
  double xi = 0.0;
  TrapVerdict set1, set2;
};

struct WitnessResult {
  bool found = false;
  std::optional<ExtremalWitness> witness;  // best candidate, also on failure (near miss)
  double angle_deg = 0.0;                  // direction of x*_1
  double estimate1 = 0.0;                  // eps-normal estimates at x_1, x_2
  double estimate2 = 0.0;
  std::vector<RelativeTrapSample> traps;   // relative trap certification for sampled xi > eps
};

/// Two-set extremal principle witness in R^2: x_i in omega_i with |x_i - xbar| <= eps
/// and x*_1 = -x*_2, |x*_i| = 1/2, each an eps-normal at x_i.
WitnessResult extremal_witness(const RegionSet& omega1, const RegionSet& omega2, const Point& xbar, double eps,
                               const ProbeSpec& probe = {}, const WitnessScan& scan = {});

}  // namespace trapkit
