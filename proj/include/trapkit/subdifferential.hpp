#pragma once

#include <optional>
#include <vector>

#include "trapkit/evaluations.hpp"
#include "trapkit/grid.hpp"
#include "trapkit/scalar_field.hpp"

namespace trapkit {

/// Shrinking-shell sampling plan for liminf / limsup quantities as x -> xbar.
///
/// Shell k (k = 0..shells-1) holds samples at distance in [r_k / 2, r_k] from
/// the center, r_k = r0 / 2^k. In 1-D a shell is the two endpoints +-r_k plus
/// uniformly spaced interior points on both sides; in 2-D and 3-D it is a set
/// of directions (always including the coordinate axes) at radius r_k.
/// Limit estimates use only the `liminf_window` innermost shells.
struct ProbeSpec {
  double r0 = 0.5;
  int shells = 12;
  int samples_per_shell = 64;
  int liminf_window = 3;
  double tol = 1e-6;

  void validate() const;
  ProbeSpec with_r0(double r) const {
    ProbeSpec p = *this;
    p.r0 = r;
    return p;
  }
};

/// Offsets from the center, one vector per shell.
std::vector<std::vector<Point>> shell_offsets(const ProbeSpec& probe, int dim);

struct SubgradientQuery {
  ScalarField phi;
  Point xbar;
  Point xstar;
  double eps = 0.0;
};

struct MembershipResult {
  bool member = false;
  double estimate = 0.0;  // liminf (or limsup for normals) estimate
  double margin = 0.0;    // signed slack of the test; >= -tol means member
  std::vector<double> shell_values;  // per-shell min (or max), outermost first
};

/// x* in the eps-subdifferential: liminf of
/// (phi(x) - phi(xbar) - <x*, x - xbar>) / |x - xbar| >= -eps,
/// estimated by the minimum over the innermost shells.
MembershipResult eps_subgrad_member(const SubgradientQuery& q, const ProbeSpec& probe = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double v, double slack = 0.0) const { return v >= lo - slack && v <= hi + slack; }
};

struct ScanRange {
  double lo = -10.0;
  double hi = 10.0;
  double step = 0.01;

  std::size_t count() const;
  double at(std::size_t i) const { return lo + static_cast<double>(i) * step; }
};

/// The x* accepted by eps_subgrad_member within [scan.lo, scan.hi], as maximal
/// intervals with exact endpoints (at most one in 1-D). 1-D only.
std::vector<Interval> eps_subdiff_interval_1d(const ScalarField& phi, const Point& xbar, double eps,
                                              const ProbeSpec& probe = {}, const ScanRange& scan = {});

/// The exact set of x* that eps_subgrad_member accepts for the same probe
/// samples. In 1-D this is one closed interval, possibly empty (nullopt) or
/// unbounded on a side (+-inf endpoints).
std::optional<Interval> eps_subdiff_hull_1d(const ScalarField& phi, const Point& xbar, double eps,
                                            const ProbeSpec& probe = {});

/// phi(x) >= phi(xbar) + <v, x - xbar> - (rho/2)|x - xbar|^2 near xbar (grid
/// check with the neighborhood search).
EvaluationVerdict proximal_subgrad_member(const ScalarField& phi, const Point& xbar, const Point& v, double rho,
                                          const GridSpec& grid);

struct LimitingOptions {
  std::vector<double> eps_levels{0.1, 0.05, 0.01};
  int points_per_side = 256;  // sample points x_k per side and level
  ScanRange scan{};
};

/// Approximate limiting subdifferential in 1-D. Carries no completeness guarantee.
struct LimitingSample {
  std::vector<double> values;      // accepted scan values at the finest level
  std::vector<Interval> clusters;  // `values` merged into runs
  bool approximate = true;
};

/// Collects eps_k-subgradients at points x_k -> xbar with phi(x_k) -> phi(xbar)
/// for decreasing eps_k and keeps the values that persist across all levels.
LimitingSample limiting_subdiff_sample_1d(const ScalarField& phi, const Point& xbar, const ProbeSpec& probe = {},
                                          const LimitingOptions& opts = {});

/// Smallest eps making x* an eps-subgradient, within probe resolution:
/// max(0, -liminf estimate). +inf if the quotient looks unbounded below.
double min_eps_factor(const ScalarField& phi, const Point& xbar, const Point& xstar, const ProbeSpec& probe = {});

/// Merges sorted scan indices into maximal runs of consecutive values.
std::vector<Interval> merge_runs(const std::vector<std::size_t>& indices, const ScanRange& scan);

}  // namespace trapkit
