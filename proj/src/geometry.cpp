#include "trapkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace trapkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double snap(double v) { return std::fabs(v) < 1e-14 ? 0.0 : v; }

void require_member(const RegionSet& omega, const Point& xbar, const char* what) {
  if (xbar.dim() != omega.dim()) throw DimensionError(std::string(what) + ": point and set dimensions differ");
  if (!omega.contains(xbar))
    throw DomainError(std::string(what) + ": reference point " + xbar.to_string() + " is not in " + omega.describe());
}

// 0.5 (c, s) nudged by ulps until its computed norm is exactly 1/2.
Point half_rate(double c, double s) {
  Point v{0.5 * c, 0.5 * s};
  const int big = std::fabs(v[0]) >= std::fabs(v[1]) ? 0 : 1;
  for (int it = 0; it < 64 && v.norm() != 0.5; ++it) {
    const double toward = v.norm() > 0.5 ? 0.0 : 2.0 * v[big];
    v[big] = std::nextafter(v[big], toward);
  }
  if (v.norm() != 0.5) throw Error("could not normalize rate to norm 1/2");
  return v;
}

// Unit directions from xbar to the window-shell samples that lie in omega.
std::vector<Point> window_directions(const RegionSet& omega, const Point& xbar, const ProbeSpec& probe) {
  const auto shells = shell_offsets(probe, xbar.dim());
  std::vector<Point> out;
  for (std::size_t k = shells.size() - static_cast<std::size_t>(probe.liminf_window); k < shells.size(); ++k)
    for (const auto& u : shells[k])
      if (omega.contains(xbar + u)) out.push_back((1.0 / u.norm()) * u);
  return out;
}

double limsup_estimate(const std::vector<Point>& dirs, const Point& xstar) {
  double m = -kInf;
  for (const auto& d : dirs) m = std::max(m, xstar.dot(d));
  return m;
}

}  // namespace

RegionSet RegionSet::halfspace(Point normal, double offset) {
  if (!std::isfinite(offset)) throw DomainError("halfspace offset must be finite");
  if (normal.norm() == 0.0) throw ContractError("halfspace normal must be nonzero");
  RegionSet r(Kind::Halfspace, normal.dim());
  r.a_ = std::move(normal);
  r.scalar_ = offset;
  return r;
}

RegionSet RegionSet::ball(Point center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ContractError("ball radius must be positive and finite");
  RegionSet r(Kind::Ball, center.dim());
  r.a_ = std::move(center);
  r.scalar_ = radius;
  return r;
}

RegionSet RegionSet::box(Point lo, Point hi) {
  require_same_dim(lo, hi, "box");
  for (int i = 0; i < lo.dim(); ++i)
    if (lo[i] > hi[i]) throw ContractError("box lower corner exceeds upper corner");
  RegionSet r(Kind::Box, lo.dim());
  r.a_ = std::move(lo);
  r.b_ = std::move(hi);
  return r;
}

RegionSet RegionSet::predicate(std::string_view text, int dim) {
  RegionSet r(Kind::Predicate, dim);
  r.pred_ = parse_predicate(text, dim);
  r.text_ = std::string(text);
  return r;
}

bool RegionSet::contains(const Point& x) const {
  if (x.dim() != dim_) throw DimensionError("set membership: dimension mismatch");
  switch (kind_) {
    case Kind::Halfspace:
      return a_.dot(x) <= scalar_;
    case Kind::Ball:
      return distance(x, a_) <= scalar_;
    case Kind::Box:
      for (int i = 0; i < dim_; ++i)
        if (x[i] < a_[i] || x[i] > b_[i]) return false;
      return true;
    case Kind::Predicate:
      return satisfies(pred_, x.coords());
  }
  return false;
}

std::string RegionSet::describe() const {
  switch (kind_) {
    case Kind::Halfspace:
      return "halfspace{<" + a_.to_string() + ", x> <= " + ExtReal(scalar_).to_string() + "}";
    case Kind::Ball:
      return "ball{" + a_.to_string() + ", " + ExtReal(scalar_).to_string() + "}";
    case Kind::Box:
      return "box{" + a_.to_string() + ", " + b_.to_string() + "}";
    case Kind::Predicate:
      return "set{" + text_ + "}";
  }
  return {};
}

MembershipResult eps_normal_member(const RegionSet& omega, const Point& xbar, const Point& xstar, double eps,
                                   const ProbeSpec& probe) {
  if (!(eps >= 0.0)) throw ContractError("eps must be >= 0");
  require_same_dim(xbar, xstar, "eps-normal");
  require_member(omega, xbar, "eps-normal");

  MembershipResult r;
  const auto shells = shell_offsets(probe, xbar.dim());
  for (const auto& shell : shells) {
    double m = -kInf;
    for (const auto& u : shell)
      if (omega.contains(xbar + u)) m = std::max(m, xstar.dot(u) / u.norm());
    r.shell_values.push_back(m);
  }
  r.estimate = -kInf;
  for (std::size_t k = shells.size() - static_cast<std::size_t>(probe.liminf_window); k < shells.size(); ++k)
    r.estimate = std::max(r.estimate, r.shell_values[k]);
  r.margin = eps - r.estimate;
  r.member = r.margin >= -probe.tol;
  return r;
}

TrapVerdict trap_relative_check(const Point& xstar, WeightFactor xi, const Point& xbar, const RegionSet& omega,
                                const GridSpec& grid) {
  require_same_dim(xbar, xstar, "relative trap");
  require_member(omega, xbar, "relative trap");
  require_same_dim(xbar, grid.ball.center, "relative trap grid");

  const int n = xbar.dim();
  const ScalarField u = ScalarField::native(
      n, [xstar](std::span<const double> c) { return xstar.dot(Point(c)); }, "linear utility");
  const CostModel unit = CostModel::unit(n);
  const double ub = xstar.dot(xbar);
  const double xv = xi.value();

  const auto hood = search_neighborhood(
      GridSpec(Ball(xbar, grid.ball.radius), grid.per_axis, grid.cap),
      [&](const Point& x) {
        if (!omega.contains(x)) return kInf;
        const double m1 = ub - (xstar.dot(x) - xv * distance(x, xbar));
        const double m2 = xv * cost(unit, xbar, x) - advantage(u, xbar, x);
        if (std::fabs(m1 - m2) > 1e-12 * std::max(1.0, std::fabs(m1)))
          throw Error("relative trap forms disagree at " + x.to_string());
        return m1;
      },
      kGridTol);

  TrapVerdict v;
  v.is_trap = hood.found;
  v.worst_margin = hood.scan.worst;
  v.witness = hood.scan.witness;
  v.neighborhood_radius = hood.radius;
  v.grid_per_axis = grid.per_axis;
  v.grid_points = hood.scan.points;
  return v;
}

ExtremalityCertificate is_locally_extremal(const RegionSet& omega1, const RegionSet& omega2, const Point& xbar,
                                           const std::vector<std::pair<Point, Point>>& shifts, const Ball& region,
                                           const GridSpec& grid) {
  require_member(omega1, xbar, "local extremality");
  require_member(omega2, xbar, "local extremality");
  if (omega1.dim() != omega2.dim()) throw DimensionError("local extremality: set dimensions differ");
  require_same_dim(xbar, region.center, "local extremality region");

  std::vector<Point> pts;
  for (auto& x : grid_points(grid))
    if (region.contains(x)) pts.push_back(std::move(x));

  ExtremalityCertificate cert;
  std::vector<double> sizes;
  for (const auto& [a1, a2] : shifts) {
    require_same_dim(xbar, a1, "shift");
    require_same_dim(xbar, a2, "shift");
    ShiftOutcome o;
    o.empty = true;
    for (const auto& x : pts)
      if (omega1.contains_shifted(x, a1) && omega2.contains_shifted(x, a2)) {
        o.empty = false;
        o.overlap = x;
        break;
      }
    cert.shifts.push_back(std::move(o));
    sizes.push_back(std::max(a1.norm(), a2.norm()));
  }
  if (shifts.empty()) return cert;

  std::size_t start = shifts.size();
  while (start > 0 && cert.shifts[start - 1].empty) --start;
  const std::size_t tail = shifts.size() - start;
  if (tail == 0) return cert;
  cert.cutoff = start;
  bool shrinking = sizes.back() < sizes[start] || tail == 1;
  for (std::size_t k = start + 1; k < shifts.size(); ++k) shrinking = shrinking && sizes[k] <= sizes[k - 1];
  cert.extremal = tail >= std::min<std::size_t>(3, shifts.size()) && shrinking && sizes.back() > 0.0;
  return cert;
}

WitnessResult extremal_witness(const RegionSet& omega1, const RegionSet& omega2, const Point& xbar, double eps,
                               const ProbeSpec& probe, const WitnessScan& scan) {
  if (!(eps > 0.0)) throw ContractError("extremal witness needs eps > 0");
  if (xbar.dim() != 2 || omega1.dim() != 2 || omega2.dim() != 2)
    throw DimensionError("extremal witness search is implemented in R^2 only");
  if (scan.directions < 4) throw ContractError("direction scan needs at least 4 directions");
  require_member(omega1, xbar, "extremal witness");
  require_member(omega2, xbar, "extremal witness");

  const auto grid = grid_points(GridSpec(Ball(xbar, eps), scan.per_axis));
  struct Cand {
    Point x;
    std::vector<Point> dirs;
  };
  auto candidates = [&](const RegionSet& omega) {
    std::vector<Cand> out{{xbar, window_directions(omega, xbar, probe)}};
    for (const auto& x : grid)
      if (x != xbar && omega.contains(x)) out.push_back({x, window_directions(omega, x, probe)});
    return out;
  };
  const auto c1 = candidates(omega1);
  const auto c2 = candidates(omega2);

  auto best_point = [](const std::vector<Cand>& cs, const Point& xstar) {
    std::size_t bi = 0;
    double bv = kInf;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const double v = limsup_estimate(cs[i].dirs, xstar);
      if (v < bv) {
        bv = v;
        bi = i;
      }
    }
    return std::pair{bi, bv};
  };

  WitnessResult res;
  double best_score = kInf;
  for (int j = 0; j < scan.directions; ++j) {
    const double a = 2.0 * std::numbers::pi * j / scan.directions;
    const Point r1 = half_rate(snap(std::cos(a)), snap(std::sin(a)));
    const Point r2 = -r1;
    const auto [i1, e1] = best_point(c1, r1);
    const auto [i2, e2] = best_point(c2, r2);
    const double score = std::max(e1, e2) - eps;
    if (score < best_score) {
      best_score = score;
      res.witness = ExtremalWitness{c1[i1].x, c2[i2].x, r1, r2, eps};
      res.angle_deg = 360.0 * j / scan.directions;
      res.estimate1 = e1;
      res.estimate2 = e2;
    }
  }
  res.found = res.witness && best_score <= probe.tol;
  if (!res.found) return res;

  const auto& w = *res.witness;
  for (double xi : {1.5 * eps, eps + 0.1}) {
    const GridSpec g1(Ball(w.x1, eps), scan.per_axis);
    const GridSpec g2(Ball(w.x2, eps), scan.per_axis);
    res.traps.push_back({xi, trap_relative_check(w.rate1, WeightFactor(xi), w.x1, omega1, g1),
                         trap_relative_check(w.rate2, WeightFactor(xi), w.x2, omega2, g2)});
  }
  return res;
}

}  // namespace trapkit
