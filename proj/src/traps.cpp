#include "trapkit/traps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trapkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TrapVerdict certify(const ScalarField& phi, const Point& xbar, double eps, const Point& xstar, double gamma,
                    const GridSpec& grid, const ProbeSpec& probe, double nu) {
  if (!(eps >= 0.0)) throw ContractError("eps must be >= 0");
  if (!(nu > 0.0)) throw ContractError("neighborhood weight margin must be positive");
  require_same_dim(xbar, xstar, "trap certificate");

  const auto member = eps_subgrad_member({phi, xbar, xstar, eps}, probe);
  const GridSpec g(Ball(xbar, grid.ball.radius), grid.per_axis, grid.cap);
  const auto pts = grid_points(g);
  const auto lin = scan_min(pts, [&](const Point& x) { return xstar.dot(x - xbar); });

  TrapVerdict v;
  v.worst_margin = lin.worst;
  v.witness = lin.witness;
  v.subgradient_margin = member.margin;
  v.grid_per_axis = grid.per_axis;
  v.grid_points = lin.points;
  v.is_trap = member.member && lin.worst >= -gamma - kGridTol;
  if (gamma > 0.0) v.flat_enough = xstar.norm() * grid.ball.radius <= gamma;
  if (!v.is_trap) return v;
  v.xi_lower = eps;

  // Neighborhood where L_{eps+nu} >= E_{x*} >= -gamma.
  const double base = phi.eval(xbar).value();
  const double xi = eps + nu;
  const auto hood = search_neighborhood(
      g,
      [&](const Point& x) {
        const ExtReal fx = phi.eval(x);
        const Point d = x - xbar;
        const double e = xstar.dot(d);
        const double l = fx.is_infinite() ? kInf : fx.raw() - base + xi * d.norm();
        return std::min(l - e, e + gamma);
      },
      0.25 * kGridTol);
  if (hood.found) v.neighborhood_radius = hood.radius;
  return v;
}

}  // namespace

TrapVerdict is_stationary_trap(const TrapQuery& q, const GridSpec& grid) {
  if (!(q.gamma >= 0.0)) throw ContractError("gamma must be >= 0");
  if (q.strict && q.gamma != 0.0) throw ContractError("strict traps require gamma = 0");
  require_same_dim(q.xbar, q.region.center, "trap region");
  require_same_dim(q.xbar, grid.ball.center, "trap grid");
  const ExtReal fbar = q.phi.eval(q.xbar);
  if (fbar.is_infinite()) throw DomainError("payoff is +inf at the reference point " + q.xbar.to_string());
  const double base = fbar.raw();

  std::vector<Point> pts;
  for (auto& p : grid_points(grid))
    if (q.region.contains(p) && !(q.strict && p == q.xbar)) pts.push_back(std::move(p));

  const auto scan = scan_min(pts, [&](const Point& x) {
    const ExtReal fx = q.phi.eval(x);
    if (fx.is_infinite()) return kInf;
    return fx.raw() - base + q.xi.value() * cost(q.cost, q.xbar, x);
  });

  TrapVerdict v;
  v.worst_margin = scan.worst;
  v.witness = scan.witness;
  v.global_claim = q.whole_domain;
  v.grid_per_axis = grid.per_axis;
  v.grid_points = scan.points;
  v.is_trap = q.strict ? scan.worst > kGridTol : scan.worst >= -q.gamma - kGridTol;
  return v;
}

TrapVerdict trap_certificate(const ScalarField& phi, const Point& xbar, double eps, const Point& xstar,
                             const GridSpec& grid, const ProbeSpec& probe, double nu) {
  return certify(phi, xbar, eps, xstar, 0.0, grid, probe, nu);
}

TrapVerdict approx_trap_certificate(const ScalarField& phi, const Point& xbar, double eps, const Point& xstar,
                                    double gamma, const GridSpec& grid, const ProbeSpec& probe, double nu) {
  if (!(gamma > 0.0)) throw ContractError("approximate certificates need gamma > 0");
  return certify(phi, xbar, eps, xstar, gamma, grid, probe, nu);
}

ClassifyOptions::ClassifyOptions() {
  for (int i = 0; i <= 20; ++i) eps_scan.push_back(0.1 * i);
}

TrapClassification classify_trap(const ScalarField& phi, const Point& xbar, const ProbeSpec& probe,
                                 const ClassifyOptions& opts) {
  const int n = xbar.dim();
  const Point zero = Point::zero(n);
  TrapClassification out;

  const auto member = eps_subgrad_member({phi, xbar, zero, 0.0}, probe);
  out.flat_at_zero = member.member;
  for (double e : opts.eps_scan)
    if (member.estimate + e >= -probe.tol) {
      out.flat_eps = out.flat_eps ? std::min(*out.flat_eps, e) : e;
    }
  out.eps_min = min_eps_factor(phi, xbar, zero, probe);

  const double base = phi.eval(xbar).value();
  auto rise = [&](const Point& x) {
    const ExtReal fx = phi.eval(x);
    return fx.is_infinite() ? kInf : fx.raw() - base;
  };
  auto pts = grid_points(GridSpec(Ball(xbar, probe.r0), opts.per_axis));
  for (const auto& shell : shell_offsets(probe, n))
    for (const auto& u : shell) pts.push_back(xbar + u);
  out.minimizer_margin = scan_min(pts, rise).worst;
  out.local_minimizer = out.minimizer_margin >= -kGridTol;

  if (n == 1) {
    for (const auto& iv : eps_subdiff_interval_1d(phi, xbar, 0.0, probe))
      for (double r : {iv.lo, iv.hi})
        if (r != 0.0 && (out.nonzero_rates.empty() || out.nonzero_rates.back()[0] != r))
          out.nonzero_rates.push_back(Point{r});
  } else {
    try {
      const Point g = gradient(phi, xbar);
      if (g.norm() > 0.0 && eps_subgrad_member({phi, xbar, g, 0.0}, probe).member) out.nonzero_rates.push_back(g);
    } catch (const DomainError&) {
    }
  }
  return out;
}

}  // namespace trapkit
