#include "trapkit/principles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trapkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// phi restricted to the closed region: +inf outside.
ScalarField restricted(const ScalarField& phi, const Ball& region, double xi, const Point& xbar) {
  return ScalarField::native(
      phi.dim(),
      [=](std::span<const double> c) {
        const Point x(c);
        if (!region.contains(x)) return kInf;
        const ExtReal v = phi.eval(x);
        return v.is_infinite() ? kInf : v.raw() + xi * distance(x, xbar);
      },
      "restricted");
}

bool meets(const Interval& iv, double lo, double hi) { return iv.lo <= hi && iv.hi >= lo; }

}  // namespace

EkelandParams::EkelandParams(double gamma_, double lambda_, Ball region_, GridSpec grid_)
    : gamma(gamma_), lambda(lambda_), region(std::move(region_)), grid(std::move(grid_)) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ContractError("gamma must be positive and finite");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ContractError("lambda must be positive and finite");
  require_same_dim(region.center, grid.ball.center, "Ekeland region and grid");
}

double ekeland_objective(const ScalarField& phi, const Point& xbar, WeightFactor xi, const Point& x) {
  const ExtReal base = phi.eval(xbar);
  if (base.is_infinite()) throw DomainError("payoff is +inf at the reference point " + xbar.to_string());
  const ExtReal v = phi.eval(x);
  if (v.is_infinite()) return kInf;
  return v.raw() - base.raw() + xi.value() * distance(x, xbar);
}

std::vector<Point> region_candidates(const Point& xbar, const EkelandParams& p) {
  require_same_dim(xbar, p.region.center, "Ekeland region");
  std::vector<Point> out;
  for (auto& x : grid_points(p.grid))
    if (p.region.contains(x)) out.push_back(std::move(x));
  out.push_back(xbar);
  std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) { return a < b; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EkelandResult ekeland_descend(const ScalarField& phi, const Point& xbar, WeightFactor xi, const EkelandParams& p) {
  const TrapQuery q(phi, xbar, xi, p.region, p.gamma);
  TrapVerdict hyp = is_stationary_trap(q, p.grid);
  if (!hyp.is_trap)
    throw HypothesisError("hypothesis fails: " + xbar.to_string() + " is not a gamma-approximate trap on the region (worst margin " +
                              ExtReal(hyp.worst_margin).to_string() + " < -gamma = " + ExtReal(-p.gamma).to_string() + ")",
                          hyp);

  const auto cand = region_candidates(xbar, p);
  std::vector<double> theta;
  theta.reserve(cand.size());
  for (const auto& x : cand) theta.push_back(ekeland_objective(phi, xbar, xi, x));
  const double kappa = p.kappa();
  const double reach = p.lambda * (1.0 + 1e-12);

  std::size_t cur = static_cast<std::size_t>(std::find(cand.begin(), cand.end(), xbar) - cand.begin());
  EkelandResult res{xbar, {}, std::move(hyp)};
  res.trace.iterates.push_back(cand[cur]);
  res.trace.objective_values.push_back(theta[cur]);
  for (std::size_t iter = 0; iter < cand.size(); ++iter) {
    std::size_t best = cur;
    double best_v = theta[cur];
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (i == cur || distance(cand[i], xbar) > reach) continue;
      const double v = theta[i] + kappa * distance(cand[i], cand[cur]);
      if (v < best_v || (v == best_v && best != cur && i < best)) {
        best = i;
        best_v = v;
      }
    }
    if (best == cur) break;
    cur = best;
    res.trace.iterates.push_back(cand[cur]);
    res.trace.objective_values.push_back(theta[cur]);
  }
  res.x_gamma = cand[cur];
  res.trace.final = cand[cur];
  return res;
}

EvaluationVerdict verify_perturbed_min(const ScalarField& phi, const Point& xbar, WeightFactor xi,
                                       const Point& x_gamma, const EkelandParams& p) {
  require_same_dim(xbar, x_gamma, "perturbed minimizer");
  const double qg = ekeland_objective(phi, xbar, xi, x_gamma);
  if (std::isinf(qg)) throw DomainError("payoff is +inf at x_gamma " + x_gamma.to_string());
  const double kappa = p.kappa();
  const auto scan = scan_min(region_candidates(xbar, p), [&](const Point& x) {
    return ekeland_objective(phi, xbar, xi, x) + kappa * distance(x, x_gamma) - qg;
  });
  return {scan.worst >= -kGridTol, scan.worst, scan.witness, p.region.radius, scan.points};
}

namespace {

// Looks for a sample t on one side of x with F(t) < min(F(end), F(x)), F = q + k|. - x|.
// Then F has a minimizer strictly between end and x, where -k sign(. - x) is a regular subgradient of q.
std::optional<std::pair<double, double>> nearby_rate(const ScalarField& q, double x, double k, double h,
                                                     const Ball& region) {
  const double c = region.center[0], r = region.radius;
  const auto F = [&](double t) { return q.eval(Point{t}).raw() + k * std::fabs(t - x); };
  const double fx = F(x);
  if (std::isinf(fx)) return std::nullopt;
  constexpr int kSamples = 512;
  for (const double end : {std::max(x - h, c - r), std::min(x + h, c + r)}) {
    if (end == x) continue;
    const double cap = std::min(F(end), fx);
    double best = cap, at = x;
    for (int i = 1; i < kSamples; ++i) {
      const double t = x + (end - x) * i / kSamples;
      if (const double v = F(t); v < best) best = v, at = t;
    }
    if (best < cap) return std::pair{end < x ? k : -k, at};
  }
  return std::nullopt;
}

}  // namespace

RateCheck rate_bound_check(const ScalarField& phi, const Point& xbar, WeightFactor xi, const Point& x_gamma,
                           const EkelandParams& p, const ProbeSpec& probe) {
  require_same_dim(xbar, x_gamma, "rate bound");
  const int n = xbar.dim();
  if (n > 1 && !phi.has_analytic_grad())
    throw DimensionError("rate_bound_check in dimension " + std::to_string(n) + " needs an analytic gradient");

  RateCheck rc;
  rc.kappa = p.kappa();
  rc.slack = p.grid.step();
  const double xiv = xi.value();
  const double lo = -rc.kappa - rc.slack;
  const double hi = rc.kappa + rc.slack;
  const double boundary_gap = p.region.radius - distance(x_gamma, p.region.center);
  rc.interior = boundary_gap > 1e-9 * std::max(1.0, p.region.radius);
  const double off = distance(x_gamma, xbar);
  const bool at_xbar = off == 0.0;

  bool ok = true;
  double hull_mid = std::numeric_limits<double>::quiet_NaN();
  if (n == 1) {
    double r0 = probe.r0;
    if (rc.interior) r0 = std::min(r0, 0.5 * boundary_gap);
    if (!at_xbar) r0 = std::min(r0, 0.5 * off);
    const ProbeSpec pr = probe.with_r0(r0);
    const ScalarField q = restricted(phi, p.region, xiv, xbar);
    const ScalarField f = restricted(phi, p.region, 0.0, xbar);

    rc.hull = eps_subdiff_hull_1d(q, x_gamma, 0.0, pr);
    rc.intervals = eps_subdiff_interval_1d(q, x_gamma, 0.0, pr);
    rc.intersects = rc.hull && meets(*rc.hull, lo, hi);
    if (!*rc.intersects) {
      if (const auto near = nearby_rate(q, x_gamma[0], hi, rc.slack, p.region)) {
        rc.intersects = true;
        rc.representative = near->first;
        rc.nearby = near->second;
      }
    }
    ok = ok && *rc.intersects;
    if (*rc.intersects && !rc.nearby) {
      const double rep = std::clamp(0.0, rc.hull->lo, rc.hull->hi);
      rc.representative = rep;
      hull_mid = 0.5 * (rc.hull->lo + rc.hull->hi);

      // rep - xi n must lie in the subdifferential of phi, n in {sign} or [-1, 1].
      const double s = at_xbar ? 0.0 : (x_gamma[0] > xbar[0] ? 1.0 : -1.0);
      const Interval need = at_xbar ? Interval{rep - xiv, rep + xiv} : Interval{rep - xiv * s, rep - xiv * s};
      bool r1 = false;
      if (const auto fh = eps_subdiff_hull_1d(f, x_gamma, 0.0, pr)) r1 = meets(*fh, need.lo - rc.slack, need.hi + rc.slack);
      if (!r1) {
        for (const auto& c : limiting_subdiff_sample_1d(f, x_gamma, pr).clusters)
          if (meets(c, need.lo - rc.slack, need.hi + rc.slack)) r1 = true;
      }
      rc.rate1 = r1;
      ok = ok && r1;
    }
  }

  if (rc.interior) {
    std::optional<Point> grad;
    if (phi.has_analytic_grad()) {
      try {
        grad = gradient(phi, x_gamma);
      } catch (const DomainError&) {
      }
    } else {
      const auto fh = eps_subdiff_hull_1d(phi, x_gamma, 0.0, probe.with_r0(std::min(probe.r0, 0.5 * boundary_gap)));
      if (fh && std::isfinite(fh->width()) && fh->width() <= 1e-3) {
        try {
          grad = fd_gradient(phi, x_gamma);
        } catch (const DomainError&) {
        }
      }
    }
    if (grad) {
      Point center = *grad;
      double radius = 0.0;
      if (at_xbar) radius = xiv;
      else center += (xiv / off) * (x_gamma - xbar);
      rc.rate2_center = center;
      rc.rate2_radius = radius;
      rc.rate2 = center.norm() - radius <= rc.kappa + rc.slack;
      ok = ok && *rc.rate2;
      if (n == 1 && !at_xbar && std::isfinite(hull_mid)) {
        rc.rate2_error = std::fabs(center[0] - hull_mid);
        ok = ok && *rc.rate2_error <= 1e-6;
      }
    }
  }

  if (n > 1 && !rc.rate2) ok = false;
  rc.status = ok ? "pass" : "inconclusive";
  return rc;
}

}  // namespace trapkit
