#include "trapkit/evaluations.hpp"

#include <cmath>
#include <limits>

namespace trapkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// upper - lower in the extended reals, with inf - inf counted as satisfied.
double slack(ExtReal upper, ExtReal lower) {
  if (upper.is_infinite()) return kInf;
  if (lower.is_infinite()) return -kInf;
  return upper.raw() - lower.raw();
}

double finite_at(const ScalarField& f, const Point& p, const char* what) {
  const ExtReal v = f.eval(p);
  if (v.is_infinite()) throw DomainError(std::string(what) + ": payoff is +inf at the reference point " + p.to_string());
  return v.raw();
}

GridSpec around(const Point& xbar, const GridSpec& grid) {
  require_same_dim(xbar, grid.ball.center, "grid");
  return GridSpec(Ball(xbar, grid.ball.radius), grid.per_axis, grid.cap);
}

EvaluationVerdict run(const GridSpec& grid, const std::function<double(const Point&)>& gap) {
  const auto n = search_neighborhood(grid, gap, kGridTol);
  return {n.found, n.scan.worst, n.scan.witness, n.radius, n.scan.points};
}

void check_anchor(const ScalarField& g, const Evaluation& l, const Point& xbar) {
  const double gv = finite_at(g, xbar, "evaluation");
  const ExtReal lv = l(xbar);
  if (lv.is_infinite() || std::fabs(lv.raw() - gv) > kGridTol * std::max(1.0, std::fabs(gv)))
    throw ContractError("evaluation must agree with the payoff at the reference point: l(xbar/xbar) = " +
                        lv.to_string() + ", g(xbar) = " + ExtReal(gv).to_string());
}

}  // namespace

double linear_estimate(const LinearEvaluation& le, const Point& y) {
  require_same_dim(le.rate, le.anchor, "linear estimate");
  return le.rate.dot(y - le.anchor);
}

Evaluation affine_evaluation(double value_at_anchor, LinearEvaluation le) {
  return [v = value_at_anchor, le = std::move(le)](const Point& y) { return ExtReal(v + linear_estimate(le, y)); };
}

Evaluation field_evaluation(ScalarField f) {
  return [f = std::move(f)](const Point& y) { return f.eval(y); };
}

EvaluationVerdict check_optimistic(const ScalarField& g, const Evaluation& l, const Point& xbar,
                                   const GridSpec& grid) {
  check_anchor(g, l, xbar);
  return run(around(xbar, grid), [&](const Point& y) { return slack(l(y), g.eval(y)); });
}

EvaluationVerdict check_pessimistic(const ScalarField& g, const Evaluation& l, const Point& xbar,
                                    const GridSpec& grid) {
  check_anchor(g, l, xbar);
  return run(around(xbar, grid), [&](const Point& y) { return slack(g.eval(y), l(y)); });
}

EvaluationVerdict subgradient_optimistic_cert(const ScalarField& phi, const Point& xbar, const Point& xstar,
                                              const GridSpec& grid) {
  require_same_dim(xbar, xstar, "subgradient certificate");
  const double base = finite_at(phi, xbar, "subgradient certificate");
  return run(around(xbar, grid), [&](const Point& x) {
    const ExtReal v = phi.eval(x);
    if (v.is_infinite()) return kInf;
    return v.raw() - base - xstar.dot(x - xbar);
  });
}

EvaluationVerdict proximal_evaluation_check(const ScalarField& phi, const CostModel& c, WeightFactor xi,
                                            const Point& xbar, const Point& xstar, double eps,
                                            const GridSpec& grid) {
  if (!(eps >= 0.0)) throw ContractError("eps must be >= 0");
  if (!(xi.value() > eps))
    throw ContractError("the proximal evaluation needs a weight factor xi > eps (xi = " + ExtReal(xi.value()).to_string() +
                        ", eps = " + ExtReal(eps).to_string() + ")");
  require_same_dim(xbar, xstar, "proximal evaluation");
  const double base = finite_at(phi, xbar, "proximal evaluation");
  return run(around(xbar, grid), [&](const Point& x) {
    const ExtReal v = phi.eval(x);
    if (v.is_infinite()) return kInf;
    return v.raw() - base + xi.value() * cost(c, xbar, x) - xstar.dot(x - xbar);
  });
}

SupportVerdict verify_support_function(const ScalarField& s, const ScalarField& phi, const Point& xbar,
                                       const Point& xstar, const GridSpec& grid) {
  require_same_dim(xbar, xstar, "support function");
  SupportVerdict out;
  const double pv = finite_at(phi, xbar, "support function");
  const ExtReal sv = s.eval(xbar);
  out.anchor_gap = sv.is_infinite() ? kInf : std::fabs(sv.raw() - pv);

  out.gradient_error = kInf;
  try {
    const Point gs = gradient(s, xbar);
    out.gradient_error = 0.0;
    for (int i = 0; i < gs.dim(); ++i) out.gradient_error = std::max(out.gradient_error, std::fabs(gs[i] - xstar[i]));
  } catch (const DomainError&) {
  }

  out.minorant = run(around(xbar, grid), [&](const Point& x) { return slack(phi.eval(x), s.eval(x)); });
  out.holds = out.anchor_gap <= kGridTol * std::max(1.0, std::fabs(pv)) && out.gradient_error <= 1e-6 &&
              out.minorant.holds;
  return out;
}

}  // namespace trapkit
