#include "trapkit/rationality.hpp"

#include <cmath>
#include <string>

namespace trapkit {

namespace {

double finite_value(const ScalarField& f, const Point& p, const char* what) {
  const ExtReal v = f.eval(p);
  if (v.is_infinite()) throw DomainError(std::string(what) + ": payoff is +inf at " + p.to_string());
  return v.raw();
}

}  // namespace

CostModel CostModel::constant(int dim, double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ContractError("cost rate must be finite and >= 0");
  return CostModel(ScalarField::constant(dim, eta));
}

double CostModel::rate_at(const Point& x) const {
  const ExtReal v = eta_.eval(x);
  if (v.is_infinite()) throw DomainError("cost rate is +inf at " + x.to_string());
  if (v.raw() < 0.0) throw DomainError("cost rate is negative at " + x.to_string());
  return v.raw();
}

WeightFactor::WeightFactor(double xi) : xi_(xi) {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw ContractError("weight factor must be finite and >= 0");
}

double advantage(const ScalarField& g, const Point& x, const Point& y) {
  require_same_dim(x, y, "advantage");
  return finite_value(g, y, "advantage") - finite_value(g, x, "advantage");
}

double cost(const CostModel& c, const Point& x, const Point& y) {
  require_same_dim(x, y, "cost");
  const double eta = c.rate_at(x);
  if (x == y) return 0.0;
  return eta * distance(x, y);
}

double inconvenience(const CostModel& c, const Point& x, const Point& y) { return cost(c, x, y) - cost(c, x, x); }

ExtReal proximal_payoff_dec(const ScalarField& phi, const CostModel& c, WeightFactor xi, const Point& xbar,
                            const Point& x) {
  require_same_dim(xbar, x, "proximal payoff");
  const ExtReal v = phi.eval(x);
  if (xi.value() == 0.0 || v.is_infinite()) return v;
  const ExtReal rate = c.eta().eval(xbar);
  if (rate.is_infinite()) return ExtReal::infinity();
  return v + ExtReal(xi.value() * cost(c, xbar, x));
}

ExtReal proximal_payoff_inc(const ScalarField& g, const CostModel& c, WeightFactor xi, const Point& xbar,
                            const Point& x) {
  require_same_dim(xbar, x, "proximal payoff");
  const ExtReal v = g.eval(x);
  if (xi.value() == 0.0 || v.is_infinite()) return v;
  return ExtReal(v.raw() - xi.value() * cost(c, xbar, x));
}

double worthwhile_gain(const ScalarField& g, const CostModel& c, WeightFactor xi, const Point& x, const Point& y) {
  return advantage(g, x, y) - xi.value() * inconvenience(c, x, y);
}

double not_worthwhile_loss(const ScalarField& phi, const CostModel& c, WeightFactor xi, const Point& x,
                           const Point& y) {
  require_same_dim(x, y, "loss");
  // L(y/x) = -A(y/x) with g = -phi.
  const double loss = finite_value(phi, y, "loss") - finite_value(phi, x, "loss");
  return loss + xi.value() * inconvenience(c, x, y);
}

bool is_worthwhile_change(const ScalarField& g, const CostModel& c, WeightFactor xi, const Point& x,
                          const Point& y) {
  return advantage(g, x, y) >= xi.value() * inconvenience(c, x, y);
}

ScalarField tilt_perturb(const ScalarField& phi, const Point& v) {
  if (v.dim() != phi.dim()) throw DimensionError("tilt vector must match the field dimension");
  ExprPtr lin;
  for (int i = 0; i < v.dim(); ++i) {
    if (v[i] == 0.0) continue;
    auto term = Expr::binary(Expr::Kind::Mul, Expr::number(v[i]), Expr::var(i));
    lin = lin ? Expr::binary(Expr::Kind::Add, lin, term) : term;
  }
  if (!lin) return phi;
  std::optional<std::vector<ExprPtr>> grad;
  if (phi.has_analytic_grad()) {
    grad.emplace();
    for (int i = 0; i < v.dim(); ++i)
      grad->push_back(Expr::binary(Expr::Kind::Sub, (*phi.analytic_grad())[static_cast<std::size_t>(i)],
                                   Expr::number(v[i])));
  }
  return phi.with_body(Expr::binary(Expr::Kind::Sub, phi.body(), lin), std::move(grad));
}

ScalarField negate(const ScalarField& phi) {
  std::optional<std::vector<ExprPtr>> grad;
  if (phi.has_analytic_grad()) {
    grad.emplace();
    for (const auto& g : *phi.analytic_grad()) grad->push_back(Expr::neg(g));
  }
  return phi.with_body(Expr::neg(phi.body()), std::move(grad));
}

}  // namespace trapkit
