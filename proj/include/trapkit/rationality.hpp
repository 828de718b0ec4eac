#pragma once

#include <vector>

#include "trapkit/ext_real.hpp"
#include "trapkit/point.hpp"
#include "trapkit/scalar_field.hpp"

namespace trapkit {

/// Linear cost of changing: C(x, y) = eta(x) * |y - x|, the rate read at the
/// departure point, so C is asymmetric whenever eta varies.
class CostModel {
 public:
  explicit CostModel(ScalarField eta) : eta_(std::move(eta)) {}
  static CostModel unit(int dim) { return CostModel(ScalarField::constant(dim, 1.0)); }
  static CostModel constant(int dim, double eta);

  const ScalarField& eta() const { return eta_; }
  int dim() const { return eta_.dim(); }

  /// eta(x); DomainError when +inf or negative.
  double rate_at(const Point& x) const;

 private:
  ScalarField eta_;
};

/// Weight factor xi >= 0 attached to the status quo.
class WeightFactor {
 public:
  explicit WeightFactor(double xi);
  double value() const { return xi_; }

 private:
  double xi_;
};

/// A(y/x) = g(y) - g(x). DomainError if either value is +inf.
double advantage(const ScalarField& g, const Point& x, const Point& y);

/// C(x, y) = eta(x) |y - x|; exactly 0 when y == x.
double cost(const CostModel& c, const Point& x, const Point& y);

/// I(y/x) = C(x, y) - C(x, x) = C(x, y). With linear resistance D(I) = I this
/// is also R(y/x).
double inconvenience(const CostModel& c, const Point& x, const Point& y);

/// Q_xi(x/xbar) = phi(x) + xi C(xbar, x) for a "to be decreased" payoff.
ExtReal proximal_payoff_dec(const ScalarField& phi, const CostModel& c, WeightFactor xi, const Point& xbar,
                            const Point& x);

/// P_xi(x/xbar) = g(x) - xi C(xbar, x) for a "to be increased" payoff.
ExtReal proximal_payoff_inc(const ScalarField& g, const CostModel& c, WeightFactor xi, const Point& xbar,
                            const Point& x);

/// A_xi(y/x) = A(y/x) - xi I(y/x).
double worthwhile_gain(const ScalarField& g, const CostModel& c, WeightFactor xi, const Point& x, const Point& y);

/// L_xi(y/x) = (phi(y) - phi(x)) + xi I(y/x); equals -A_xi(y/x) for g = -phi.
double not_worthwhile_loss(const ScalarField& phi, const CostModel& c, WeightFactor xi, const Point& x,
                           const Point& y);

/// A(y/x) >= xi I(y/x).
bool is_worthwhile_change(const ScalarField& g, const CostModel& c, WeightFactor xi, const Point& x,
                          const Point& y);

/// x -> phi(x) - <v, x>.
ScalarField tilt_perturb(const ScalarField& phi, const Point& v);

/// x -> -phi(x); switches between the "to be decreased" and "to be increased" views.
ScalarField negate(const ScalarField& phi);

}  // namespace trapkit
