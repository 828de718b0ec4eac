#include <doctest.h>

#include <cmath>
#include <limits>

#include "../support/suites.hpp"
#include "trapkit/principles.hpp"

using namespace trapkit;

namespace {

EkelandParams params1(double gamma, double lambda, double center, double radius, int m = 401) {
  const Ball b(Point{center}, radius);
  return EkelandParams(gamma, lambda, b, GridSpec(b, m));
}

}  // namespace

TEST_CASE("params validation") {
  CHECK_THROWS_AS(params1(0.0, 1.0, 0.0, 1.0), ContractError);
  CHECK_THROWS_AS(params1(0.1, 0.0, 0.0, 1.0), ContractError);
  CHECK(params1(0.2, 0.8, 0.0, 1.0).kappa() == 0.25);
}

TEST_CASE("ekeland_descend examples") {
  const auto abs1 = parse_field("abs(x1)", 1);
  for (double gamma : {0.05, 0.3}) {
    for (double lambda : {0.1, 1.0}) {
      const auto r = ekeland_descend(abs1, {0.0}, WeightFactor(0.2), params1(gamma, lambda, 0.0, 1.0));
      CHECK(r.x_gamma == Point{0.0});
      CHECK(r.trace.iterates.size() == 1);
    }
  }

  const double gamma = 0.2;
  const auto lin = ekeland_descend(parse_field("x1", 1), {0.0}, WeightFactor(0.0), params1(gamma, 0.5, 0.0, gamma));
  CHECK(lin.x_gamma[0] == doctest::Approx(-gamma).epsilon(1e-12));
  CHECK(lin.hypothesis.is_trap);

  // Brute force: the perturbed objective x^2 + kappa |x - x_j| settles at kappa / 2.
  const auto sq = parse_field("x1^2", 1);
  const auto p = params1(0.25, 1.0, 0.0, 1.0);
  const auto r = ekeland_descend(sq, {0.5}, WeightFactor(0.0), p);
  CHECK(r.x_gamma[0] == doctest::Approx(0.125).epsilon(1e-12));
  std::vector<Point> cands = region_candidates({0.5}, p);
  Point best = cands.front();
  for (const auto& x : cands)
    if (x[0] * x[0] + 0.25 * std::fabs(x[0] - 0.5) < best[0] * best[0] + 0.25 * std::fabs(best[0] - 0.5)) best = x;
  CHECK(r.trace.iterates.at(1) == best);

  try {
    ekeland_descend(sq, {0.5}, WeightFactor(0.0), params1(0.2, 1.0, 0.0, 1.0));
    FAIL("expected a hypothesis failure");
  } catch (const HypothesisError& e) {
    CHECK_FALSE(e.verdict().is_trap);
    CHECK(e.verdict().worst_margin == doctest::Approx(-0.25));
  }
}

TEST_CASE("descent trace is strictly decreasing") {
  const auto phi = parse_field("0.5*sin(2*x1) + 0.3*x1^2", 1);
  const auto p = params1(0.8, 0.5, 0.2, 1.0);
  const auto r = ekeland_descend(phi, {0.2}, WeightFactor(0.1), p);
  REQUIRE(r.trace.objective_values.size() == r.trace.iterates.size());
  for (std::size_t j = 1; j < r.trace.objective_values.size(); ++j)
    CHECK(r.trace.objective_values[j] < r.trace.objective_values[j - 1]);
  CHECK(r.trace.iterates.size() <= region_candidates({0.2}, p).size());
  CHECK(r.trace.final == r.x_gamma);
}

TEST_CASE("verify_perturbed_min examples") {
  const auto phi = parse_field("x1", 1);
  const auto p = params1(0.1, 1.0, 0.0, 1.0);
  CHECK(verify_perturbed_min(phi, {0.0}, WeightFactor(0.0), {-1.0}, p).holds);
  const auto bad = verify_perturbed_min(phi, {0.0}, WeightFactor(0.0), {0.3}, p);
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.witness);
  CHECK((*bad.witness)[0] == -1.0);

  const auto sq = parse_field("(x1 - 0.3)^2", 1);
  for (double gamma : {1e-3, 0.5})
    CHECK(verify_perturbed_min(sq, {0.3}, WeightFactor(0.0), {0.3}, params1(gamma, 1.0, 0.0, 1.0)).holds);

  const auto r = ekeland_descend(sq, {-0.5}, WeightFactor(0.2), params1(1.0, 0.6, 0.0, 1.0));
  CHECK(verify_perturbed_min(sq, {-0.5}, WeightFactor(0.2), r.x_gamma, params1(1.0, 0.6, 0.0, 1.0)).holds);
}

TEST_CASE("rate_bound_check examples") {
  const auto abs1 = parse_field("abs(x1)", 1);
  const auto a = rate_bound_check(abs1, {0.0}, WeightFactor(0.0), {0.0}, params1(0.1, 1.0, 0.0, 1.0));
  CHECK(a.status == "pass");
  REQUIRE(a.hull);
  CHECK(a.hull->lo == doctest::Approx(-1.0).epsilon(1e-5));
  CHECK(a.hull->hi == doctest::Approx(1.0).epsilon(1e-5));

  const auto sq = parse_field("x1^2", 1, "", {"2*x1"});
  const auto z = rate_bound_check(sq, {0.0}, WeightFactor(0.0), {0.0}, params1(0.5, 1.0, 0.0, 1.0));
  CHECK(z.status == "pass");
  REQUIRE(z.rate2);
  CHECK(*z.rate2);

  // x_gamma != xbar: rate2 is the singleton 2 x_gamma + xi sign(x_gamma - xbar).
  const auto s1 = rate_bound_check(sq, {0.5}, WeightFactor(0.1), {0.1}, params1(0.5, 1.0, 0.0, 1.0));
  REQUIRE(s1.rate2_center);
  CHECK((*s1.rate2_center)[0] == doctest::Approx(0.1));
  CHECK(s1.status == "pass");
  REQUIRE(s1.rate2_error);
  CHECK(*s1.rate2_error <= 1e-6);
  const auto s2 = rate_bound_check(sq, {0.5}, WeightFactor(0.1), {-0.4}, params1(0.5, 1.0, 0.0, 1.0));
  CHECK((*s2.rate2_center)[0] == doctest::Approx(-0.9));
  CHECK_FALSE(*s2.rate2);
  CHECK(s2.status == "inconclusive");

  // A kink half a grid step away: the hull at x_gamma misses, the neighboring kink carries the rate.
  const auto kink = parse_field("abs(x1 - 0.01)", 1);
  const auto k = rate_bound_check(kink, {0.0}, WeightFactor(0.0), {0.0}, params1(0.05, 1.0, 0.0, 1.0, 101));
  REQUIRE(k.hull);
  CHECK(k.hull->hi == doctest::Approx(-1.0).epsilon(1e-5));
  CHECK(*k.intersects);
  REQUIRE(k.nearby);
  CHECK(*k.nearby > 0.0);
  CHECK(*k.nearby <= 0.02);
  CHECK(*k.representative == doctest::Approx(-0.07));
  const auto far = rate_bound_check(parse_field("abs(x1 - 0.05)", 1), {0.0}, WeightFactor(0.0), {0.0},
                                    params1(0.05, 1.0, 0.0, 1.0, 101));
  CHECK_FALSE(*far.intersects);
  CHECK(far.status == "inconclusive");

  CHECK_THROWS_AS(rate_bound_check(parse_field("x1 + x2", 2), {0.0, 0.0}, WeightFactor(0.0), {0.0, 0.0},
                                   EkelandParams(0.1, 1.0, Ball(Point{0.0, 0.0}, 1.0), GridSpec(Ball(Point{0.0, 0.0}, 1.0), 21))),
                  DimensionError);
}

TEST_CASE("seeded Ekeland suite: conclusions hold under independent scans") {
  for (const auto& inst : testing::ekeland_suite(5)) {
    const auto phi = parse_field(inst.expr, inst.xbar.dim(), "", inst.grad);
    const WeightFactor xi(inst.xi);
    const auto& p = inst.params;
    const auto r = ekeland_descend(phi, inst.xbar, xi, p);
    CAPTURE(inst.expr);
    const double theta_bar = ekeland_objective(phi, inst.xbar, xi, inst.xbar);
    const double theta_g = ekeland_objective(phi, inst.xbar, xi, r.x_gamma);
    CHECK(theta_g <= theta_bar);
    CHECK(distance(r.x_gamma, inst.xbar) <= p.lambda * (1 + 1e-12));
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& x : grid_points(p.grid))
      worst = std::min(worst, ekeland_objective(phi, inst.xbar, xi, x) + p.kappa() * distance(x, r.x_gamma) - theta_g);
    CHECK(worst >= -1e-9);
    if (inst.xbar.dim() == 1) {
      const auto rc = rate_bound_check(phi, inst.xbar, xi, r.x_gamma, p);
      REQUIRE(rc.intersects);
      CHECK(*rc.intersects);
      if (rc.rate2_error) CHECK(*rc.rate2_error <= 1e-6);
    }
  }
}
