#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/catalog.hpp"
#include "trapkit/evaluations.hpp"
#include "trapkit/subdifferential.hpp"

using namespace trapkit;

namespace {

GridSpec ball1(double c, double r, int m = 201) { return GridSpec(Ball(Point{c}, r), m); }

Evaluation tangent(const ScalarField& g, double at) {
  return affine_evaluation(g.eval({at}).value(), {gradient(g, {at}), Point{at}});
}

}  // namespace

TEST_CASE("linear_estimate examples") {
  CHECK(linear_estimate({Point{0.5}, Point{0.5}}, {0.5}) == 0.0);
  CHECK(linear_estimate({Point{0.5}, Point{0.5}}, {1.0}) == 0.25);
  CHECK(linear_estimate({Point{-0.5}, Point{1.5}}, {1.0}) == 0.25);
  CHECK_THROWS_AS(linear_estimate({Point{1.0, 0.0}, Point{0.0}}, {1.0}), DimensionError);
}

TEST_CASE("check_optimistic examples") {
  const auto g = parse_field("x1 - 0.5*x1^2", 1, "", {"1 - x1"});
  CHECK(check_optimistic(g, tangent(g, 0.5), {0.5}, ball1(0.5, 0.5)).holds);

  const auto lin = parse_field("3*x1 - 1", 1);
  const auto v = check_optimistic(lin, field_evaluation(lin), {0.2}, ball1(0.2, 1.0));
  CHECK(v.holds);
  CHECK(v.worst_gap == 0.0);

  // The tangent of a convex function is a minorant, so g <= l fails away from the anchor.
  const auto sq = parse_field("x1^2", 1);
  const auto opt = check_optimistic(sq, tangent(sq, 1.0), {1.0}, ball1(1.0, 1.0));
  CHECK_FALSE(opt.holds);
  REQUIRE(opt.witness);
  CHECK((*opt.witness)[0] != 1.0);

  CHECK_THROWS_AS(check_optimistic(g, affine_evaluation(0.0, {Point{0.5}, Point{0.5}}), {0.5}, ball1(0.5, 0.5)),
                  ContractError);
}

TEST_CASE("check_pessimistic examples") {
  const auto sq = parse_field("x1^2", 1);
  CHECK(check_pessimistic(sq, tangent(sq, 1.0), {1.0}, ball1(1.0, 5.0)).holds);
  const auto lin = parse_field("x1", 1);
  CHECK(check_pessimistic(lin, field_evaluation(lin), {0.0}, ball1(0.0, 1.0)).holds);
  const auto neg = parse_field("-x1^2", 1);
  const auto zero = affine_evaluation(0.0, {Point{0.0}, Point{0.0}});
  CHECK_FALSE(check_pessimistic(neg, zero, {0.0}, ball1(0.0, 1.0)).holds);
  CHECK(check_optimistic(neg, zero, {0.0}, ball1(0.0, 1.0)).holds);
}

TEST_CASE("subgradient_optimistic_cert examples") {
  CHECK(subgradient_optimistic_cert(parse_field("x1^2", 1), {1.0}, {2.0}, ball1(1.0, 3.0)).holds);
  CHECK(subgradient_optimistic_cert(parse_field("abs(x1)", 1), {0.0}, {0.5}, ball1(0.0, 1.0)).holds);
  const auto v = subgradient_optimistic_cert(parse_field("-abs(x1)", 1), {0.0}, {0.0}, ball1(0.0, 1.0));
  CHECK_FALSE(v.holds);
  CHECK(v.witness.has_value());
  CHECK(v.worst_gap < 0.0);
  CHECK_THROWS_AS(subgradient_optimistic_cert(parse_field("1/x1", 1), {0.0}, {0.0}, ball1(0.0, 1.0)), DomainError);
}

TEST_CASE("proximal_evaluation_check examples") {
  const CostModel c = CostModel::unit(1);
  CHECK(proximal_evaluation_check(parse_field("-abs(x1)", 1), c, WeightFactor(1.1), {0.0}, {0.0}, 1.0,
                                  ball1(0.0, 1.0))
            .holds);
  const auto smooth = parse_field("sin(x1) + x1^2", 1);
  const Point xbar{0.3};
  CHECK(proximal_evaluation_check(smooth, c, WeightFactor(0.05), xbar, gradient(smooth, xbar), 0.0,
                                  ball1(0.3, 1.0))
            .holds);
  CHECK_FALSE(proximal_evaluation_check(parse_field("abs(x1)", 1), c, WeightFactor(0.5), {0.0}, {2.0}, 0.0,
                                        ball1(0.0, 1.0))
                  .holds);
  CHECK_THROWS_AS(proximal_evaluation_check(parse_field("abs(x1)", 1), c, WeightFactor(0.5), {0.0}, {0.0}, 0.5,
                                            ball1(0.0, 1.0)),
                  ContractError);
}

TEST_CASE("verify_support_function examples") {
  const auto sq = parse_field("x1^2", 1);
  CHECK(verify_support_function(parse_field("2*x1 - 1", 1), sq, {1.0}, {2.0}, ball1(1.0, 2.0)).holds);
  CHECK(verify_support_function(sq, sq, {0.7}, gradient(sq, {0.7}), ball1(0.7, 1.0)).holds);
  CHECK(verify_support_function(parse_field("x1 - x1^2", 1), parse_field("abs(x1)", 1), {0.0}, {1.0},
                                ball1(0.0, 1.0))
            .holds);
  CHECK_FALSE(verify_support_function(parse_field("x1", 1), parse_field("abs(x1)", 1), {0.0}, {0.5},
                                      ball1(0.0, 1.0))
                  .holds);
}

TEST_CASE("concave quadratic: the four optimistic cases") {
  const auto g = parse_field("x1 - 0.5*x1^2", 1);
  CHECK(gradient(g, {0.5})[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(gradient(g, {1.5})[0] == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(g.eval({1.5}).raw() == 0.375);

  std::mt19937_64 rng(32);
  struct Case {
    double xbar, lo, hi;
    bool gain;
  };
  const Case cases[] = {{0.5, 0.5, 1.0, true}, {0.5, 0.0, 0.5, false}, {1.5, 1.0, 1.5, true}, {1.5, 1.5, 3.0, false}};
  for (const auto& cs : cases) {
    const Point xbar{cs.xbar};
    const LinearEvaluation le{gradient(g, xbar), xbar};
    for (int k = 0; k < 1000; ++k) {
      const Point y{testing::uniform(rng, cs.lo, cs.hi)};
      const double a = g.eval(y).raw() - g.eval(xbar).raw();
      const double e = linear_estimate(le, y);
      if (cs.gain) {
        CHECK(a >= -1e-12);
        CHECK(e - a >= -1e-12);
      } else {
        CHECK(-a >= -1e-12);
        CHECK(-a - (-e) >= -1e-12);
      }
    }
  }
}

TEST_CASE("classical subgradients of convex functions are exactly the certified rates") {
  struct Case {
    std::string expr;
    double xbar, left, right;
  };
  const Case cases[] = {{"abs(x1)", 0.0, -1.0, 1.0},
                        {"max(x1, 2*x1)", 0.0, 1.0, 2.0},
                        {"x1^2", 1.0, 2.0, 2.0},
                        {"abs(x1 - 0.5) + x1^2", 0.5, 0.0, 2.0}};
  for (const auto& cs : cases) {
    const auto phi = parse_field(cs.expr, 1);
    for (int k = -60; k <= 60; ++k) {
      const double r = k / 20.0;
      const bool expect = r >= cs.left - 1e-12 && r <= cs.right + 1e-12;
      const auto v = subgradient_optimistic_cert(phi, {cs.xbar}, {r}, ball1(cs.xbar, 1.0));
      CHECK_MESSAGE(v.holds == expect, cs.expr << " rate " << r);
    }
  }
}

TEST_CASE("eps-subgradients give proximal evaluations with xi = eps + 0.1") {
  std::mt19937_64 rng(99);
  const std::vector<std::string> exprs{"abs(x1)", "-abs(x1)", "x1^2", "x1 + abs(x1)", "x1^3 - x1", "-x1^2 + 0.5*abs(x1)"};
  const CostModel c = CostModel::unit(1);
  int accepted = 0;
  for (int k = 0; k < 300; ++k) {
    const auto phi = parse_field(exprs[k % exprs.size()], 1);
    const Point xbar{k % 3 == 0 ? 0.0 : testing::uniform(rng, -1.0, 1.0)};
    const Point xstar{testing::uniform(rng, -2.5, 2.5)};
    const double eps = testing::uniform(rng, 0.0, 1.5);
    if (!eps_subgrad_member({phi, xbar, xstar, eps}).member) continue;
    ++accepted;
    const auto v = proximal_evaluation_check(phi, c, WeightFactor(eps + 0.1), xbar, xstar, eps,
                                             GridSpec(Ball(xbar, 0.5), 201));
    CHECK_MESSAGE(v.holds, exprs[k % exprs.size()] << " xbar " << xbar[0] << " x* " << xstar[0] << " eps " << eps);
  }
  CHECK(accepted > 30);
}
