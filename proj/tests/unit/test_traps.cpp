#include <doctest.h>

#include <random>

#include "../support/suites.hpp"
#include "trapkit/traps.hpp"

using namespace trapkit;

namespace {

GridSpec grid1(double c, double r, int m = 201) { return GridSpec(Ball(Point{c}, r), m); }

TrapVerdict trap1(const std::string& expr, double xbar, double xi, double r, double gamma = 0.0, bool strict = false) {
  return is_stationary_trap(TrapQuery(parse_field(expr, 1), {xbar}, WeightFactor(xi), Ball(Point{xbar}, r), gamma, strict),
                            grid1(xbar, r));
}

}  // namespace

TEST_CASE("is_stationary_trap examples") {
  CHECK(trap1("x1^2", 0.0, 0.0, 1.0).is_trap);
  const auto lin = trap1("x1", 0.0, 1.0, 1.0);
  CHECK(lin.is_trap);
  CHECK(lin.worst_margin == 0.0);
  CHECK_FALSE(trap1("x1", 0.0, 0.0, 0.1).is_trap);
  CHECK(trap1("x1", 0.0, 0.0, 0.1, 0.1).is_trap);
  CHECK_FALSE(trap1("x1", 0.0, 0.0, 0.1, 0.09).is_trap);
  CHECK(trap1("x1^2", 0.0, 0.0, 1.0, 0.0, true).is_trap);
  CHECK_FALSE(trap1("x1", 0.0, 1.0, 1.0, 0.0, true).is_trap);
  CHECK(trap1("x1", 0.0, 1.5, 1.0, 0.0, true).is_trap);

  const auto v = trap1("-x1^2", 0.0, 0.0, 1.0);
  CHECK_FALSE(v.is_trap);
  REQUIRE(v.witness);
  CHECK((*v.witness)[0] == -1.0);
  CHECK(v.grid_per_axis == 201);

  TrapQuery g(parse_field("abs(x1)", 1), {0.0}, WeightFactor(0.0), Ball(Point{0.0}, 5.0));
  g.whole_domain = true;
  CHECK(is_stationary_trap(g, grid1(0.0, 5.0)).global_claim);

  CHECK_THROWS_AS(trap1("1/x1", 0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(trap1("x1", 0.0, 0.0, 1.0, 0.1, true), ContractError);
}

TEST_CASE("trap_certificate examples") {
  const auto a = trap_certificate(parse_field("abs(x1)", 1), {0.0}, 0.0, {0.0}, grid1(0.0, 1.0));
  CHECK(a.is_trap);
  REQUIRE(a.xi_lower);
  CHECK(*a.xi_lower == 0.0);
  CHECK(a.neighborhood_radius.has_value());

  const auto n = trap_certificate(parse_field("-abs(x1)", 1), {0.0}, 1.0, {0.0}, grid1(0.0, 1.0));
  CHECK(n.is_trap);
  CHECK(*n.xi_lower == 1.0);
  CHECK_FALSE(trap_certificate(parse_field("-abs(x1)", 1), {0.0}, 0.9, {0.0}, grid1(0.0, 1.0)).is_trap);

  const auto l = trap_certificate(parse_field("x1", 1), {0.0}, 0.0, {1.0}, grid1(0.0, 1.0));
  CHECK_FALSE(l.is_trap);
  CHECK(l.worst_margin < 0.0);
  CHECK_FALSE(l.xi_lower.has_value());
}

TEST_CASE("approx_trap_certificate examples") {
  const auto a = approx_trap_certificate(parse_field("abs(x1)", 1), {0.0}, 0.0, {0.05}, 0.1, grid1(0.0, 1.0));
  CHECK(a.is_trap);
  REQUIRE(a.flat_enough);
  CHECK(*a.flat_enough);

  const auto s = parse_field("(x1 - 0.2)^2", 1);
  for (double gamma : {0.01, 0.5, 3.0})
    CHECK(approx_trap_certificate(s, {0.2}, 0.0, gradient(s, {0.2}), gamma, grid1(0.2, 1.0)).is_trap);

  const auto f = approx_trap_certificate(parse_field("abs(x1)", 1), {0.0}, 0.0, {1.0}, 0.1, grid1(0.0, 1.0));
  CHECK_FALSE(f.is_trap);
  CHECK(f.worst_margin == doctest::Approx(-1.0));
  CHECK_FALSE(*f.flat_enough);
  CHECK_THROWS_AS(approx_trap_certificate(parse_field("abs(x1)", 1), {0.0}, 0.0, {0.0}, 0.0, grid1(0.0, 1.0)),
                  ContractError);
}

TEST_CASE("classify_trap examples") {
  const auto q = classify_trap(parse_field("x1^2", 1), {0.0});
  CHECK(q.flat_at_zero);
  CHECK(q.eps_min <= 1e-3);
  CHECK(q.local_minimizer);

  const auto n = classify_trap(parse_field("-abs(x1)", 1), {0.0});
  CHECK_FALSE(n.flat_at_zero);
  CHECK(n.eps_min == doctest::Approx(1.0));
  REQUIRE(n.flat_eps);
  CHECK(*n.flat_eps == doctest::Approx(1.0));
  CHECK_FALSE(n.local_minimizer);

  const auto l = classify_trap(parse_field("x1", 1), {0.0});
  CHECK_FALSE(l.flat_at_zero);
  CHECK(l.eps_min == doctest::Approx(1.0));
  CHECK_FALSE(l.local_minimizer);
  REQUIRE_FALSE(l.nonzero_rates.empty());
  CHECK(l.nonzero_rates.front()[0] == doctest::Approx(1.0).epsilon(1e-4));

  const auto k = classify_trap(parse_field("abs(x1)", 1), {0.0});
  CHECK(k.flat_at_zero);
  CHECK(k.local_minimizer);
  CHECK(k.nonzero_rates.size() == 2);
}

TEST_CASE("certificates are sound") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto cases = testing::certificate_suite(seed);
    const auto exact = testing::certificate_soundness(cases, false);
    const auto approx = testing::certificate_soundness(cases, true);
    for (const auto& note : exact.notes) MESSAGE(note);
    for (const auto& note : approx.notes) MESSAGE(note);
    CHECK(exact.violations == 0);
    CHECK(approx.violations == 0);
    CHECK(exact.passes > 0);
    CHECK(approx.passes > exact.passes / 2);
  }
}

TEST_CASE("exact trap at xi = 0 iff grid-local minimizer") {
  std::mt19937_64 rng(41);
  const std::vector<std::string> exprs{"x1^2", "-x1^2", "abs(x1) - 0.5*x1", "x1^3", "sin(3*x1)", "abs(x1 - 0.3)"};
  for (int k = 0; k < 60; ++k) {
    const auto& e = exprs[k % exprs.size()];
    const double xbar = k % 2 ? 0.0 : testing::uniform(rng, -1.0, 1.0);
    const auto phi = parse_field(e, 1);
    const GridSpec g = grid1(xbar, 0.5, 101);
    bool minimizer = true;
    for (const auto& x : grid_points(g)) minimizer = minimizer && phi.eval(x).raw() >= phi.eval({xbar}).raw() - kGridTol;
    CHECK(is_stationary_trap(TrapQuery(phi, {xbar}, WeightFactor(0.0), g.ball), g).is_trap == minimizer);
  }
}

TEST_CASE("trap verdicts are monotone in xi and gamma") {
  std::mt19937_64 rng(43);
  const std::vector<std::pair<std::string, int>> exprs{
      {"x1", 1}, {"-abs(x1)", 1}, {"sin(5*x1) - x1", 1}, {"x1 - x2^2", 2}, {"-sqrt(x1^2 + x2^2) + x1", 2}};
  int flips = 0;
  for (int k = 0; k < 100; ++k) {
    const auto& [text, dim] = exprs[k % exprs.size()];
    const auto phi = parse_field(text, dim);
    const Point xbar = testing::random_point(rng, dim, -0.5, 0.5);
    const Ball region(xbar, testing::uniform(rng, 0.2, 1.0));
    const GridSpec g(region, dim == 1 ? 101 : 31);
    const double x1 = testing::uniform(rng, 0.0, 2.0), x2 = x1 + testing::uniform(rng, 0.0, 1.0);
    const double g1 = testing::uniform(rng, 0.0, 0.5), g2 = g1 + testing::uniform(rng, 0.0, 0.5);
    const bool a = is_stationary_trap(TrapQuery(phi, xbar, WeightFactor(x1), region, g1), g).is_trap;
    const bool b = is_stationary_trap(TrapQuery(phi, xbar, WeightFactor(x2), region, g1), g).is_trap;
    const bool c = is_stationary_trap(TrapQuery(phi, xbar, WeightFactor(x1), region, g2), g).is_trap;
    if (a) {
      CHECK(b);
      CHECK(c);
    }
    flips += a != b;
  }
  CHECK(flips > 0);
}
