#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "../support/catalog.hpp"
#include "trapkit/subdifferential.hpp"

using namespace trapkit;

TEST_CASE("probe validation") {
  ProbeSpec p;
  CHECK_NOTHROW(p.validate());
  p.shells = 3;
  CHECK_THROWS_AS(p.validate(), ContractError);
  p = {};
  p.samples_per_shell = 4;
  CHECK_THROWS_AS(p.validate(), ContractError);
  p = {};
  p.liminf_window = 13;
  CHECK_THROWS_AS(p.validate(), ContractError);
  p = {};
  p.r0 = 0.0;
  CHECK_THROWS_AS(p.validate(), ContractError);
  const auto shells = shell_offsets(ProbeSpec{}, 2);
  REQUIRE(shells.size() == 12);
  for (std::size_t k = 0; k < shells.size(); ++k) {
    const double r = 0.5 / std::pow(2.0, static_cast<double>(k));
    for (const auto& o : shells[k]) {
      CHECK(o.norm() <= r * (1 + 1e-12));
      CHECK(o.norm() >= r / 2 * (1 - 1e-12));
    }
  }
}

TEST_CASE("eps_subgrad_member examples") {
  const auto abs1 = parse_field("abs(x1)", 1);
  const auto m = eps_subgrad_member({abs1, {0.0}, {1.5}, 0.5});
  CHECK(m.member);
  CHECK(m.estimate == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_FALSE(eps_subgrad_member({abs1, {0.0}, {1.6}, 0.5}).member);

  const auto smooth = parse_field("sin(x1) + x1^2", 1, "", {"cos(x1) + 2*x1"});
  const auto s = eps_subgrad_member({smooth, {0.4}, gradient(smooth, {0.4}), 0.0});
  CHECK(s.member);
  CHECK(std::fabs(s.estimate) < 1e-3);

  const auto neg = eps_subgrad_member({parse_field("-abs(x1)", 1), {0.0}, {0.0}, 0.0});
  CHECK_FALSE(neg.member);
  CHECK(neg.estimate == doctest::Approx(-1.0));

  CHECK_THROWS_AS(eps_subgrad_member({parse_field("1/x1", 1), {0.0}, {0.0}, 0.0}), DomainError);
  CHECK_THROWS_AS(eps_subgrad_member({abs1, {0.0}, {0.0}, -0.1}), ContractError);
}

TEST_CASE("eps_subdiff_interval_1d examples") {
  const auto abs1 = parse_field("abs(x1)", 1);
  const ScanRange scan{};
  for (double eps : {0.0, 0.25, 0.5, 1.0}) {
    const auto iv = eps_subdiff_interval_1d(abs1, {0.0}, eps);
    REQUIRE(iv.size() == 1);
    CHECK(std::fabs(iv[0].lo + 1 + eps) <= 2 * scan.step);
    CHECK(std::fabs(iv[0].hi - 1 - eps) <= 2 * scan.step);
  }
  const auto sq = eps_subdiff_interval_1d(parse_field("x1^2", 1), {1.0}, 0.0);
  REQUIRE(sq.size() == 1);
  CHECK(std::fabs(sq[0].lo - 2.0) <= scan.step);
  CHECK(std::fabs(sq[0].hi - 2.0) <= scan.step);
  CHECK(eps_subdiff_interval_1d(parse_field("-abs(x1)", 1), {0.0}, 0.0).empty());
  CHECK_THROWS_AS(eps_subdiff_interval_1d(abs1, {0.0}, 0.0, {}, ScanRange{1.0, 0.0, 0.01}), ContractError);
  CHECK_THROWS_AS(eps_subdiff_interval_1d(parse_field("x1", 2), {0.0, 0.0}, 0.0), DimensionError);
}

TEST_CASE("coarse probes reject the derivative of a concave function") {
  const auto f = parse_field("-x1^2", 1);
  CHECK(eps_subdiff_interval_1d(f, {0.3}, 0.0).empty());
  ProbeSpec fine;
  fine.shells = 26;
  const auto iv = eps_subdiff_interval_1d(f, {0.3}, 0.0, fine);
  REQUIRE(iv.size() == 1);
  CHECK(iv[0].contains(-0.6, 1e-9));
}

TEST_CASE("interval endpoints agree with a scan of the membership test") {
  const std::vector<std::string> exprs{"abs(x1)", "x1^2", "max(x1, 3*x1)", "abs(x1) - 0.3*x1", "x1^3 + abs(x1)"};
  const ScanRange scan{};
  for (const auto& e : exprs) {
    const auto phi = parse_field(e, 1);
    for (double eps : {0.0, 0.3}) {
      std::vector<std::size_t> hits;
      for (std::size_t i = 0; i < scan.count(); ++i)
        if (eps_subgrad_member({phi, {0.0}, {scan.at(i)}, eps}).member) hits.push_back(i);
      const auto runs = merge_runs(hits, scan);
      const auto iv = eps_subdiff_interval_1d(phi, {0.0}, eps);
      const std::optional<Interval> hull = iv.empty() ? std::nullopt : std::optional<Interval>(iv[0]);
      if (!hull) {
        CHECK(runs.empty());
        continue;
      }
      REQUIRE(runs.size() == 1);
      CHECK(runs[0].lo >= hull->lo - 1e-9);
      CHECK(runs[0].hi <= hull->hi + 1e-9);
      CHECK(runs[0].lo - hull->lo <= scan.step + 1e-9);
      CHECK(hull->hi - runs[0].hi <= scan.step + 1e-9);
    }
  }
}

TEST_CASE("smooth catalog gives singleton intervals at the derivative") {
  const ScanRange scan{};
  ProbeSpec fine;
  fine.shells = 26;
  std::mt19937_64 rng(5);
  for (const auto& e : testing::polynomial_catalog()) {
    if (e.dim != 1) continue;
    const auto f = testing::catalog_field(e);
    for (int k = 0; k < 5; ++k) {
      const Point x{testing::uniform(rng, -1.5, 1.5)};
      const double d = gradient(f, x)[0];
      const auto iv = eps_subdiff_interval_1d(f, x, 0.0, fine);
      REQUIRE(iv.size() == 1);
      CHECK(iv[0].width() <= 2 * scan.step + 1e-12);
      CHECK(std::fabs(0.5 * (iv[0].lo + iv[0].hi) - d) <= scan.step + 1e-4);
    }
  }
}

TEST_CASE("proximal_subgrad_member examples") {
  const GridSpec g(Ball(Point{0.0}, 1.0), 201);
  CHECK(proximal_subgrad_member(parse_field("abs(x1)", 1), {0.0}, {1.0}, 0.0, g).holds);
  CHECK(proximal_subgrad_member(parse_field("-x1^2", 1), {0.0}, {0.0}, 2.0, g).holds);
  for (double rho : {0.0, 1.0, 5.0, 10.0})
    CHECK_FALSE(proximal_subgrad_member(parse_field("-abs(x1)", 1), {0.0}, {0.0}, rho, g).holds);
  CHECK_THROWS_AS(proximal_subgrad_member(parse_field("abs(x1)", 1), {0.0}, {0.0}, -1.0, g), ContractError);
}

TEST_CASE("limiting_subdiff_sample_1d examples") {
  const auto a = limiting_subdiff_sample_1d(parse_field("abs(x1)", 1), {0.0});
  CHECK(a.approximate);
  REQUIRE_FALSE(a.clusters.empty());
  CHECK(a.clusters.front().lo <= -0.99);
  CHECK(a.clusters.back().hi >= 0.99);

  const auto s = limiting_subdiff_sample_1d(parse_field("x1^2 + x1", 1), {0.0});
  REQUIRE(s.clusters.size() == 1);
  CHECK(s.clusters[0].contains(1.0, 0.02));
  CHECK(s.clusters[0].width() <= 0.1);

  const auto w = limiting_subdiff_sample_1d(testing::x2_sin_inv_x(), {0.0});
  REQUIRE_FALSE(w.clusters.empty());
  CHECK(w.clusters.front().lo <= -0.9);
  CHECK(w.clusters.back().hi >= 0.9);
  bool has_zero = false;
  for (const auto& c : w.clusters) has_zero = has_zero || c.contains(0.0, 0.02);
  CHECK(has_zero);
  CHECK_THROWS_AS(limiting_subdiff_sample_1d(parse_field("x1", 2), {0.0, 0.0}), DimensionError);
}

TEST_CASE("min_eps_factor examples") {
  CHECK(min_eps_factor(parse_field("abs(x1)", 1), {0.0}, {1.5}) == doctest::Approx(0.5));
  const auto smooth = parse_field("x1^2 - x1", 1);
  CHECK(min_eps_factor(smooth, {0.3}, gradient(smooth, {0.3})) <= 1e-3);
  CHECK(min_eps_factor(parse_field("-abs(x1)", 1), {0.0}, {0.0}) == doctest::Approx(1.0));
  CHECK(std::isinf(min_eps_factor(parse_field("-sqrt(abs(x1))", 1), {0.0}, {0.0})));
}

TEST_CASE("membership is monotone in eps") {
  std::mt19937_64 rng(17);
  const std::vector<std::pair<std::string, int>> exprs{
      {"abs(x1)", 1}, {"-abs(x1) + x1^2", 1}, {"max(x1, -2*x1)", 1}, {"abs(x1) + abs(x2)", 2}, {"x1*x2 - abs(x1)", 2}};
  for (int k = 0; k < 200; ++k) {
    const auto& [text, dim] = exprs[k % exprs.size()];
    const auto phi = parse_field(text, dim);
    const Point xbar = k % 2 ? Point(std::vector<double>(dim, 0.0)) : testing::random_point(rng, dim, -1, 1);
    const Point xstar = testing::random_point(rng, dim, -2, 2);
    const double e1 = testing::uniform(rng, 0, 1.5), e2 = e1 + testing::uniform(rng, 0, 1);
    if (eps_subgrad_member({phi, xbar, xstar, e1}).member) CHECK(eps_subgrad_member({phi, xbar, xstar, e2}).member);
  }
}

TEST_CASE("proximal with rho = 0 implies regular") {
  const std::vector<std::string> exprs{"abs(x1)", "abs(x1) + x1^2", "max(x1, 2*x1)", "-abs(x1)", "x1^2"};
  const GridSpec g(Ball(Point{0.0}, 1.0), 201);
  for (const auto& e : exprs) {
    const auto phi = parse_field(e, 1);
    for (int k = -40; k <= 40; ++k) {
      const Point v{k / 10.0};
      if (proximal_subgrad_member(phi, {0.0}, v, 0.0, g).holds)
        CHECK_MESSAGE(eps_subgrad_member({phi, {0.0}, v, 0.0}).member, e << " v " << v[0]);
    }
  }
}
