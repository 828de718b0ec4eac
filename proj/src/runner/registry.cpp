#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "trapkit/evaluations.hpp"
#include "trapkit/geometry.hpp"
#include "trapkit/principles.hpp"
#include "trapkit/rationality.hpp"
#include "trapkit/runner.hpp"
#include "trapkit/subdifferential.hpp"
#include "trapkit/traps.hpp"

namespace trapkit::runner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad(const std::string& op, const std::string& param, const std::string& what) {
  throw ScenarioError("operation '" + op + "': argument '" + param + "' " + what);
}

bool is_point_json(const json& v) {
  if (!v.is_array() || v.empty() || v.size() > 3) return false;
  return std::all_of(v.begin(), v.end(), [](const json& c) { return c.is_number(); });
}

bool is_object_type(const std::string& t) { return t == "grid" || t == "probe" || t == "scan" || t == "ball"; }

int default_per_axis(int dim) { return dim == 1 ? 401 : dim == 2 ? 101 : 31; }

json ext(ExtReal v) { return num(v.raw()); }

json opt_point(const std::optional<Point>& p) { return p ? to_json(*p) : json(nullptr); }

json interval(const Interval& iv) { return json::array({num(iv.lo), num(iv.hi)}); }

json intervals(const std::vector<Interval>& ivs) {
  json out = json::array();
  for (const auto& iv : ivs) out.push_back(interval(iv));
  return out;
}

json verdict(const EvaluationVerdict& v) {
  return {{"holds", v.holds}, {"worst_gap", num(v.worst_gap)}, {"witness", opt_point(v.witness)},
          {"radius", num(v.radius)}, {"points", v.points}};
}

json verdict(const TrapVerdict& v) {
  json out = {{"is_trap", v.is_trap},
              {"worst_margin", num(v.worst_margin)},
              {"witness", opt_point(v.witness)},
              {"global", v.global_claim},
              {"grid", {{"per_axis", v.grid_per_axis}, {"points", v.grid_points}}}};
  out["xi_range"] = v.xi_lower ? json{{"lower", num(*v.xi_lower)}, {"open", true}} : json(nullptr);
  out["neighborhood_radius"] = v.neighborhood_radius ? num(*v.neighborhood_radius) : json(nullptr);
  if (v.subgradient_margin) out["subgradient_margin"] = num(*v.subgradient_margin);
  if (v.flat_enough) out["flat_enough"] = *v.flat_enough;
  return out;
}

json membership(const MembershipResult& m) {
  json shells = json::array();
  for (double v : m.shell_values) shells.push_back(num(v));
  return {{"member", m.member}, {"estimate", num(m.estimate)}, {"margin", num(m.margin)}, {"shell_values", shells}};
}

json point_list(const std::vector<Point>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(to_json(p));
  return out;
}

json num_list(const std::vector<double>& vs) {
  json out = json::array();
  for (double v : vs) out.push_back(num(v));
  return out;
}

ParamSpec req(std::string name, std::string type, std::string doc) {
  return {std::move(name), std::move(type), true, "", nullptr, std::move(doc)};
}

ParamSpec opt(std::string name, std::string type, std::string key, json fallback, std::string doc) {
  return {std::move(name), std::move(type), false, std::move(key), std::move(fallback), std::move(doc)};
}

// Grid over the region unless the task gives its own radius.
GridSpec region_grid(const Args& a, const Ball& region) {
  const GridSpec g = a.grid("grid", region.center);
  return a.value("grid").contains("radius") ? g : g.with_radius(region.radius);
}

EkelandParams ekeland_params(const Args& a, const Point& xbar) {
  const Ball region = a.ball("region", xbar);
  return EkelandParams(a.number("gamma"), a.number("lambda"), region, region_grid(a, region));
}

std::vector<OpInfo> build() {
  std::vector<OpInfo> ops;
  auto add = [&](std::string name, std::string module, std::string summary, std::vector<ParamSpec> params,
                 json smoke, Handler h) {
    ops.push_back({std::move(name), std::move(module), std::move(summary), std::move(params), std::move(smoke),
                   std::move(h)});
  };

  const ParamSpec p_xi = opt("xi", "number", "xi", 1.0, "weight factor xi >= 0");
  const ParamSpec p_eps = opt("eps", "number", "eps", 0.0, "subdifferential factor eps >= 0");
  const ParamSpec p_eta = opt("eta", "eta", "eta", 1.0, "cost rate eta(x): number or expression");
  const ParamSpec p_grid = opt("grid", "grid", "grid", json::object(), "grid {radius, per_axis, cap}");
  const ParamSpec p_probe = opt("probe", "probe", "probe", json::object(),
                                "probe {r0, shells, samples_per_shell, liminf_window, tol}");
  const ParamSpec p_scan = opt("scan", "scan", "scan", json::object(), "scan range {lo, hi, step}");
  const ParamSpec p_region = opt("region", "ball", "region", json::object(), "closed ball {center, radius}");

  // scalar_field
  add("parse_field", "scalar_field", "Parse an expression into a scalar field",
      {req("text", "string", "expression in x1..xn"), req("dim", "integer", "dimension 1..3"),
       opt("domain", "string", "", "", "closed domain predicate"),
       opt("grad", "strings", "", json::array(), "analytic gradient components"),
       opt("at", "point", "", nullptr, "evaluate the parsed field here")},
      {{"text", "abs(x1) + x1^2"}, {"dim", 1}, {"at", {0.5}}}, [](const Args& a) {
        std::vector<std::string> grad;
        for (const auto& g : a.value("grad")) grad.push_back(g.get<std::string>());
        const ScalarField f = parse_field(a.string("text"), a.integer("dim"), a.string("domain"), grad);
        json out = {{"dim", f.dim()}, {"expr", f.unparse()}, {"has_gradient", f.has_analytic_grad()}};
        if (auto p = a.opt_point("at")) out["value_at"] = ext(eval_field(f, *p));
        return out;
      });
  add("eval_field", "scalar_field", "Evaluate a field at a point (+inf outside the domain)",
      {req("f", "field", "field name"), req("x", "point", "evaluation point")}, {{"f", "abs1"}, {"x", {-0.25}}},
      [](const Args& a) { return json{{"value", ext(eval_field(a.field("f"), a.point("x")))}}; });
  add("gradient", "scalar_field", "Analytic gradient if declared, else central differences",
      {req("f", "field", "field name"), req("x", "point", "evaluation point"),
       opt("h", "number", "", kDefaultFdStep, "finite-difference step"),
       opt("mode", "string", "", "auto", "auto | fd | analytic")},
      {{"f", "g32"}, {"x", {0.5}}}, [](const Args& a) {
        const auto& f = a.field("f");
        const std::string mode = a.string("mode");
        const double h = a.number("h");
        if (mode != "auto" && mode != "fd" && mode != "analytic")
          throw ContractError("gradient mode must be auto, fd or analytic");
        if (mode == "analytic" && !f.has_analytic_grad()) throw ContractError("field has no analytic gradient");
        const bool fd = mode == "fd" || !f.has_analytic_grad();
        const Point g = fd ? fd_gradient(f, a.point("x"), h) : gradient(f, a.point("x"), h);
        return json{{"gradient", to_json(g)}, {"source", fd ? "fd" : "analytic"}};
      });

  // rationality_core
  add("advantage", "rationality_core", "A(y/x) = g(y) - g(x)",
      {req("g", "field", "to-be-increased payoff"), req("x", "point", "status quo"), req("y", "point", "new position")},
      {{"g", "g32"}, {"x", {0.5}}, {"y", {1.0}}},
      [](const Args& a) { return json{{"value", num(advantage(a.field("g"), a.point("x"), a.point("y")))}}; });
  add("cost", "rationality_core", "C(x, y) = eta(x) |y - x|",
      {p_eta, req("x", "point", "departure"), req("y", "point", "arrival")}, {{"x", {0.0, 0.0}}, {"y", {3.0, 4.0}}},
      [](const Args& a) {
        const Point x = a.point("x");
        return json{{"value", num(cost(a.cost("eta", x.dim()), x, a.point("y")))}};
      });
  add("inconvenience", "rationality_core", "I(y/x) = C(x, y) - C(x, x)",
      {p_eta, req("x", "point", "departure"), req("y", "point", "arrival")}, {{"x", {1.0}}, {"y", {-1.0}}, {"eta", 2.0}},
      [](const Args& a) {
        const Point x = a.point("x");
        return json{{"value", num(inconvenience(a.cost("eta", x.dim()), x, a.point("y")))}};
      });
  add("proximal_payoff_dec", "rationality_core", "Q_xi(x/xbar) = phi(x) + xi C(xbar, x)",
      {req("phi", "field", "to-be-decreased payoff"), p_eta, p_xi, req("xbar", "point", "reference point"),
       req("x", "point", "evaluation point")},
      {{"phi", "sq1"}, {"xi", 0.5}, {"xbar", {0.0}}, {"x", {1.0}}}, [](const Args& a) {
        const Point xbar = a.point("xbar");
        return json{{"value", ext(proximal_payoff_dec(a.field("phi"), a.cost("eta", xbar.dim()),
                                                      WeightFactor(a.number("xi")), xbar, a.point("x")))}};
      });
  add("proximal_payoff_inc", "rationality_core", "P_xi(x/xbar) = g(x) - xi C(xbar, x)",
      {req("g", "field", "to-be-increased payoff"), p_eta, p_xi, req("xbar", "point", "reference point"),
       req("x", "point", "evaluation point")},
      {{"g", "g32"}, {"xi", 0.5}, {"xbar", {0.5}}, {"x", {1.0}}}, [](const Args& a) {
        const Point xbar = a.point("xbar");
        return json{{"value", ext(proximal_payoff_inc(a.field("g"), a.cost("eta", xbar.dim()),
                                                      WeightFactor(a.number("xi")), xbar, a.point("x")))}};
      });
  add("worthwhile_gain", "rationality_core", "A_xi(y/x) = A(y/x) - xi I(y/x)",
      {req("g", "field", "to-be-increased payoff"), p_eta, p_xi, req("x", "point", "status quo"),
       req("y", "point", "new position")},
      {{"g", "g32"}, {"xi", 0.1}, {"x", {0.0}}, {"y", {0.5}}}, [](const Args& a) {
        const Point x = a.point("x");
        return json{{"value", num(worthwhile_gain(a.field("g"), a.cost("eta", x.dim()), WeightFactor(a.number("xi")),
                                                  x, a.point("y")))}};
      });
  add("not_worthwhile_loss", "rationality_core", "L_xi(y/x) = phi(y) - phi(x) + xi I(y/x)",
      {req("phi", "field", "to-be-decreased payoff"), p_eta, p_xi, req("x", "point", "status quo"),
       req("y", "point", "new position")},
      {{"phi", "sq1"}, {"xi", 0.1}, {"x", {1.0}}, {"y", {0.5}}}, [](const Args& a) {
        const Point x = a.point("x");
        return json{{"value", num(not_worthwhile_loss(a.field("phi"), a.cost("eta", x.dim()),
                                                      WeightFactor(a.number("xi")), x, a.point("y")))}};
      });
  add("is_worthwhile_change", "rationality_core", "A(y/x) >= xi I(y/x)",
      {req("g", "field", "to-be-increased payoff"), p_eta, p_xi, req("x", "point", "status quo"),
       req("y", "point", "new position")},
      {{"g", "g32"}, {"xi", 0.1}, {"x", {0.0}}, {"y", {0.5}}}, [](const Args& a) {
        const Point x = a.point("x");
        const CostModel c = a.cost("eta", x.dim());
        const WeightFactor xi(a.number("xi"));
        return json{{"worthwhile", is_worthwhile_change(a.field("g"), c, xi, x, a.point("y"))},
                    {"gain", num(worthwhile_gain(a.field("g"), c, xi, x, a.point("y")))}};
      });
  add("tilt_perturb", "rationality_core", "x -> phi(x) - <v, x>",
      {req("phi", "field", "payoff"), req("v", "point", "tilt vector"),
       opt("at", "point", "", nullptr, "evaluate the tilted field here")},
      {{"phi", "sq1"}, {"v", {1.0}}, {"at", {0.5}}}, [](const Args& a) {
        const ScalarField t = tilt_perturb(a.field("phi"), a.point("v"));
        json out = {{"expr", t.unparse()}, {"has_gradient", t.has_analytic_grad()}};
        if (auto p = a.opt_point("at")) out["value_at"] = ext(eval_field(t, *p));
        return out;
      });

  // evaluations
  add("linear_estimate", "evaluations", "E_{x*}(y/xbar) = <x*, y - xbar>",
      {req("rate", "point", "rate of change x*"), req("anchor", "point", "anchor xbar"), req("y", "point", "target")},
      {{"rate", {0.5}}, {"anchor", {0.5}}, {"y", {1.5}}},
      [](const Args& a) {
        return json{{"value", num(linear_estimate({a.point("rate"), a.point("anchor")}, a.point("y")))}};
      });
  const ParamSpec p_eval = req("l", "evaluation", "field name or affine {rate, value?} anchored at xbar");
  auto evaluation = [](const Args& a, const ScalarField& g, const Point& xbar) -> Evaluation {
    const json v = a.value("l");
    if (v.is_string()) return field_evaluation(a.context().functions.at(v.get<std::string>()));
    const Point rate = Point(v.at("rate").get<std::vector<double>>());
    const double value = v.contains("value") ? v.at("value").get<double>() : g.eval(xbar).value();
    return affine_evaluation(value, {rate, xbar});
  };
  add("check_optimistic", "evaluations", "g(y) <= l(y/xbar) near xbar",
      {req("g", "field", "to-be-increased payoff"), p_eval, req("xbar", "point", "anchor"), p_grid},
      {{"g", "g32"}, {"l", {{"rate", {0.5}}}}, {"xbar", {0.5}}, {"grid", {{"radius", 0.5}, {"per_axis", 101}}}},
      [evaluation](const Args& a) {
        const Point xbar = a.point("xbar");
        const auto& g = a.field("g");
        return verdict(check_optimistic(g, evaluation(a, g, xbar), xbar, a.grid("grid", xbar)));
      });
  add("check_pessimistic", "evaluations", "g(y) >= l(y/xbar) near xbar",
      {req("g", "field", "to-be-increased payoff"), p_eval, req("xbar", "point", "anchor"), p_grid},
      {{"g", "sq1"}, {"l", {{"rate", {0.0}}}}, {"xbar", {0.0}}, {"grid", {{"radius", 0.5}, {"per_axis", 101}}}},
      [evaluation](const Args& a) {
        const Point xbar = a.point("xbar");
        const auto& g = a.field("g");
        return verdict(check_pessimistic(g, evaluation(a, g, xbar), xbar, a.grid("grid", xbar)));
      });
  add("subgradient_optimistic_cert", "evaluations", "phi(x) - phi(xbar) >= <x*, x - xbar> near xbar",
      {req("phi", "field", "to-be-decreased payoff"), req("xbar", "point", "anchor"), req("xstar", "point", "rate"),
       p_grid},
      {{"phi", "abs1"}, {"xbar", {0.0}}, {"xstar", {0.5}}, {"grid", {{"radius", 1.0}, {"per_axis", 101}}}},
      [](const Args& a) {
        const Point xbar = a.point("xbar");
        return verdict(subgradient_optimistic_cert(a.field("phi"), xbar, a.point("xstar"), a.grid("grid", xbar)));
      });
  add("proximal_evaluation_check", "evaluations", "phi(x) - phi(xbar) + xi C(xbar, x) >= <x*, x - xbar> near xbar",
      {req("phi", "field", "to-be-decreased payoff"), p_eta, p_xi, req("xbar", "point", "anchor"),
       req("xstar", "point", "rate"), p_eps, p_grid},
      {{"phi", "negabs1"}, {"xi", 1.5}, {"eps", 1.0}, {"xbar", {0.0}}, {"xstar", {0.0}},
       {"grid", {{"radius", 1.0}, {"per_axis", 101}}}},
      [](const Args& a) {
        const Point xbar = a.point("xbar");
        return verdict(proximal_evaluation_check(a.field("phi"), a.cost("eta", xbar.dim()), WeightFactor(a.number("xi")),
                                                 xbar, a.point("xstar"), a.number("eps"), a.grid("grid", xbar)));
      });
  add("verify_support_function", "evaluations", "Smooth minorant s of phi touching at xbar with grad s = x*",
      {req("s", "field", "candidate support function"), req("phi", "field", "payoff"), req("xbar", "point", "anchor"),
       req("xstar", "point", "rate"), p_grid},
      {{"s", "zero1"}, {"phi", "abs1"}, {"xbar", {0.0}}, {"xstar", {0.0}}, {"grid", {{"radius", 1.0}, {"per_axis", 101}}}},
      [](const Args& a) {
        const Point xbar = a.point("xbar");
        const auto v = verify_support_function(a.field("s"), a.field("phi"), xbar, a.point("xstar"), a.grid("grid", xbar));
        return json{{"holds", v.holds}, {"anchor_gap", num(v.anchor_gap)}, {"gradient_error", num(v.gradient_error)},
                    {"minorant", verdict(v.minorant)}};
      });

  // subdifferential
  add("eps_subgrad_member", "subdifferential", "x* in the eps-subdifferential of phi at xbar",
      {req("phi", "field", "payoff"), req("xbar", "point", "base point"), req("xstar", "point", "rate"), p_eps, p_probe},
      {{"phi", "abs1"}, {"xbar", {0.0}}, {"xstar", {1.0}}},
      [](const Args& a) {
        return membership(eps_subgrad_member({a.field("phi"), a.point("xbar"), a.point("xstar"), a.number("eps")},
                                             a.probe("probe")));
      });
  add("eps_subdiff_interval_1d", "subdifferential", "1-D eps-subdifferential within the scan range, as intervals",
      {req("phi", "field", "payoff (dim 1)"), req("xbar", "point", "base point"), p_eps, p_probe, p_scan},
      {{"phi", "abs1"}, {"xbar", {0.0}}, {"eps", 0.5}}, [](const Args& a) {
        const auto& phi = a.field("phi");
        const Point xbar = a.point("xbar");
        const auto hull = eps_subdiff_hull_1d(phi, xbar, a.number("eps"), a.probe("probe"));
        return json{{"intervals", intervals(eps_subdiff_interval_1d(phi, xbar, a.number("eps"), a.probe("probe"),
                                                                    a.scan("scan")))},
                    {"hull", hull ? interval(*hull) : json(nullptr)}};
      });
  add("proximal_subgrad_member", "subdifferential", "phi(x) >= phi(xbar) + <v, x - xbar> - (rho/2)|x - xbar|^2 near xbar",
      {req("phi", "field", "payoff"), req("xbar", "point", "base point"), req("v", "point", "rate"),
       opt("rho", "number", "rho", 0.0, "curvature rho >= 0"), p_grid},
      {{"phi", "sq1"}, {"xbar", {0.0}}, {"v", {0.0}}, {"grid", {{"radius", 1.0}, {"per_axis", 101}}}},
      [](const Args& a) {
        const Point xbar = a.point("xbar");
        return verdict(
            proximal_subgrad_member(a.field("phi"), xbar, a.point("v"), a.number("rho"), a.grid("grid", xbar)));
      });
  add("limiting_subdiff_sample_1d", "subdifferential", "Approximate limiting subdifferential in 1-D",
      {req("phi", "field", "payoff (dim 1)"), req("xbar", "point", "base point"), p_probe,
       opt("eps_levels", "numbers", "", json::array({0.1, 0.05, 0.01}), "decreasing eps_k"),
       opt("points_per_side", "integer", "", 256, "sample points per side and level"), p_scan},
      {{"phi", "abs1"}, {"xbar", {0.0}}, {"points_per_side", 32}}, [](const Args& a) {
        LimitingOptions o;
        o.eps_levels = a.numbers("eps_levels");
        o.points_per_side = a.integer("points_per_side");
        o.scan = a.scan("scan");
        const auto s = limiting_subdiff_sample_1d(a.field("phi"), a.point("xbar"), a.probe("probe"), o);
        return json{{"count", s.values.size()}, {"clusters", intervals(s.clusters)}, {"approximate", s.approximate}};
      });
  add("min_eps_factor", "subdifferential", "Smallest eps making x* an eps-subgradient",
      {req("phi", "field", "payoff"), req("xbar", "point", "base point"), req("xstar", "point", "rate"), p_probe},
      {{"phi", "lin1"}, {"xbar", {0.0}}, {"xstar", {0.0}}},
      [](const Args& a) {
        return json{{"eps_min", num(min_eps_factor(a.field("phi"), a.point("xbar"), a.point("xstar"), a.probe("probe")))}};
      });

  // traps
  add("is_stationary_trap", "traps", "Grid check of L_xi(x/xbar) >= -gamma on the region",
      {req("phi", "field", "to-be-decreased payoff"), req("xbar", "point", "reference point"), p_xi, p_eta, p_region,
       opt("gamma", "number", "", 0.0, "approximation level (0: exact)"),
       opt("strict", "bool", "", false, "strict inequality off-center"),
       opt("whole_domain", "bool", "", false, "region stands for the whole space"), p_grid},
      {{"phi", "lin1"}, {"xbar", {0.0}}, {"xi", 1.0}, {"region", {{"radius", 1.0}}}}, [](const Args& a) {
        const Point xbar = a.point("xbar");
        const Ball region = a.ball("region", xbar);
        TrapQuery q(a.field("phi"), xbar, WeightFactor(a.number("xi")), region, a.number("gamma"), a.flag("strict"));
        q.cost = a.cost("eta", xbar.dim());
        q.whole_domain = a.flag("whole_domain");
        return verdict(is_stationary_trap(q, region_grid(a, region)));
      });
  const ParamSpec p_nu = opt("nu", "number", "", kCertificateNu, "weight margin for the certified neighborhood");
  add("trap_certificate", "traps", "Trap for all xi > eps from an eps-subgradient with nonnegative linear estimate",
      {req("phi", "field", "to-be-decreased payoff"), req("xbar", "point", "reference point"), p_eps,
       req("xstar", "point", "rate"), p_grid, p_probe, p_nu},
      {{"phi", "abs1"}, {"xbar", {0.0}}, {"xstar", {0.0}}, {"grid", {{"radius", 1.0}, {"per_axis", 101}}}},
      [](const Args& a) {
        const Point xbar = a.point("xbar");
        return verdict(trap_certificate(a.field("phi"), xbar, a.number("eps"), a.point("xstar"), a.grid("grid", xbar),
                                        a.probe("probe"), a.number("nu")));
      });
  add("approx_trap_certificate", "traps", "gamma-approximate trap for all xi > eps",
      {req("phi", "field", "to-be-decreased payoff"), req("xbar", "point", "reference point"), p_eps,
       req("xstar", "point", "rate"), opt("gamma", "number", "gamma", 0.1, "approximation level > 0"), p_grid, p_probe,
       p_nu},
      {{"phi", "abs1"}, {"xbar", {0.0}}, {"xstar", {0.05}}, {"gamma", 0.1}, {"grid", {{"radius", 1.0}, {"per_axis", 101}}}},
      [](const Args& a) {
        const Point xbar = a.point("xbar");
        return verdict(approx_trap_certificate(a.field("phi"), xbar, a.number("eps"), a.point("xstar"),
                                               a.number("gamma"), a.grid("grid", xbar), a.probe("probe"),
                                               a.number("nu")));
      });
  add("classify_trap", "traps", "Flat / minimizer / nonzero-rate classification at xbar",
      {req("phi", "field", "to-be-decreased payoff"), req("xbar", "point", "reference point"), p_probe,
       opt("eps_scan", "numbers", "", nullptr, "scanned eps values (default 0, 0.1, ..., 2)"),
       opt("per_axis", "integer", "", nullptr, "minimizer grid resolution")},
      {{"phi", "negabs1"}, {"xbar", {0.0}}}, [](const Args& a) {
        ClassifyOptions o;
        const Point xbar = a.point("xbar");
        if (!a.value("eps_scan").is_null()) o.eps_scan = a.numbers("eps_scan");
        o.per_axis = a.value("per_axis").is_null() ? (xbar.dim() == 1 ? 41 : xbar.dim() == 2 ? 21 : 11)
                                                   : a.integer("per_axis");
        const auto c = classify_trap(a.field("phi"), xbar, a.probe("probe"), o);
        return json{{"flat_at_zero", c.flat_at_zero},
                    {"flat_eps", c.flat_eps ? num(*c.flat_eps) : json(nullptr)},
                    {"eps_min", num(c.eps_min)},
                    {"local_minimizer", c.local_minimizer},
                    {"minimizer_margin", num(c.minimizer_margin)},
                    {"nonzero_rates", point_list(c.nonzero_rates)}};
      });

  // principles
  const ParamSpec p_gamma = opt("gamma", "number", "gamma", nullptr, "gamma > 0");
  const ParamSpec p_lambda = opt("lambda", "number", "lambda", nullptr, "lambda > 0");
  add("ekeland_descend", "principles", "Grid Ekeland descent from a gamma-approximate trap",
      {req("phi", "field", "to-be-decreased payoff"), req("xbar", "point", "reference point"), p_xi, p_gamma, p_lambda,
       p_region, p_grid},
      {{"phi", "lin1"}, {"xbar", {0.0}}, {"xi", 0.0}, {"gamma", 0.1}, {"lambda", 0.2},
       {"region", {{"radius", 0.1}}}, {"grid", {{"per_axis", 21}}}},
      [](const Args& a) {
        const Point xbar = a.point("xbar");
        const EkelandParams p = ekeland_params(a, xbar);
        try {
          const auto r = ekeland_descend(a.field("phi"), xbar, WeightFactor(a.number("xi")), p);
          return json{{"hypothesis_holds", true},
                      {"hypothesis", verdict(r.hypothesis)},
                      {"x_gamma", to_json(r.x_gamma)},
                      {"iterates", point_list(r.trace.iterates)},
                      {"objective_values", num_list(r.trace.objective_values)},
                      {"iterations", r.trace.iterates.size() - 1}};
        } catch (const HypothesisError& e) {
          return json{{"hypothesis_holds", false}, {"hypothesis", verdict(e.verdict())}, {"message", e.what()}};
        }
      });
  add("verify_perturbed_min", "principles", "Q(x_gamma) <= Q(x) + (gamma/lambda)|x - x_gamma| on the region grid",
      {req("phi", "field", "to-be-decreased payoff"), req("xbar", "point", "reference point"), p_xi,
       req("x_gamma", "point", "candidate"), p_gamma, p_lambda, p_region, p_grid},
      {{"phi", "lin1"}, {"xbar", {0.0}}, {"xi", 0.0}, {"x_gamma", {-0.1}}, {"gamma", 0.1}, {"lambda", 0.2},
       {"region", {{"radius", 0.1}}}, {"grid", {{"per_axis", 21}}}},
      [](const Args& a) {
        const Point xbar = a.point("xbar");
        return verdict(
            verify_perturbed_min(a.field("phi"), xbar, WeightFactor(a.number("xi")), a.point("x_gamma"), ekeland_params(a, xbar)));
      });
  add("rate_bound_check", "principles", "Rate x* in the regular subdifferential of Q at x_gamma with |x*| <= gamma/lambda",
      {req("phi", "field", "to-be-decreased payoff"), req("xbar", "point", "reference point"), p_xi,
       req("x_gamma", "point", "perturbed minimizer"), p_gamma, p_lambda, p_region, p_grid, p_probe},
      {{"phi", "abs1"}, {"xbar", {0.0}}, {"xi", 0.0}, {"x_gamma", {0.0}}, {"gamma", 0.5}, {"lambda", 1.0},
       {"region", {{"radius", 1.0}}}, {"grid", {{"per_axis", 41}}}},
      [](const Args& a) {
        const Point xbar = a.point("xbar");
        const auto r = rate_bound_check(a.field("phi"), xbar, WeightFactor(a.number("xi")), a.point("x_gamma"),
                                        ekeland_params(a, xbar), a.probe("probe"));
        json out = {{"status", r.status}, {"kappa", num(r.kappa)}, {"slack", num(r.slack)}, {"interior", r.interior},
                    {"intervals", intervals(r.intervals)}};
        out["hull"] = r.hull ? interval(*r.hull) : json(nullptr);
        out["intersects"] = r.intersects ? json(*r.intersects) : json(nullptr);
        out["representative"] = r.representative ? num(*r.representative) : json(nullptr);
        out["nearby"] = r.nearby ? num(*r.nearby) : json(nullptr);
        out["rate1"] = r.rate1 ? json(*r.rate1) : json(nullptr);
        out["rate2"] = r.rate2 ? json(*r.rate2) : json(nullptr);
        out["rate2_center"] = opt_point(r.rate2_center);
        out["rate2_radius"] = r.rate2_radius ? num(*r.rate2_radius) : json(nullptr);
        out["rate2_error"] = r.rate2_error ? num(*r.rate2_error) : json(nullptr);
        return out;
      });

  // geometry
  add("eps_normal_member", "geometry", "x* in the eps-normal set of omega at xbar",
      {req("omega", "set", "set name or inline set"), req("xbar", "point", "point of omega"),
       req("xstar", "point", "rate"), p_eps, p_probe},
      {{"omega", "lower"}, {"xbar", {0.0, 0.0}}, {"xstar", {0.0, 1.0}}},
      [](const Args& a) {
        return membership(eps_normal_member(a.set("omega"), a.point("xbar"), a.point("xstar"), a.number("eps"),
                                            a.probe("probe")));
      });
  add("trap_relative_check", "geometry", "Linear-utility trap relative to omega",
      {req("xstar", "point", "utility rate"), p_xi, req("xbar", "point", "point of omega"),
       req("omega", "set", "set name or inline set"), p_grid},
      {{"xstar", {0.0, 1.0}}, {"xi", 0.5}, {"xbar", {0.0, 0.0}}, {"omega", "lower"},
       {"grid", {{"radius", 1.0}, {"per_axis", 21}}}},
      [](const Args& a) {
        const Point xbar = a.point("xbar");
        return verdict(trap_relative_check(a.point("xstar"), WeightFactor(a.number("xi")), xbar, a.set("omega"),
                                           a.grid("grid", xbar)));
      });
  add("is_locally_extremal", "geometry", "Shifted intersections miss the region for all late shifts",
      {req("omega1", "set", "first set"), req("omega2", "set", "second set"), req("xbar", "point", "common point"),
       req("shifts", "shifts", "list of [a1, a2] pairs"), p_region, p_grid},
      {{"omega1", "lower"}, {"omega2", "upper"}, {"xbar", {0.0, 0.0}},
       {"shifts", {{{0.0, 1.0}, {0.0, 0.0}}, {{0.0, 0.5}, {0.0, 0.0}}, {{0.0, 0.25}, {0.0, 0.0}}}},
       {"region", {{"radius", 1.0}}}, {"grid", {{"per_axis", 21}}}},
      [](const Args& a) {
        const Point xbar = a.point("xbar");
        const Ball region = a.ball("region", xbar);
        const auto c =
            is_locally_extremal(a.set("omega1"), a.set("omega2"), xbar, a.shifts("shifts"), region, region_grid(a, region));
        json shifts = json::array();
        for (const auto& s : c.shifts) shifts.push_back({{"empty", s.empty}, {"overlap", opt_point(s.overlap)}});
        return json{{"extremal", c.extremal},
                    {"cutoff", c.cutoff ? json(*c.cutoff) : json(nullptr)},
                    {"shifts", shifts}};
      });
  add("extremal_witness", "geometry", "Two-set extremal principle witness in R^2",
      {req("omega1", "set", "first set"), req("omega2", "set", "second set"), req("xbar", "point", "common point"),
       opt("eps", "number", "eps", 0.1, "eps > 0"), p_probe,
       opt("directions", "integer", "", 720, "direction scan size"),
       opt("per_axis", "integer", "", 21, "grid resolution for x_i")},
      {{"omega1", "lower"}, {"omega2", "upper"}, {"xbar", {0.0, 0.0}}, {"eps", 0.1}, {"per_axis", 5},
       {"directions", 72}},
      [](const Args& a) {
        WitnessScan scan;
        scan.directions = a.integer("directions");
        scan.per_axis = a.integer("per_axis");
        const auto r = extremal_witness(a.set("omega1"), a.set("omega2"), a.point("xbar"), a.number("eps"),
                                        a.probe("probe"), scan);
        json out = {{"found", r.found}, {"angle_deg", num(r.angle_deg)}, {"estimate1", num(r.estimate1)},
                    {"estimate2", num(r.estimate2)}};
        if (r.witness) {
          const auto& w = *r.witness;
          out["x1"] = to_json(w.x1);
          out["x2"] = to_json(w.x2);
          out["rate1"] = to_json(w.rate1);
          out["rate2"] = to_json(w.rate2);
          out["rate_sum"] = to_json(w.rate1 + w.rate2);
          out["norm_sum"] = num(w.rate1.norm() + w.rate2.norm());
        }
        json traps = json::array();
        for (const auto& t : r.traps) traps.push_back({{"xi", num(t.xi)}, {"set1", verdict(t.set1)}, {"set2", verdict(t.set2)}});
        out["relative_traps"] = traps;
        return out;
      });
  return ops;
}

}  // namespace

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v == 0.0 ? 0.0 : v;
}

json to_json(const Point& p) {
  json out = json::array();
  for (double c : p.coords()) out.push_back(num(c));
  return out;
}

const std::vector<OpInfo>& operations() {
  static const std::vector<OpInfo> ops = build();
  return ops;
}

const OpInfo& find_operation(const std::string& name) {
  for (const auto& op : operations())
    if (op.name == name) return op;
  throw ScenarioError("unknown operation '" + name + "'");
}

json catalog_json() {
  json out = json::array();
  for (const auto& op : operations()) {
    json params = json::array();
    for (const auto& p : op.params) {
      json e = {{"name", p.name}, {"type", p.type}, {"required", p.required}, {"doc", p.doc}};
      if (!p.default_key.empty()) e["default_key"] = p.default_key;
      if (!p.fallback.is_null()) e["default"] = p.fallback;
      params.push_back(std::move(e));
    }
    out.push_back({{"name", op.name}, {"module", op.module}, {"summary", op.summary}, {"params", params}});
  }
  return out;
}

std::string catalog_text() {
  std::ostringstream os;
  for (const auto& op : operations()) {
    os << op.name << "  [" << op.module << "]  " << op.summary << "\n";
    for (const auto& p : op.params) {
      os << "    " << p.name << ": " << p.type;
      if (p.required) os << " (required)";
      else if (!p.fallback.is_null()) os << " = " << p.fallback.dump();
      if (!p.default_key.empty()) os << " [defaults." << p.default_key << "]";
      os << "  " << p.doc << "\n";
    }
  }
  return os.str();
}

Context smoke_context() {
  Context c;
  auto def = [&](const std::string& name, const json& d) { c.functions.emplace(name, field_from_json(d, name)); };
  def("abs1", {{"dim", 1}, {"expr", "abs(x1)"}});
  def("negabs1", {{"dim", 1}, {"expr", "-abs(x1)"}});
  def("sq1", {{"dim", 1}, {"expr", "x1^2"}, {"grad", {"2*x1"}}});
  def("lin1", {{"dim", 1}, {"expr", "x1"}, {"grad", {"1"}}});
  def("zero1", {{"dim", 1}, {"expr", "0"}, {"grad", {"0"}}});
  def("g32", {{"dim", 1}, {"expr", "x1 - 0.5*x1^2"}, {"grad", {"1 - x1"}}});
  c.sets.emplace("lower", set_from_json({{"kind", "halfspace"}, {"normal", {0.0, 1.0}}, {"offset", 0.0}}, c));
  c.sets.emplace("upper", set_from_json({{"kind", "halfspace"}, {"normal", {0.0, -1.0}}, {"offset", 0.0}}, c));
  return c;
}

void validate_args(const OpInfo& op, const json& args, const Context& ctx) {
  if (!args.is_object()) throw ScenarioError("operation '" + op.name + "': args must be an object");
  for (const auto& [k, v] : args.items()) {
    const auto it = std::find_if(op.params.begin(), op.params.end(), [&](const ParamSpec& p) { return p.name == k; });
    if (it == op.params.end()) bad(op.name, k, "is not a parameter");
    const std::string& t = it->type;
    bool ok = true;
    if (t == "field") {
      ok = v.is_string();
      if (ok && !ctx.functions.count(v.get<std::string>())) bad(op.name, k, "names an undefined function");
    } else if (t == "point") {
      ok = is_point_json(v);
    } else if (t == "number") {
      ok = v.is_number();
    } else if (t == "integer") {
      ok = v.is_number_integer();
    } else if (t == "bool") {
      ok = v.is_boolean();
    } else if (t == "string") {
      ok = v.is_string();
    } else if (t == "strings") {
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& s) { return s.is_string(); });
    } else if (t == "numbers") {
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& s) { return s.is_number(); });
    } else if (t == "eta") {
      ok = v.is_number() || v.is_string();
    } else if (t == "set") {
      ok = v.is_object() || v.is_string();
      if (v.is_string() && !ctx.sets.count(v.get<std::string>())) bad(op.name, k, "names an undefined set");
    } else if (t == "evaluation") {
      ok = v.is_string() || (v.is_object() && v.contains("rate") && is_point_json(v.at("rate")));
      if (v.is_string() && !ctx.functions.count(v.get<std::string>())) bad(op.name, k, "names an undefined function");
    } else if (t == "shifts") {
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& s) {
             return s.is_array() && s.size() == 2 && is_point_json(s[0]) && is_point_json(s[1]);
           });
    } else if (t == "scan") {
      ok = v.is_object() || (v.is_array() && v.size() == 3);
    } else if (is_object_type(t)) {
      ok = v.is_object();
    }
    if (!ok) bad(op.name, k, "has the wrong type (expected " + t + ")");
  }
  for (const auto& p : op.params) {
    const bool present = args.contains(p.name) || (!p.default_key.empty() && ctx.defaults.contains(p.default_key)) ||
                         !p.fallback.is_null() || is_object_type(p.type);
    if (p.required && !args.contains(p.name)) bad(op.name, p.name, "is required");
    if (!present && p.type == "number" && (p.name == "gamma" || p.name == "lambda"))
      bad(op.name, p.name, "is required (no scenario default)");
  }
}

json dispatch(const std::string& name, const json& args, const Context& ctx) {
  const OpInfo& op = find_operation(name);
  validate_args(op, args, ctx);
  return op.handler(Args(op, args, ctx));
}

// ---- Args ----

const ParamSpec& Args::spec(const std::string& name) const {
  for (const auto& p : op_.params)
    if (p.name == name) return p;
  throw Error("operation '" + op_.name + "' has no parameter '" + name + "'");
}

bool Args::has(const std::string& name) const { return raw_.contains(name); }

json Args::value(const std::string& name) const {
  const ParamSpec& p = spec(name);
  if (is_object_type(p.type)) {
    json merged = p.fallback.is_object() ? p.fallback : json::object();
    auto overlay = [&](const json& src) {
      if (src.is_array() && p.type == "scan" && src.size() == 3)
        merged = {{"lo", src[0]}, {"hi", src[1]}, {"step", src[2]}};
      else if (src.is_object())
        for (const auto& [k, v] : src.items()) merged[k] = v;
    };
    if (!p.default_key.empty() && ctx_.defaults.contains(p.default_key)) overlay(ctx_.defaults.at(p.default_key));
    if (raw_.contains(name)) overlay(raw_.at(name));
    return merged;
  }
  if (raw_.contains(name)) return raw_.at(name);
  if (!p.default_key.empty() && ctx_.defaults.contains(p.default_key)) return ctx_.defaults.at(p.default_key);
  return p.fallback;
}

namespace {
json need(const json& v, const std::string& op, const std::string& name) {
  if (v.is_null()) bad(op, name, "is missing");
  return v;
}
Point point_of(const json& v, const std::string& op, const std::string& name) {
  if (!is_point_json(v)) bad(op, name, "must be a list of 1 to 3 numbers");
  return Point(v.get<std::vector<double>>());
}
double number_of(const json& v, const std::string& op, const std::string& name) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return kInf;
  }
  if (!v.is_number()) bad(op, name, "must be a number");
  return v.get<double>();
}
}  // namespace

const ScalarField& Args::field(const std::string& name) const {
  const json v = need(value(name), op_.name, name);
  if (!v.is_string()) bad(op_.name, name, "must name a function");
  const auto it = ctx_.functions.find(v.get<std::string>());
  if (it == ctx_.functions.end()) bad(op_.name, name, "names an undefined function");
  return it->second;
}

Point Args::point(const std::string& name) const { return point_of(need(value(name), op_.name, name), op_.name, name); }

std::optional<Point> Args::opt_point(const std::string& name) const {
  const json v = value(name);
  if (v.is_null()) return std::nullopt;
  return point_of(v, op_.name, name);
}

double Args::number(const std::string& name) const {
  return number_of(need(value(name), op_.name, name), op_.name, name);
}

int Args::integer(const std::string& name) const {
  const json v = need(value(name), op_.name, name);
  if (!v.is_number_integer()) bad(op_.name, name, "must be an integer");
  return v.get<int>();
}

bool Args::flag(const std::string& name) const {
  const json v = need(value(name), op_.name, name);
  if (!v.is_boolean()) bad(op_.name, name, "must be a boolean");
  return v.get<bool>();
}

std::string Args::string(const std::string& name) const {
  const json v = need(value(name), op_.name, name);
  if (!v.is_string()) bad(op_.name, name, "must be a string");
  return v.get<std::string>();
}

std::vector<double> Args::numbers(const std::string& name) const {
  const json v = need(value(name), op_.name, name);
  if (!v.is_array()) bad(op_.name, name, "must be a list of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(number_of(e, op_.name, name));
  return out;
}

RegionSet Args::set(const std::string& name) const {
  const json v = need(value(name), op_.name, name);
  if (v.is_string()) {
    const auto it = ctx_.sets.find(v.get<std::string>());
    if (it == ctx_.sets.end()) bad(op_.name, name, "names an undefined set");
    return it->second;
  }
  return set_from_json(v, ctx_);
}

Ball Args::ball(const std::string& name, const Point& default_center) const {
  const json v = value(name);
  const Point c = v.contains("center") ? point_of(v.at("center"), op_.name, name + ".center") : default_center;
  require_same_dim(c, default_center, "region");
  const double r = v.contains("radius") ? number_of(v.at("radius"), op_.name, name + ".radius") : 1.0;
  return Ball(c, r);
}

GridSpec Args::grid(const std::string& name, const Point& center) const {
  const json v = value(name);
  const double r = v.contains("radius") ? number_of(v.at("radius"), op_.name, name + ".radius") : 1.0;
  int m = default_per_axis(center.dim());
  if (v.contains("per_axis")) {
    if (!v.at("per_axis").is_number_integer()) bad(op_.name, name + ".per_axis", "must be an integer");
    m = v.at("per_axis").get<int>();
  }
  std::size_t cap = kDefaultGridCap;
  if (v.contains("cap")) {
    if (!v.at("cap").is_number_unsigned()) bad(op_.name, name + ".cap", "must be a positive integer");
    cap = v.at("cap").get<std::size_t>();
  }
  return GridSpec(Ball(center, r), m, cap);
}

ProbeSpec Args::probe(const std::string& name) const {
  const json v = value(name);
  ProbeSpec p;
  for (const auto& [k, e] : v.items()) {
    const std::string path = name + "." + k;
    if (k == "r0") p.r0 = number_of(e, op_.name, path);
    else if (k == "tol") p.tol = number_of(e, op_.name, path);
    else if (k == "shells" || k == "samples_per_shell" || k == "liminf_window") {
      if (!e.is_number_integer()) bad(op_.name, path, "must be an integer");
      (k == "shells" ? p.shells : k == "samples_per_shell" ? p.samples_per_shell : p.liminf_window) = e.get<int>();
    } else {
      bad(op_.name, path, "is not a probe setting");
    }
  }
  p.validate();
  return p;
}

ScanRange Args::scan(const std::string& name) const {
  const json v = value(name);
  ScanRange s;
  for (const auto& [k, e] : v.items()) {
    const std::string path = name + "." + k;
    if (k == "lo") s.lo = number_of(e, op_.name, path);
    else if (k == "hi") s.hi = number_of(e, op_.name, path);
    else if (k == "step") s.step = number_of(e, op_.name, path);
    else bad(op_.name, path, "is not a scan setting");
  }
  s.count();
  return s;
}

CostModel Args::cost(const std::string& name, int dim) const {
  const json v = need(value(name), op_.name, name);
  if (v.is_number()) return CostModel::constant(dim, v.get<double>());
  if (v.is_string()) return CostModel(parse_field(v.get<std::string>(), dim));
  bad(op_.name, name, "must be a number or an expression");
}

std::vector<std::pair<Point, Point>> Args::shifts(const std::string& name) const {
  const json v = need(value(name), op_.name, name);
  std::vector<std::pair<Point, Point>> out;
  for (const auto& s : v) {
    if (!s.is_array() || s.size() != 2) bad(op_.name, name, "must be a list of [a1, a2] pairs");
    out.emplace_back(point_of(s[0], op_.name, name), point_of(s[1], op_.name, name));
  }
  return out;
}

}  // namespace trapkit::runner
