#include "trapkit/subdifferential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace trapkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double snap(double v) { return std::fabs(v) < 1e-14 ? 0.0 : v; }

double base_value(const ScalarField& phi, const Point& xbar) {
  const ExtReal v = phi.eval(xbar);
  if (v.is_infinite()) throw DomainError("payoff is +inf at the reference point " + xbar.to_string());
  return v.raw();
}

// phi(xbar + u) - phi(xbar) for every probe offset u (+inf outside dom phi).
struct ProbeValues {
  std::vector<std::vector<Point>> offsets;
  std::vector<std::vector<double>> dphi;
};

ProbeValues sample(const ScalarField& phi, const Point& xbar, const ProbeSpec& probe) {
  probe.validate();
  const double base = base_value(phi, xbar);
  ProbeValues pv;
  pv.offsets = shell_offsets(probe, xbar.dim());
  pv.dphi.resize(pv.offsets.size());
  for (std::size_t k = 0; k < pv.offsets.size(); ++k) {
    pv.dphi[k].reserve(pv.offsets[k].size());
    for (const auto& u : pv.offsets[k]) pv.dphi[k].push_back(phi.eval(xbar + u).raw() - base);
  }
  return pv;
}

std::vector<double> shell_minima(const ProbeValues& pv, const Point& xstar) {
  std::vector<double> out;
  out.reserve(pv.offsets.size());
  for (std::size_t k = 0; k < pv.offsets.size(); ++k) {
    double m = kInf;
    for (std::size_t j = 0; j < pv.offsets[k].size(); ++j) {
      const Point& u = pv.offsets[k][j];
      const double q = (pv.dphi[k][j] - xstar.dot(u)) / u.norm();
      m = std::min(m, q);
    }
    out.push_back(m);
  }
  return out;
}

double window_min(const std::vector<double>& shells, int window) {
  double m = kInf;
  for (std::size_t k = shells.size() - static_cast<std::size_t>(window); k < shells.size(); ++k)
    m = std::min(m, shells[k]);
  return m;
}

// Quotient minima still dropping by non-shrinking amounts over the window.
bool looks_unbounded(const std::vector<double>& shells, int window) {
  if (window < 3) return false;
  const std::size_t first = shells.size() - static_cast<std::size_t>(window);
  double prev_drop = 0.0;
  for (std::size_t k = first; k + 1 < shells.size(); ++k) {
    const double drop = shells[k] - shells[k + 1];
    if (!(drop > 0.0)) return false;
    if (k > first && drop < prev_drop * (1.0 - 1e-9)) return false;
    prev_drop = drop;
  }
  return true;
}

}  // namespace

void ProbeSpec::validate() const {
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw ContractError("probe r0 must be positive");
  if (shells < 4) throw ContractError("probe needs at least 4 shells");
  if (samples_per_shell < 8) throw ContractError("probe needs at least 8 samples per shell");
  if (liminf_window < 1 || liminf_window > shells) throw ContractError("probe liminf window must be in [1, shells]");
  if (!(tol >= 0.0)) throw ContractError("probe tolerance must be >= 0");
}

std::vector<std::vector<Point>> shell_offsets(const ProbeSpec& probe, int dim) {
  probe.validate();
  if (dim < 1 || dim > kMaxDim) throw DimensionError("probe dimension must be 1, 2 or 3");
  const int s = probe.samples_per_shell;

  std::vector<Point> unit;  // directions for dim >= 2
  if (dim == 2) {
    for (int j = 0; j < s; ++j) {
      const double a = 2.0 * std::numbers::pi * j / s;
      unit.push_back(Point{snap(std::cos(a)), snap(std::sin(a))});
    }
    if (s % 4 != 0)
      for (const Point& axis : {Point{1.0, 0.0}, Point{0.0, 1.0}, Point{-1.0, 0.0}, Point{0.0, -1.0}})
        unit.push_back(axis);
  } else if (dim == 3) {
    for (int k = 0; k < 3; ++k)
      for (double sign : {1.0, -1.0}) {
        Point e = Point::zero(3);
        e[k] = sign;
        unit.push_back(e);
      }
    const int rest = s - 6;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < rest; ++j) {
      const double z = 1.0 - 2.0 * (j + 0.5) / rest;
      const double rad = std::sqrt(1.0 - z * z);
      const double a = golden * j;
      unit.push_back(Point{snap(rad * std::cos(a)), snap(rad * std::sin(a)), snap(z)});
    }
  }

  std::vector<std::vector<Point>> out(static_cast<std::size_t>(probe.shells));
  double r = probe.r0;
  for (int k = 0; k < probe.shells; ++k, r *= 0.5) {
    auto& shell = out[static_cast<std::size_t>(k)];
    if (dim == 1) {
      shell.push_back(Point{-r});
      shell.push_back(Point{r});
      const int interior = s - 2;
      const int per_side = interior / 2;
      for (int j = 1; j <= per_side; ++j) {
        const double t = r * (1.0 - 0.5 * j / (per_side + 1));
        shell.push_back(Point{-t});
        shell.push_back(Point{t});
      }
      if (interior % 2 == 1) shell.push_back(Point{0.75 * r});
    } else {
      for (const auto& u : unit) shell.push_back(r * u);
    }
  }
  return out;
}

MembershipResult eps_subgrad_member(const SubgradientQuery& q, const ProbeSpec& probe) {
  require_same_dim(q.xbar, q.xstar, "eps-subgradient");
  if (!(q.eps >= 0.0)) throw ContractError("eps must be >= 0");
  const ProbeValues pv = sample(q.phi, q.xbar, probe);
  MembershipResult res;
  res.shell_values = shell_minima(pv, q.xstar);
  res.estimate = window_min(res.shell_values, probe.liminf_window);
  res.margin = res.estimate + q.eps;
  res.member = res.margin >= -probe.tol;
  return res;
}

std::size_t ScanRange::count() const {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
    throw ContractError("empty scan range");
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

std::vector<Interval> merge_runs(const std::vector<std::size_t>& indices, const ScanRange& scan) {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < indices.size();) {
    std::size_t j = i;
    while (j + 1 < indices.size() && indices[j + 1] == indices[j] + 1) ++j;
    out.push_back({scan.at(indices[i]), scan.at(indices[j])});
    i = j + 1;
  }
  return out;
}

std::vector<Interval> eps_subdiff_interval_1d(const ScalarField& phi, const Point& xbar, double eps,
                                              const ProbeSpec& probe, const ScanRange& scan) {
  if (xbar.dim() != 1 || phi.dim() != 1) throw DimensionError("eps_subdiff_interval_1d is 1-D only");
  scan.count();
  const auto hull = eps_subdiff_hull_1d(phi, xbar, eps, probe);
  if (!hull) return {};
  const Interval clipped{std::max(hull->lo, scan.lo), std::min(hull->hi, scan.hi)};
  if (clipped.lo > clipped.hi) return {};
  return {clipped};
}

std::optional<Interval> eps_subdiff_hull_1d(const ScalarField& phi, const Point& xbar, double eps,
                                            const ProbeSpec& probe) {
  if (xbar.dim() != 1 || phi.dim() != 1) throw DimensionError("eps_subdiff_hull_1d is 1-D only");
  if (!(eps >= 0.0)) throw ContractError("eps must be >= 0");
  const ProbeValues pv = sample(phi, xbar, probe);
  // Right samples t > 0 need x* <= dphi/t + eps + tol, left ones x* >= -dphi/|t| - eps - tol.
  Interval hull{-kInf, kInf};
  for (std::size_t k = pv.offsets.size() - static_cast<std::size_t>(probe.liminf_window); k < pv.offsets.size(); ++k)
    for (std::size_t j = 0; j < pv.offsets[k].size(); ++j) {
      const double t = pv.offsets[k][j][0];
      const double d = pv.dphi[k][j] / std::fabs(t);
      if (t > 0.0)
        hull.hi = std::min(hull.hi, d + eps + probe.tol);
      else
        hull.lo = std::max(hull.lo, -d - eps - probe.tol);
    }
  if (hull.lo > hull.hi) return std::nullopt;
  return hull;
}

EvaluationVerdict proximal_subgrad_member(const ScalarField& phi, const Point& xbar, const Point& v, double rho,
                                          const GridSpec& grid) {
  require_same_dim(xbar, v, "proximal subgradient");
  if (!(rho >= 0.0)) throw ContractError("rho must be >= 0");
  const double base = base_value(phi, xbar);
  const GridSpec g(Ball(xbar, grid.ball.radius), grid.per_axis, grid.cap);
  const auto n = search_neighborhood(
      g,
      [&](const Point& x) {
        const ExtReal fx = phi.eval(x);
        if (fx.is_infinite()) return kInf;
        const Point d = x - xbar;
        return fx.raw() - base - v.dot(d) + 0.5 * rho * d.dot(d);
      },
      kGridTol);
  return {n.found, n.scan.worst, n.scan.witness, n.radius, n.scan.points};
}

LimitingSample limiting_subdiff_sample_1d(const ScalarField& phi, const Point& xbar, const ProbeSpec& probe,
                                          const LimitingOptions& opts) {
  if (xbar.dim() != 1 || phi.dim() != 1) throw DimensionError("limiting_subdiff_sample_1d is 1-D only");
  if (opts.eps_levels.empty() || opts.points_per_side < 1) throw ContractError("limiting sampler needs levels and points");
  probe.validate();
  const double base = base_value(phi, xbar);
  const ScanRange& scan = opts.scan;
  const std::size_t n = scan.count();

  // accepted[level][i]: scan value i is an eps_level-subgradient at some x_k of that level.
  std::vector<std::vector<char>> accepted(opts.eps_levels.size(), std::vector<char>(n, 0));
  for (std::size_t level = 0; level < opts.eps_levels.size(); ++level) {
    const double eps = opts.eps_levels[level];
    const double outer = probe.r0 * std::ldexp(1.0, -2 * static_cast<int>(level) - 4);
    const double jump_cap = std::sqrt(outer);

    std::vector<Point> xs{xbar};
    for (int j = 0; j < opts.points_per_side; ++j) {
      const double t = outer * (1.0 - 0.5 * (j + 0.5) / opts.points_per_side);
      xs.push_back(Point{xbar[0] - t});
      xs.push_back(Point{xbar[0] + t});
    }
    for (const auto& xk : xs) {
      const ExtReal fk = phi.eval(xk);
      if (fk.is_infinite() || std::fabs(fk.raw() - base) > jump_cap) continue;
      const double dist = std::fabs(xk[0] - xbar[0]);
      ProbeSpec local = probe;
      if (dist > 0.0) {
        local.r0 = std::min(probe.r0, dist / 8.0);
        local.shells = probe.shells + 8;
      }
      const auto hull = eps_subdiff_hull_1d(phi, xk, eps, local);
      if (!hull) continue;
      const double lo = std::max(hull->lo, scan.lo), hi = std::min(hull->hi, scan.hi);
      if (lo > hi) continue;
      const auto first = static_cast<std::size_t>(std::ceil((lo - scan.lo) / scan.step - 1e-9));
      for (std::size_t i = first; i < n && scan.at(i) <= hi; ++i) accepted[level][i] = 1;
    }
  }

  // Keep finest-level values that have accepted neighbours within eps_j at every level j.
  LimitingSample out;
  std::vector<std::size_t> keep;
  const auto& finest = accepted.back();
  for (std::size_t i = 0; i < n; ++i) {
    if (!finest[i]) continue;
    bool persists = true;
    for (std::size_t level = 0; level + 1 < accepted.size() && persists; ++level) {
      const auto reach = static_cast<std::size_t>(std::ceil(opts.eps_levels[level] / scan.step)) + 1;
      const std::size_t a = i >= reach ? i - reach : 0, b = std::min(n - 1, i + reach);
      persists = std::any_of(accepted[level].begin() + static_cast<std::ptrdiff_t>(a),
                             accepted[level].begin() + static_cast<std::ptrdiff_t>(b) + 1, [](char c) { return c != 0; });
    }
    if (persists) keep.push_back(i);
  }
  for (auto i : keep) out.values.push_back(scan.at(i));
  out.clusters = merge_runs(keep, scan);
  return out;
}

double min_eps_factor(const ScalarField& phi, const Point& xbar, const Point& xstar, const ProbeSpec& probe) {
  const auto res = eps_subgrad_member({phi, xbar, xstar, 0.0}, probe);
  if (!std::isfinite(res.estimate)) return res.estimate > 0 ? 0.0 : kInf;
  if (looks_unbounded(res.shell_values, probe.liminf_window)) return kInf;
  return std::max(0.0, -res.estimate);
}

}  // namespace trapkit
