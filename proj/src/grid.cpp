#include "trapkit/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "trapkit/errors.hpp"

namespace trapkit {

Ball::Ball(Point c, double r) : center(std::move(c)), radius(r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ContractError("ball radius must be positive and finite");
}

bool Ball::contains(const Point& p) const { return distance(p, center) <= radius * (1.0 + 1e-12); }

GridSpec::GridSpec(Ball b, int n, std::size_t max_points) : ball(std::move(b)), per_axis(n), cap(max_points) {
  if (per_axis < 3) throw ContractError("grid needs at least 3 samples per axis");
  double total = std::pow(static_cast<double>(per_axis), ball.dim());
  if (total > static_cast<double>(cap))
    throw ContractError("grid of " + std::to_string(per_axis) + "^" + std::to_string(ball.dim()) +
                        " points exceeds the cap of " + std::to_string(cap));
}

std::vector<Point> grid_points(const GridSpec& grid) {
  const int n = grid.ball.dim();
  const int m = grid.per_axis;
  const double r = grid.ball.radius;
  std::vector<double> offsets(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) offsets[static_cast<std::size_t>(i)] = r * (2.0 * i - (m - 1)) / (m - 1);

  std::vector<Point> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Point p = grid.ball.center;
    double d2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double o = offsets[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
      p[k] += o;
      d2 += o * o;
    }
    if (d2 <= r * r * (1.0 + 1e-12)) out.push_back(p);
    int k = n - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == m) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return out;
}

ScanResult scan_min(const std::vector<Point>& pts, const std::function<double(const Point&)>& margin) {
  ScanResult res;
  res.worst = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    const double v = margin(p);
    ++res.points;
    if (v < res.worst || (!res.witness && v == res.worst)) {
      res.worst = v;
      res.witness = p;
    }
  }
  return res;
}

NeighborhoodResult search_neighborhood(const GridSpec& grid, const std::function<double(const Point&)>& margin,
                                       double tol, int max_halvings) {
  NeighborhoodResult res;
  double r = grid.ball.radius;
  for (int k = 0; k <= max_halvings; ++k, r *= 0.5) {
    res.radius = r;
    res.scan = scan_min(grid_points(grid.with_radius(r)), margin);
    if (res.scan.worst >= -tol) {
      res.found = true;
      return res;
    }
  }
  return res;
}

}  // namespace trapkit
