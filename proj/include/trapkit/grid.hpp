#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "trapkit/point.hpp"

namespace trapkit {

/// Closed Euclidean ball; the concrete neighborhood V(x) of every check.
struct Ball {
  Point center;
  double radius = 1.0;

  Ball() = default;
  Ball(Point c, double r);

  int dim() const { return center.dim(); }
  bool contains(const Point& p) const;
  Ball with_radius(double r) const { return Ball(center, r); }
};

inline constexpr std::size_t kDefaultGridCap = 1'000'000;

/// Uniform tensor grid over the bounding box of `ball`, filtered to the ball.
struct GridSpec {
  Ball ball;
  int per_axis = 21;
  std::size_t cap = kDefaultGridCap;

  GridSpec() = default;
  GridSpec(Ball b, int n, std::size_t max_points = kDefaultGridCap);

  /// Spacing between neighbouring samples along an axis.
  double step() const { return 2.0 * ball.radius / (per_axis - 1); }
  GridSpec with_radius(double r) const { return GridSpec(ball.with_radius(r), per_axis, cap); }
};

/// Grid points in lexicographic order. With odd `per_axis` the center is a
/// grid point and its coordinates are reproduced exactly.
std::vector<Point> grid_points(const GridSpec& grid);

/// Result of a scan that looks for the smallest value of a margin function.
struct ScanResult {
  double worst = 0.0;            // min margin (+inf when no point was scanned)
  std::optional<Point> witness;  // lexicographically least argmin
  std::size_t points = 0;
};

/// Minimum of `margin` over `pts`. Ties keep the first (lexicographically
/// least, since grid_points is sorted) point.
ScanResult scan_min(const std::vector<Point>& pts, const std::function<double(const Point&)>& margin);

inline constexpr int kMaxHalvings = 10;

/// Outcome of the "there is a neighborhood" search.
struct NeighborhoodResult {
  bool found = false;
  double radius = 0.0;  // largest passing radius, or the last radius tried
  ScanResult scan;      // scan at `radius`
};

/// Tries radii r, r/2, ..., r/2^max_halvings (same per_axis) and stops at the
/// first one whose scan has worst >= -tol.
NeighborhoodResult search_neighborhood(const GridSpec& grid, const std::function<double(const Point&)>& margin,
                                       double tol, int max_halvings = kMaxHalvings);

}  // namespace trapkit
