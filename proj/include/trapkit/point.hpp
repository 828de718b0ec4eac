#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "trapkit/errors.hpp"

namespace trapkit {

inline constexpr int kMaxDim = 3;

/// A point (or dual vector) of R^n, n in {1,2,3}, with finite coordinates.
/// Rates of change x* share this type since X* = X here.
class Point {
 public:
  Point() = default;
  Point(std::initializer_list<double> coords) { assign(coords.begin(), coords.end()); }
  explicit Point(std::span<const double> coords) { assign(coords.begin(), coords.end()); }
  explicit Point(const std::vector<double>& coords) { assign(coords.begin(), coords.end()); }

  static Point zero(int dim);
  static Point filled(int dim, double v);

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }
  std::vector<double> to_vector() const { return {c_.begin(), c_.begin() + dim_}; }

  double norm() const;
  double dot(const Point& o) const;

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double s);

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator-(Point a) { return a *= -1.0; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend Point operator*(Point a, double s) { return a *= s; }

  /// Exact equality of dimension and coordinates.
  friend bool operator==(const Point& a, const Point& b);
  /// Lexicographic order on coordinates; the tie-break rule for every argmin.
  friend std::partial_ordering operator<=>(const Point& a, const Point& b);

  std::string to_string() const;

 private:
  template <class It>
  void assign(It first, It last) {
    const auto n = std::distance(first, last);
    if (n < 1 || n > kMaxDim) throw DimensionError("point dimension must be 1, 2 or 3");
    dim_ = static_cast<int>(n);
    std::size_t i = 0;
    for (; first != last; ++first, ++i) {
      if (!std::isfinite(*first)) throw DomainError("point coordinates must be finite");
      c_[i] = *first;
    }
  }

  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

double distance(const Point& a, const Point& b);

/// Throws DimensionError unless both have the same dimension.
void require_same_dim(const Point& a, const Point& b, const char* what);

}  // namespace trapkit
