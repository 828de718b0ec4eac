#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>

#include "trapkit/errors.hpp"

namespace trapkit {

/// A value in (-inf, +inf]. NaN and -inf collapse to +inf on construction,
/// which is how undefined arithmetic is represented throughout the toolkit.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double v) : v_(std::isfinite(v) ? v : std::numeric_limits<double>::infinity()) {}  // NOLINT

  static ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_infinite() const { return !is_finite(); }

  /// Raw double; +inf when infinite.
  double raw() const { return v_; }

  /// Finite value or DomainError.
  double value() const {
    if (!is_finite()) throw DomainError("extended real is +inf where a finite value is required");
    return v_;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.v_ + b.v_); }
  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend std::partial_ordering operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

  std::string to_string() const;

 private:
  double v_ = 0.0;
};

}  // namespace trapkit
