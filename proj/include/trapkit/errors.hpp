#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trapkit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or predicate text. `position` is a 0-based offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Arguments of incompatible dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A payoff, cost rate or set membership was not finite where it must be.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A precondition on parameters was violated (negative weight, xi <= eps, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace trapkit
