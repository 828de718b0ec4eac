#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trapkit {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Callable used by native leaves; receives the coordinates, returns a double
/// (NaN or inf mean "undefined").
using NativeFn = std::function<double(std::span<const double>)>;

/// Immutable expression tree over variables x1..x3.
///
/// Evaluation never throws: division by zero, sqrt/log of a negative number
/// and overflow produce NaN internally, which propagates to the root.
class Expr {
 public:
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call, Native };
  enum class Fn { Abs, Min, Max, Sqrt, Sin, Cos, Exp, Log };

  static ExprPtr number(double v);
  static ExprPtr var(int index);  // 0-based: x1 is var(0)
  static ExprPtr neg(ExprPtr a);
  static ExprPtr binary(Kind op, ExprPtr a, ExprPtr b);
  static ExprPtr call(Fn fn, std::vector<ExprPtr> args);
  static ExprPtr native(NativeFn fn, std::string name);

  Kind kind() const { return kind_; }
  double number_value() const { return value_; }
  int var_index() const { return var_; }
  Fn fn() const { return fn_; }
  const std::vector<ExprPtr>& args() const { return args_; }

  /// Evaluates with NaN as the "undefined" marker; never returns +-inf.
  double eval(std::span<const double> x) const;

  /// Highest variable index referenced plus one (0 for constants).
  int arity() const;

  /// Fully parenthesised text that parses back to an equivalent tree.
  /// Native leaves print their name and do not round-trip.
  std::string unparse() const;

  bool has_native() const;

 private:
  Kind kind_ = Kind::Number;
  double value_ = 0.0;
  int var_ = 0;
  Fn fn_ = Fn::Abs;
  std::vector<ExprPtr> args_;
  NativeFn native_;
  std::string name_;
};

std::string_view fn_name(Expr::Fn fn);

/// Parses `text` under the expression grammar. Variables above `dim` are
/// rejected as unknown identifiers. Throws ParseError.
ExprPtr parse_expression(std::string_view text, int dim);

/// One closed comparison `lhs <= rhs` (or `>=`), stored as lhs - rhs <= 0.
struct Constraint {
  ExprPtr lhs_minus_rhs;
};

/// Parses a conjunction of closed comparisons joined by `&`. Strict
/// comparisons (`<`, `>`) and equalities are rejected.
std::vector<Constraint> parse_predicate(std::string_view text, int dim);

bool satisfies(const std::vector<Constraint>& constraints, std::span<const double> x);

}  // namespace trapkit
