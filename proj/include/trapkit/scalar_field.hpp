#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trapkit/expr.hpp"
#include "trapkit/ext_real.hpp"
#include "trapkit/point.hpp"

namespace trapkit {

inline constexpr double kDefaultFdStep = 1e-5;

/// Extended-real-valued payoff on R^n, n <= 3: an expression body, an
/// optional closed domain predicate (outside it the value is +inf) and an
/// optional analytic gradient.
class ScalarField {
 public:
  ScalarField(int dim, ExprPtr body, std::vector<Constraint> domain = {},
              std::optional<std::vector<ExprPtr>> grad = std::nullopt, std::string domain_text = {});

  /// Field backed by a C++ callable. Not round-trippable through text.
  static ScalarField native(int dim, NativeFn fn, std::string name = "native");
  static ScalarField constant(int dim, double v);

  int dim() const { return dim_; }
  const ExprPtr& body() const { return body_; }
  const std::vector<Constraint>& domain() const { return domain_; }
  const std::string& domain_text() const { return domain_text_; }
  const std::optional<std::vector<ExprPtr>>& analytic_grad() const { return grad_; }
  bool has_analytic_grad() const { return grad_.has_value(); }

  /// Value at p; +inf outside the domain or where arithmetic is undefined.
  ExtReal eval(const Point& p) const;
  ExtReal operator()(const Point& p) const { return eval(p); }

  /// Body text; empty domain/grad are omitted.
  std::string unparse() const { return body_->unparse(); }

  /// Copy with the body replaced (domain kept, gradient dropped unless given).
  ScalarField with_body(ExprPtr body, std::optional<std::vector<ExprPtr>> grad = std::nullopt) const;

 private:
  int dim_;
  ExprPtr body_;
  std::vector<Constraint> domain_;
  std::optional<std::vector<ExprPtr>> grad_;
  std::string domain_text_;
};

/// Parses a field body. Throws ParseError / DimensionError.
ScalarField parse_field(std::string_view text, int dim);

/// Parses a field with optional domain predicate and analytic gradient texts.
ScalarField parse_field(std::string_view text, int dim, std::string_view domain,
                        const std::vector<std::string>& grad);

/// Same as f.eval(p) after a dimension check.
ExtReal eval_field(const ScalarField& f, const Point& p);

/// Analytic gradient when present, otherwise central differences with step h.
/// Throws DomainError if any value used is +inf.
Point gradient(const ScalarField& f, const Point& p, double h = kDefaultFdStep);

/// Central-difference gradient regardless of any analytic gradient.
Point fd_gradient(const ScalarField& f, const Point& p, double h = kDefaultFdStep);

}  // namespace trapkit
