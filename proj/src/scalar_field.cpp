#include "trapkit/scalar_field.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

namespace trapkit {

std::string ExtReal::to_string() const {
  if (!is_finite()) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v_);
  return {buf, res.ptr};
}

Point Point::zero(int dim) { return filled(dim, 0.0); }

Point Point::filled(int dim, double v) {
  if (dim < 1 || dim > kMaxDim) throw DimensionError("point dimension must be 1, 2 or 3");
  std::vector<double> c(static_cast<std::size_t>(dim), v);
  return Point(c);
}

double Point::norm() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
  return std::sqrt(s);
}

double Point::dot(const Point& o) const {
  require_same_dim(*this, o, "dot product");
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * o.c_[i];
  return s;
}

Point& Point::operator+=(const Point& o) {
  require_same_dim(*this, o, "point sum");
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  require_same_dim(*this, o, "point difference");
  for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Point& Point::operator*=(double s) {
  for (int i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

bool operator==(const Point& a, const Point& b) {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return true;
}

std::partial_ordering operator<=>(const Point& a, const Point& b) {
  const int n = std::min(a.dim_, b.dim_);
  for (int i = 0; i < n; ++i)
    if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
  return a.dim_ <=> b.dim_;
}

std::string Point::to_string() const {
  std::string out = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i > 0) out += ", ";
    out += ExtReal(c_[i] == 0.0 ? 0.0 : c_[i]).to_string();
  }
  return out + ")";
}

double distance(const Point& a, const Point& b) { return (a - b).norm(); }

void require_same_dim(const Point& a, const Point& b, const char* what) {
  if (a.dim() != b.dim())
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
}

ScalarField::ScalarField(int dim, ExprPtr body, std::vector<Constraint> domain,
                         std::optional<std::vector<ExprPtr>> grad, std::string domain_text)
    : dim_(dim), body_(std::move(body)), domain_(std::move(domain)), grad_(std::move(grad)),
      domain_text_(std::move(domain_text)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw DimensionError("field dimension must be 1, 2 or 3");
  if (body_->arity() > dim_) throw DimensionError("field body references a variable above its dimension");
  if (grad_ && static_cast<int>(grad_->size()) != dim_)
    throw DimensionError("analytic gradient must have exactly dim components");
}

ScalarField ScalarField::native(int dim, NativeFn fn, std::string name) {
  return ScalarField(dim, Expr::native(std::move(fn), std::move(name)));
}

ScalarField ScalarField::constant(int dim, double v) { return ScalarField(dim, Expr::number(v)); }

ExtReal ScalarField::eval(const Point& p) const {
  if (p.dim() != dim_)
    throw DimensionError("field of dimension " + std::to_string(dim_) + " evaluated at a point of dimension " +
                         std::to_string(p.dim()));
  const auto x = p.coords();
  if (!domain_.empty() && !satisfies(domain_, x)) return ExtReal::infinity();
  return ExtReal(body_->eval(x));
}

ScalarField ScalarField::with_body(ExprPtr body, std::optional<std::vector<ExprPtr>> grad) const {
  return ScalarField(dim_, std::move(body), domain_, std::move(grad), domain_text_);
}

ScalarField parse_field(std::string_view text, int dim) { return parse_field(text, dim, {}, {}); }

ScalarField parse_field(std::string_view text, int dim, std::string_view domain,
                        const std::vector<std::string>& grad) {
  auto body = parse_expression(text, dim);
  std::vector<Constraint> dom;
  if (!domain.empty()) dom = parse_predicate(domain, dim);
  std::optional<std::vector<ExprPtr>> g;
  if (!grad.empty()) {
    if (static_cast<int>(grad.size()) != dim)
      throw DimensionError("analytic gradient must have exactly dim components");
    g.emplace();
    for (const auto& t : grad) g->push_back(parse_expression(t, dim));
  }
  return ScalarField(dim, std::move(body), std::move(dom), std::move(g), std::string(domain));
}

ExtReal eval_field(const ScalarField& f, const Point& p) { return f.eval(p); }

Point fd_gradient(const ScalarField& f, const Point& p, double h) {
  if (!(h > 0.0)) throw ContractError("finite-difference step must be positive");
  if (p.dim() != f.dim()) throw DimensionError("gradient: dimension mismatch");
  Point g = Point::zero(f.dim());
  for (int i = 0; i < f.dim(); ++i) {
    Point fwd = p, bwd = p;
    fwd[i] += h;
    bwd[i] -= h;
    const ExtReal a = f.eval(fwd), b = f.eval(bwd);
    if (a.is_infinite() || b.is_infinite())
      throw DomainError("gradient: field is +inf inside the finite-difference stencil at " + p.to_string());
    g[i] = (a.raw() - b.raw()) / (2.0 * h);
  }
  return g;
}

Point gradient(const ScalarField& f, const Point& p, double h) {
  if (!f.has_analytic_grad()) return fd_gradient(f, p, h);
  if (p.dim() != f.dim()) throw DimensionError("gradient: dimension mismatch");
  if (f.eval(p).is_infinite()) throw DomainError("gradient: field is +inf at " + p.to_string());
  Point g = Point::zero(f.dim());
  const auto x = p.coords();
  for (int i = 0; i < f.dim(); ++i) {
    const double v = (*f.analytic_grad())[static_cast<std::size_t>(i)]->eval(x);
    if (!std::isfinite(v)) throw DomainError("gradient: analytic gradient undefined at " + p.to_string());
    g[i] = v;
  }
  return g;
}

}  // namespace trapkit
