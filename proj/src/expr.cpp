#include "trapkit/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "trapkit/errors.hpp"

namespace trapkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double defined(double v) { return std::isfinite(v) ? v : kNaN; }

std::shared_ptr<Expr> blank() { return std::make_shared<Expr>(); }

struct FnInfo {
  std::string_view name;
  Expr::Fn fn;
  int min_args;
  int max_args;  // -1: unbounded
};

constexpr FnInfo kFunctions[] = {
    {"abs", Expr::Fn::Abs, 1, 1},  {"min", Expr::Fn::Min, 2, -1}, {"max", Expr::Fn::Max, 2, -1},
    {"sqrt", Expr::Fn::Sqrt, 1, 1}, {"sin", Expr::Fn::Sin, 1, 1},  {"cos", Expr::Fn::Cos, 1, 1},
    {"exp", Expr::Fn::Exp, 1, 1},  {"log", Expr::Fn::Log, 1, 1},
};

const FnInfo* find_fn(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return &f;
  return nullptr;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

class Parser {
 public:
  Parser(std::string_view text, int dim, std::size_t base) : s_(text), dim_(dim), base_(base) {}

  ExprPtr parse_all() {
    auto e = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, base_ + pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_expr() {
    auto lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = Expr::binary(Expr::Kind::Add, lhs, parse_term());
      else if (accept('-'))
        lhs = Expr::binary(Expr::Kind::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  ExprPtr parse_term() {
    auto lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = Expr::binary(Expr::Kind::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = Expr::binary(Expr::Kind::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  // Unary minus binds looser than '^': -x1^2 == -(x1^2).
  ExprPtr parse_unary() {
    if (accept('-')) return Expr::neg(parse_unary());
    return parse_power();
  }

  ExprPtr parse_power() {
    auto base = parse_atom();
    if (accept('^')) return Expr::binary(Expr::Kind::Pow, base, parse_unary());
    return base;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  ExprPtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        digits();
      else
        pos_ = save;
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::number(v);
  }

  ExprPtr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '3') {
      const int idx = name[1] - '1';
      if (idx < dim_) return Expr::var(idx);
    }
    const FnInfo* info = find_fn(name);
    if (info == nullptr) throw ParseError("unknown identifier '" + std::string(name) + "'", base_ + start);
    if (!accept('(')) fail("expected '(' after " + std::string(name));
    std::vector<ExprPtr> args;
    args.push_back(parse_expr());
    while (accept(',')) args.push_back(parse_expr());
    if (!accept(')')) fail("expected ')'");
    const int n = static_cast<int>(args.size());
    if (n < info->min_args || (info->max_args >= 0 && n > info->max_args))
      throw ParseError("arity mismatch: " + std::string(name) + " takes " +
                           (info->max_args < 0 ? "at least " + std::to_string(info->min_args)
                                               : std::to_string(info->min_args)) +
                           " argument(s), got " + std::to_string(n),
                       base_ + start);
    return Expr::call(info->fn, std::move(args));
  }

  std::string_view s_;
  int dim_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr Expr::number(double v) {
  auto e = blank();
  e->kind_ = Kind::Number;
  e->value_ = v;
  return e;
}

ExprPtr Expr::var(int index) {
  auto e = blank();
  e->kind_ = Kind::Var;
  e->var_ = index;
  return e;
}

ExprPtr Expr::neg(ExprPtr a) {
  auto e = blank();
  e->kind_ = Kind::Neg;
  e->args_ = {std::move(a)};
  return e;
}

ExprPtr Expr::binary(Kind op, ExprPtr a, ExprPtr b) {
  auto e = blank();
  e->kind_ = op;
  e->args_ = {std::move(a), std::move(b)};
  return e;
}

ExprPtr Expr::call(Fn fn, std::vector<ExprPtr> args) {
  auto e = blank();
  e->kind_ = Kind::Call;
  e->fn_ = fn;
  e->args_ = std::move(args);
  return e;
}

ExprPtr Expr::native(NativeFn fn, std::string name) {
  auto e = blank();
  e->kind_ = Kind::Native;
  e->native_ = std::move(fn);
  e->name_ = std::move(name);
  return e;
}

double Expr::eval(std::span<const double> x) const {
  switch (kind_) {
    case Kind::Number:
      return value_;
    case Kind::Var:
      return static_cast<std::size_t>(var_) < x.size() ? x[static_cast<std::size_t>(var_)] : kNaN;
    case Kind::Neg:
      return -args_[0]->eval(x);
    case Kind::Add:
      return defined(args_[0]->eval(x) + args_[1]->eval(x));
    case Kind::Sub:
      return defined(args_[0]->eval(x) - args_[1]->eval(x));
    case Kind::Mul:
      return defined(args_[0]->eval(x) * args_[1]->eval(x));
    case Kind::Div: {
      const double den = args_[1]->eval(x);
      if (den == 0.0) return kNaN;
      return defined(args_[0]->eval(x) / den);
    }
    case Kind::Pow:
      return defined(std::pow(args_[0]->eval(x), args_[1]->eval(x)));
    case Kind::Native:
      return defined(native_(x));
    case Kind::Call:
      break;
  }
  if (fn_ == Fn::Min || fn_ == Fn::Max) {
    double acc = args_[0]->eval(x);
    for (std::size_t i = 1; i < args_.size(); ++i) {
      const double v = args_[i]->eval(x);
      if (std::isnan(v) || std::isnan(acc)) return kNaN;
      acc = fn_ == Fn::Min ? std::min(acc, v) : std::max(acc, v);
    }
    return acc;
  }
  const double a = args_[0]->eval(x);
  switch (fn_) {
    case Fn::Abs:
      return std::fabs(a);
    case Fn::Sqrt:
      return a < 0.0 ? kNaN : std::sqrt(a);
    case Fn::Sin:
      return defined(std::sin(a));
    case Fn::Cos:
      return defined(std::cos(a));
    case Fn::Exp:
      return defined(std::exp(a));
    case Fn::Log:
      return a <= 0.0 ? kNaN : defined(std::log(a));
    default:
      return kNaN;
  }
}

int Expr::arity() const {
  int n = kind_ == Kind::Var ? var_ + 1 : 0;
  for (const auto& a : args_) n = std::max(n, a->arity());
  return n;
}

bool Expr::has_native() const {
  if (kind_ == Kind::Native) return true;
  return std::any_of(args_.begin(), args_.end(), [](const ExprPtr& a) { return a->has_native(); });
}

std::string Expr::unparse() const {
  switch (kind_) {
    case Kind::Number:
      return value_ < 0.0 ? "(-" + format_number(-value_) + ")" : format_number(value_);
    case Kind::Var:
      return "x" + std::to_string(var_ + 1);
    case Kind::Neg:
      return "(-" + args_[0]->unparse() + ")";
    case Kind::Add:
      return "(" + args_[0]->unparse() + " + " + args_[1]->unparse() + ")";
    case Kind::Sub:
      return "(" + args_[0]->unparse() + " - " + args_[1]->unparse() + ")";
    case Kind::Mul:
      return "(" + args_[0]->unparse() + "*" + args_[1]->unparse() + ")";
    case Kind::Div:
      return "(" + args_[0]->unparse() + "/" + args_[1]->unparse() + ")";
    case Kind::Pow:
      return "(" + args_[0]->unparse() + "^" + args_[1]->unparse() + ")";
    case Kind::Native:
      return name_;
    case Kind::Call:
      break;
  }
  std::string out(fn_name(fn_));
  out += "(";
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i > 0) out += ", ";
    out += args_[i]->unparse();
  }
  return out + ")";
}

std::string_view fn_name(Expr::Fn fn) {
  for (const auto& f : kFunctions)
    if (f.fn == fn) return f.name;
  return "?";
}

ExprPtr parse_expression(std::string_view text, int dim) {
  if (dim < 1 || dim > 3) throw DimensionError("expression dimension must be 1, 2 or 3");
  return Parser(text, dim, 0).parse_all();
}

std::vector<Constraint> parse_predicate(std::string_view text, int dim) {
  if (dim < 1 || dim > 3) throw DimensionError("predicate dimension must be 1, 2 or 3");
  std::vector<Constraint> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t amp = text.find('&', start);
    const std::string_view part = text.substr(start, amp == std::string_view::npos ? amp : amp - start);

    const std::size_t op = part.find_first_of("<>=");
    if (op == std::string_view::npos) throw ParseError("predicate clause needs '<=' or '>='", start);
    const bool closed = op + 1 < part.size() && part[op + 1] == '=' && part[op] != '=';
    if (!closed) throw ParseError("only closed comparisons '<=' and '>=' are allowed", start + op);
    const std::string_view rest = part.substr(op + 2);
    if (rest.find_first_of("<>=") != std::string_view::npos)
      throw ParseError("one comparison per clause", start + op + 2 + rest.find_first_of("<>="));

    auto lhs = Parser(part.substr(0, op), dim, start).parse_all();
    auto rhs = Parser(rest, dim, start + op + 2).parse_all();
    if (part[op] == '<')
      out.push_back({Expr::binary(Expr::Kind::Sub, lhs, rhs)});
    else
      out.push_back({Expr::binary(Expr::Kind::Sub, rhs, lhs)});

    if (amp == std::string_view::npos) break;
    start = amp + 1;
  }
  return out;
}

bool satisfies(const std::vector<Constraint>& constraints, std::span<const double> x) {
  for (const auto& c : constraints) {
    const double v = c.lhs_minus_rhs->eval(x);
    if (std::isnan(v) || v > 0.0) return false;
  }
  return true;
}

}  // namespace trapkit
