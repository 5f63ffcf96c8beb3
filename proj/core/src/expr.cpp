#include "snmgeo/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace snmgeo {

namespace {

constexpr std::array<std::string_view, 10> kFunNames = {
    "exp", "log", "sin", "cos", "tan", "asin", "atan", "atanh", "tanh", "sqrt"};

bool lookup_fun(std::string_view name, FunId& out) {
  for (std::size_t i = 0; i < kFunNames.size(); ++i) {
    if (kFunNames[i] == name) {
      out = static_cast<FunId>(i);
      return true;
    }
  }
  return false;
}

// Shortest round-trip decimal form.
std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view fun_name(FunId id) { return kFunNames[static_cast<int>(id)]; }

Expr::Expr() { root_ = add_node({Kind::Num, FunId::Exp, 0.0, 0, 0}); }

std::uint32_t Expr::add_node(Node n) {
  nodes_.push_back(n);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::uint32_t Expr::append_subtree(Expr& dst, const Expr& src) {
  const std::uint32_t shift = static_cast<std::uint32_t>(dst.nodes_.size());
  for (const Node& n : src.nodes_) {
    Node copy = n;
    switch (copy.kind) {
      case Kind::Add:
      case Kind::Sub:
      case Kind::Mul:
      case Kind::Div:
        copy.a += shift;
        copy.b += shift;
        break;
      case Kind::Neg:
      case Kind::Pow:
      case Kind::Fun:
        copy.a += shift;
        break;
      case Kind::Num:
      case Kind::Var:
        break;
    }
    dst.nodes_.push_back(copy);
  }
  return src.root_ + shift;
}

Expr Expr::binary(Kind kind, Expr a, const Expr& b) {
  // Keep the variable name of the side that actually mentions it, so
  // combinations like number(c) * variable("y") print correctly.
  if (!a.node_contains_var(a.root_) && b.node_contains_var(b.root_))
    a.var_ = b.var_;
  const std::uint32_t rb = append_subtree(a, b);
  a.root_ = a.add_node({kind, FunId::Exp, 0.0, a.root_, rb});
  return a;
}

Expr Expr::number(double value) {
  if (!std::isfinite(value)) throw ConstraintError("expression literal must be finite");
  Expr e;
  e.nodes_.clear();
  if (value < 0.0 || (value == 0.0 && std::signbit(value))) {
    std::uint32_t inner = e.add_node({Kind::Num, FunId::Exp, -value, 0, 0});
    e.root_ = e.add_node({Kind::Neg, FunId::Exp, 0.0, inner, 0});
  } else {
    e.root_ = e.add_node({Kind::Num, FunId::Exp, value, 0, 0});
  }
  return e;
}

Expr Expr::variable(std::string_view name) {
  Expr e;
  e.nodes_.clear();
  e.root_ = e.add_node({Kind::Var, FunId::Exp, 0.0, 0, 0});
  e.var_ = std::string(name);
  return e;
}

Expr Expr::pow(Expr base, double exponent) {
  if (!std::isfinite(exponent)) throw ConstraintError("exponent must be finite");
  base.root_ = base.add_node({Kind::Pow, FunId::Exp, exponent, base.root_, 0});
  return base;
}

Expr Expr::apply(FunId fun, Expr argument) {
  argument.root_ = argument.add_node({Kind::Fun, fun, 0.0, argument.root_, 0});
  return argument;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(Expr::Kind::Add, std::move(a), b); }
Expr operator-(Expr a, Expr b) { return Expr::binary(Expr::Kind::Sub, std::move(a), b); }
Expr operator*(Expr a, Expr b) { return Expr::binary(Expr::Kind::Mul, std::move(a), b); }
Expr operator/(Expr a, Expr b) { return Expr::binary(Expr::Kind::Div, std::move(a), b); }

Expr operator-(Expr a) {
  a.root_ = a.add_node({Expr::Kind::Neg, FunId::Exp, 0.0, a.root_, 0});
  return a;
}

Expr Expr::substitute(const Expr& outer, const Expr& inner) {
  Expr result = inner;  // keep inner's variable name
  // Copy outer's tree, but redirect Var nodes to inner's root.
  const std::uint32_t inner_root = result.root_;
  const std::uint32_t shift = static_cast<std::uint32_t>(result.nodes_.size());
  std::vector<std::uint32_t> remap(outer.nodes_.size());
  for (std::size_t i = 0; i < outer.nodes_.size(); ++i) {
    Node copy = outer.nodes_[i];
    if (copy.kind == Kind::Var) {
      remap[i] = inner_root;
      continue;
    }
    switch (copy.kind) {
      case Kind::Add:
      case Kind::Sub:
      case Kind::Mul:
      case Kind::Div:
        copy.a = remap[copy.a];
        copy.b = remap[copy.b];
        break;
      case Kind::Neg:
      case Kind::Pow:
      case Kind::Fun:
        copy.a = remap[copy.a];
        break;
      case Kind::Num:
      case Kind::Var:
        break;
    }
    result.nodes_.push_back(copy);
    remap[i] = static_cast<std::uint32_t>(result.nodes_.size() - 1);
  }
  (void)shift;
  result.root_ = remap[outer.root_];
  return result;
}

// --- parser ----------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, std::string_view var) : text_(text), var_(var) {
    expr_.nodes_.clear();
    expr_.var_ = std::string(var);
  }

  Expr run() {
    std::uint32_t root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    expr_.root_ = root;
    return std::move(expr_);
  }

 private:
  std::string_view text_;
  std::string_view var_;
  std::size_t pos_ = 0;
  Expr expr_;

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::uint32_t parse_expr() {
    std::uint32_t lhs = parse_term();
    for (;;) {
      char c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        std::uint32_t rhs = parse_term();
        lhs = expr_.add_node({c == '+' ? Expr::Kind::Add : Expr::Kind::Sub,
                              FunId::Exp, 0.0, lhs, rhs});
      } else {
        return lhs;
      }
    }
  }

  std::uint32_t parse_term() {
    std::uint32_t lhs = parse_factor();
    for (;;) {
      char c = peek();
      if (c == '*' || c == '/') {
        ++pos_;
        std::uint32_t rhs = parse_factor();
        lhs = expr_.add_node({c == '*' ? Expr::Kind::Mul : Expr::Kind::Div,
                              FunId::Exp, 0.0, lhs, rhs});
      } else {
        return lhs;
      }
    }
  }

  std::uint32_t parse_factor() {
    bool negate = false;
    if (peek() == '-') {
      ++pos_;
      negate = true;
    }
    std::uint32_t node = parse_base();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      const std::size_t expo_off = pos_;
      const std::uint32_t expo = parse_factor();  // right-associative
      if (expr_.node_contains_var(expo))
        throw ParseError("exponent must be a constant expression", expo_off);
      double value;
      try {
        value = expr_.eval_node_value(expo, 0.0);
      } catch (const DomainError&) {
        throw ParseError("exponent is not a finite constant", expo_off);
      }
      if (!std::isfinite(value))
        throw ParseError("exponent is not a finite constant", expo_off);
      node = expr_.add_node({Expr::Kind::Pow, FunId::Exp, value, node, 0});
    }
    if (negate) node = expr_.add_node({Expr::Kind::Neg, FunId::Exp, 0.0, node, 0});
    return node;
  }

  std::uint32_t parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      std::uint32_t inner = parse_expr();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::uint32_t parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // not an exponent suffix
      }
    }
    const std::string tok(text_.substr(start, pos_ - start));
    if (tok == ".") throw ParseError("malformed number", start);
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || errno == ERANGE || !std::isfinite(value))
      throw ParseError("malformed number", start);
    return expr_.add_node({Expr::Kind::Num, FunId::Exp, value, 0, 0});
  }

  std::uint32_t parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == var_)
      return expr_.add_node({Expr::Kind::Var, FunId::Exp, 0.0, 0, 0});
    FunId fun;
    if (lookup_fun(name, fun)) {
      if (!consume('(')) throw ParseError("expected '(' after function name", pos_);
      std::uint32_t arg = parse_expr();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return expr_.add_node({Expr::Kind::Fun, fun, 0.0, arg, 0});
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }
};

Expr Expr::parse(std::string_view text, std::string_view var) {
  return Parser(text, var).run();
}

// --- evaluation -------------------------------------------------------------

Jet3 Expr::eval_node(std::uint32_t idx, const Jet3& x) const {
  const Node& n = nodes_[idx];
  switch (n.kind) {
    case Kind::Num:
      return Jet3::constant(n.num);
    case Kind::Var:
      return x;
    case Kind::Add:
      return eval_node(n.a, x) + eval_node(n.b, x);
    case Kind::Sub:
      return eval_node(n.a, x) - eval_node(n.b, x);
    case Kind::Mul:
      return eval_node(n.a, x) * eval_node(n.b, x);
    case Kind::Div: {
      Jet3 num = eval_node(n.a, x);
      Jet3 den = eval_node(n.b, x);
      if (den.v0 == 0.0) throw DomainError("division by zero");
      return num / den;
    }
    case Kind::Neg:
      return -eval_node(n.a, x);
    case Kind::Pow: {
      Jet3 base = eval_node(n.a, x);
      const double r = n.num;
      if (r == std::nearbyint(r) && std::abs(r) <= 1024.0)
        return pow_int(base, static_cast<long>(r));
      if (base.v0 <= 0.0)
        throw DomainError("non-integer power requires a positive base");
      return snmgeo::pow(base, r);
    }
    case Kind::Fun: {
      Jet3 arg = eval_node(n.a, x);
      switch (n.fun) {
        case FunId::Exp:
          return exp(arg);
        case FunId::Log:
          if (arg.v0 <= 0.0) throw DomainError("log of a non-positive value");
          return log(arg);
        case FunId::Sin:
          return sin(arg);
        case FunId::Cos:
          return cos(arg);
        case FunId::Tan:
          return tan(arg);
        case FunId::Asin:
          if (!(arg.v0 > -1.0 && arg.v0 < 1.0))
            throw DomainError("asin argument outside (-1,1)");
          return asin(arg);
        case FunId::Atan:
          return atan(arg);
        case FunId::Atanh:
          if (!(arg.v0 > -1.0 && arg.v0 < 1.0))
            throw DomainError("atanh argument outside (-1,1)");
          return atanh(arg);
        case FunId::Tanh:
          return tanh(arg);
        case FunId::Sqrt:
          if (arg.v0 <= 0.0) throw DomainError("sqrt requires a positive argument");
          return sqrt(arg);
      }
      throw DomainError("unreachable function id");
    }
  }
  throw DomainError("unreachable node kind");
}

double Expr::eval_node_value(std::uint32_t idx, double x) const {
  const Node& n = nodes_[idx];
  switch (n.kind) {
    case Kind::Num:
      return n.num;
    case Kind::Var:
      return x;
    case Kind::Add:
      return eval_node_value(n.a, x) + eval_node_value(n.b, x);
    case Kind::Sub:
      return eval_node_value(n.a, x) - eval_node_value(n.b, x);
    case Kind::Mul:
      return eval_node_value(n.a, x) * eval_node_value(n.b, x);
    case Kind::Div: {
      const double num = eval_node_value(n.a, x);
      const double den = eval_node_value(n.b, x);
      if (den == 0.0) throw DomainError("division by zero");
      return num / den;
    }
    case Kind::Neg:
      return -eval_node_value(n.a, x);
    case Kind::Pow: {
      const double base = eval_node_value(n.a, x);
      const double r = n.num;
      if (r == std::nearbyint(r) && std::abs(r) <= 1024.0) {
        double result = 1.0, b = base;
        long e = static_cast<long>(std::abs(r));
        while (e > 0) {
          if (e & 1) result *= b;
          b *= b;
          e >>= 1;
        }
        return r < 0.0 ? 1.0 / result : result;
      }
      if (base <= 0.0)
        throw DomainError("non-integer power requires a positive base");
      return std::pow(base, r);
    }
    case Kind::Fun: {
      const double a = eval_node_value(n.a, x);
      switch (n.fun) {
        case FunId::Exp:
          return std::exp(a);
        case FunId::Log:
          if (a <= 0.0) throw DomainError("log of a non-positive value");
          return std::log(a);
        case FunId::Sin:
          return std::sin(a);
        case FunId::Cos:
          return std::cos(a);
        case FunId::Tan:
          return std::tan(a);
        case FunId::Asin:
          if (!(a > -1.0 && a < 1.0))
            throw DomainError("asin argument outside (-1,1)");
          return std::asin(a);
        case FunId::Atan:
          return std::atan(a);
        case FunId::Atanh:
          if (!(a > -1.0 && a < 1.0))
            throw DomainError("atanh argument outside (-1,1)");
          return std::atanh(a);
        case FunId::Tanh:
          return std::tanh(a);
        case FunId::Sqrt:
          if (a <= 0.0) throw DomainError("sqrt requires a positive argument");
          return std::sqrt(a);
      }
      throw DomainError("unreachable function id");
    }
  }
  throw DomainError("unreachable node kind");
}

Jet3 Expr::eval_jet(double x) const {
  Jet3 result = eval_node(root_, Jet3::variable(x));
  if (!result.finite()) throw DomainError("non-finite jet result");
  return result;
}

double Expr::eval(double x) const {
  const double v = eval_node_value(root_, x);
  if (!std::isfinite(v)) throw DomainError("non-finite result");
  return v;
}

bool Expr::node_contains_var(std::uint32_t idx) const {
  const Node& n = nodes_[idx];
  switch (n.kind) {
    case Kind::Var:
      return true;
    case Kind::Num:
      return false;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
      return node_contains_var(n.a) || node_contains_var(n.b);
    case Kind::Neg:
    case Kind::Pow:
    case Kind::Fun:
      return node_contains_var(n.a);
  }
  return false;
}

bool Expr::contains_variable() const { return node_contains_var(root_); }

Expr Expr::with_variable(std::string_view name) const {
  Expr copy = *this;
  copy.var_ = std::string(name);
  return copy;
}

// --- printing ---------------------------------------------------------------
// Levels: Add/Sub 0, Mul/Div 1, Neg 2, Pow 3, atoms 4. A child is printed
// in parentheses when its level is below what its position requires, so
// the printer is precedence-exact and parse(to_string()) rebuilds the
// identical tree.

void Expr::print_node(std::uint32_t idx, int min_level, std::string& out) const {
  const Node& n = nodes_[idx];
  int level;
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub:
      level = 0;
      break;
    case Kind::Mul:
    case Kind::Div:
      level = 1;
      break;
    case Kind::Neg:
      level = 2;
      break;
    case Kind::Pow:
      level = 3;
      break;
    default:
      level = 4;
      break;
  }
  const bool parens = level < min_level;
  if (parens) out += '(';
  switch (n.kind) {
    case Kind::Num:
      out += format_double(n.num);
      break;
    case Kind::Var:
      out += var_;
      break;
    case Kind::Add:
      print_node(n.a, 0, out);
      out += '+';
      print_node(n.b, 1, out);
      break;
    case Kind::Sub:
      print_node(n.a, 0, out);
      out += '-';
      print_node(n.b, 1, out);
      break;
    case Kind::Mul:
      print_node(n.a, 1, out);
      out += '*';
      print_node(n.b, 2, out);
      break;
    case Kind::Div:
      print_node(n.a, 1, out);
      out += '/';
      print_node(n.b, 2, out);
      break;
    case Kind::Neg:
      out += '-';
      print_node(n.a, 3, out);
      break;
    case Kind::Pow:
      print_node(n.a, 4, out);
      out += '^';
      out += format_double(n.num);
      break;
    case Kind::Fun:
      out += fun_name(n.fun);
      out += '(';
      print_node(n.a, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

std::string Expr::to_string() const {
  std::string out;
  print_node(root_, 0, out);
  return out;
}

// --- structure --------------------------------------------------------------

bool Expr::nodes_equal(const Expr& ea, std::uint32_t ia, const Expr& eb,
                       std::uint32_t ib) {
  const Node& a = ea.nodes_[ia];
  const Node& b = eb.nodes_[ib];
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Num:
      return a.num == b.num;
    case Kind::Var:
      return true;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
      return nodes_equal(ea, a.a, eb, b.a) && nodes_equal(ea, a.b, eb, b.b);
    case Kind::Neg:
      return nodes_equal(ea, a.a, eb, b.a);
    case Kind::Pow:
      return a.num == b.num && nodes_equal(ea, a.a, eb, b.a);
    case Kind::Fun:
      return a.fun == b.fun && nodes_equal(ea, a.a, eb, b.a);
  }
  return false;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  return Expr::nodes_equal(a, a.root_, b, b.root_);
}

// --- finite-difference cross-check -------------------------------------------

FdDerivatives eval_jet_fd_check(const Expr& e, double x, double h) {
  auto sample = [&](double step, double out[7]) {
    for (int i = -3; i <= 3; ++i) out[i + 3] = e.eval(x + i * step);
  };
  double f[7];
  sample(h, f);
  FdDerivatives r;
  r.d1 = (-f[0] + 9.0 * f[1] - 45.0 * f[2] + 45.0 * f[4] - 9.0 * f[5] + f[6]) /
         (60.0 * h);
  r.d2 = (2.0 * f[0] - 27.0 * f[1] + 270.0 * f[2] - 490.0 * f[3] +
          270.0 * f[4] - 27.0 * f[5] + 2.0 * f[6]) /
         (180.0 * h * h);
  const double h3 = 10.0 * h;
  double g[7];
  sample(h3, g);
  r.d3 = (g[0] / 8.0 - g[1] + 13.0 * g[2] / 8.0 - 13.0 * g[4] / 8.0 + g[5] -
          g[6] / 8.0) /
         (h3 * h3 * h3);
  return r;
}

}  // namespace snmgeo
