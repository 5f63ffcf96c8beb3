#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "snmgeo/errors.hpp"
#include "snmgeo/jet.hpp"

namespace snmgeo {

enum class FunId : std::uint8_t {
  Exp, Log, Sin, Cos, Tan, Asin, Atan, Atanh, Tanh, Sqrt
};

std::string_view fun_name(FunId id);

// Closed-form expression of one variable, evaluated as written (no
// simplification).  Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ['-'] base ['^' factor]
//   base   := number | var | ident '(' expr ')' | '(' expr ')'
// '^' is right-associative and binds tighter than unary minus.  The
// exponent must be a constant expression; it is evaluated at parse time
// and stored as a real (integer exponents are later dispatched to
// repeated multiplication, non-integer exponents require a positive base).
class Expr {
 public:
  Expr();  // the literal 0

  // Throws ParseError with a byte offset on syntax errors and unknown
  // identifiers. `var` is the accepted variable name ("x" by default).
  static Expr parse(std::string_view text, std::string_view var = "x");

  // Programmatic constructors. Negative literals are normalised to a
  // unary minus over a non-negative literal so printing round-trips.
  static Expr number(double value);
  static Expr variable(std::string_view name = "x");
  static Expr pow(Expr base, double exponent);
  static Expr apply(FunId fun, Expr argument);

  friend Expr operator+(Expr a, Expr b);
  friend Expr operator-(Expr a, Expr b);
  friend Expr operator*(Expr a, Expr b);
  friend Expr operator/(Expr a, Expr b);
  friend Expr operator-(Expr a);

  // Value plus derivatives up to order 3 at x, by jet propagation.
  // Throws DomainError for arguments outside a function's real domain
  // (log of a non-positive value, asin outside (-1,1), non-integer power
  // of a non-positive base, division by zero) or on non-finite results.
  Jet3 eval_jet(double x) const;

  // Value only; same domain checks, cheaper.
  double eval(double x) const;

  std::string to_string() const;

  bool contains_variable() const;
  const std::string& variable_name() const { return var_; }
  // Rename the formal variable (the AST is unchanged).
  Expr with_variable(std::string_view name) const;

  // Replace every occurrence of the variable in `outer` by `inner`.
  static Expr substitute(const Expr& outer, const Expr& inner);

  friend bool structurally_equal(const Expr& a, const Expr& b);

 private:
  enum class Kind : std::uint8_t { Num, Var, Add, Sub, Mul, Div, Neg, Pow, Fun };

  struct Node {
    Kind kind;
    FunId fun = FunId::Exp;  // Fun only
    double num = 0.0;        // Num value or Pow exponent
    std::uint32_t a = 0;     // left child / operand
    std::uint32_t b = 0;     // right child
  };

  std::vector<Node> nodes_;
  std::uint32_t root_ = 0;
  std::string var_ = "x";

  std::uint32_t add_node(Node n);
  // Appends src's node pool onto dst's and returns src's shifted root.
  static std::uint32_t append_subtree(Expr& dst, const Expr& src);
  static Expr binary(Kind kind, Expr a, const Expr& b);
  static bool nodes_equal(const Expr& a, std::uint32_t ia, const Expr& b,
                          std::uint32_t ib);
  Jet3 eval_node(std::uint32_t idx, const Jet3& x) const;
  double eval_node_value(std::uint32_t idx, double x) const;
  void print_node(std::uint32_t idx, int min_level, std::string& out) const;
  bool node_contains_var(std::uint32_t idx) const;

  friend class Parser;
};

// Expose the value-level result of parsing as the spec's operation name.
inline Expr parse_expression(std::string_view text, std::string_view var = "x") {
  return Expr::parse(text, var);
}

struct FdDerivatives {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

// Central-difference estimates of e', e'', e''' at x on the 7-point
// stencil, for cross-validation of eval_jet.  Orders 1-2 use step h;
// order 3 uses 10*h, the standard truncation/rounding trade-off for the
// wider stencil (defaults h = 1e-4, hence 1e-3 for the third derivative).
FdDerivatives eval_jet_fd_check(const Expr& e, double x, double h = 1e-4);

}  // namespace snmgeo
