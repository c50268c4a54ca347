#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cartan/taylor.hpp"

namespace cartan {

using Point = std::vector<double>;

/// Expression AST over coordinates x0..x{n-1}. Nodes are immutable and shared.
struct Expr {
  enum class Kind { Number, Coord, Add, Sub, Mul, Div, Pow, Neg, Call };
  enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

  Kind kind;
  double number = 0.0;      // Number, and the literal exponent of Pow
  int coord = -1;           // Coord
  Func func = Func::Sin;    // Call
  std::shared_ptr<const Expr> a, b;
  std::size_t offset = 0;   // byte offset in source, for diagnostics

  static const char* func_name(Func f);
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Parses an expression over x0..x{n-1}. Throws ParseError with a byte offset on
/// syntax errors, unknown identifiers, out-of-range coordinate indices, or arity
/// mismatches. The grammar is documented in docs/expr-grammar.md.
ExprPtr parse_expr(const std::string& text, int dimension);

/// Canonical printer; parse(print(e)) reproduces the AST.
std::string print_expr(const ExprPtr& e);

/// Structural equality after canonical printing.
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// A scalar function of the chart coordinates, evaluable as Taylor data.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(ExprPtr ast, int dimension) : ast_(std::move(ast)), dim_(dimension) {}
  static ScalarField parse(const std::string& text, int dimension) {
    return ScalarField(parse_expr(text, dimension), dimension);
  }
  static ScalarField constant(double v, int dimension);

  bool valid() const { return ast_ != nullptr; }
  int dimension() const { return dim_; }
  const ExprPtr& ast() const { return ast_; }

  /// Truncated expansion of the field at x, order K <= 3. Coefficients are exact
  /// (to rounding); DomainError identifies the offending node on pole/branch hits.
  TaylorValue eval(const Point& x, int order) const;

  /// Plain value, shorthand for eval(x, 0).
  double operator()(const Point& x) const { return eval(x, 0).value(); }

 private:
  ExprPtr ast_;
  int dim_ = 0;
};

/// eval over an AST directly (used by tests that build ASTs by hand).
TaylorValue eval_taylor(const ExprPtr& e, const Point& x, int order);

}  // namespace cartan
