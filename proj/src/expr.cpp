#include "cartan/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace cartan {

const char* Expr::func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
  }
  return "?";
}

namespace {

std::shared_ptr<Expr> make(Expr::Kind k, std::size_t off) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->offset = off;
  return e;
}

class Parser {
 public:
  Parser(const std::string& s, int dim) : s_(s), dim_(dim) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  const std::string& s_;
  int dim_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  // expr := term (('+'|'-') term)*
  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      std::size_t off = pos_;
      if (eat('+')) {
        auto e = make(Expr::Kind::Add, off);
        e->a = lhs;
        e->b = term();
        lhs = e;
      } else if (eat('-')) {
        auto e = make(Expr::Kind::Sub, off);
        e->a = lhs;
        e->b = term();
        lhs = e;
      } else {
        return lhs;
      }
    }
  }

  // term := factor (('*'|'/') factor)*
  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      std::size_t off = pos_;
      if (eat('*')) {
        auto e = make(Expr::Kind::Mul, off);
        e->a = lhs;
        e->b = factor();
        lhs = e;
      } else if (eat('/')) {
        auto e = make(Expr::Kind::Div, off);
        e->a = lhs;
        e->b = factor();
        lhs = e;
      } else {
        return lhs;
      }
    }
  }

  // factor := '-' factor | power      (so ^ binds tighter than unary minus)
  ExprPtr factor() {
    std::size_t off = pos_;
    if (eat('-')) {
      auto e = make(Expr::Kind::Neg, off);
      e->a = factor();
      return e;
    }
    return power();
  }

  // power := atom ('^' literal-exponent)?   exponents are numeric literals,
  // optionally signed; right-associative chains reduce to literal exponents only.
  ExprPtr power() {
    ExprPtr base = atom();
    std::size_t off = pos_;
    if (!eat('^')) return base;
    skip_ws();
    bool negexp = eat('-');
    skip_ws();
    if (pos_ >= s_.size() || !(std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      throw ParseError("power exponent must be a numeric literal", pos_);
    double v = number();
    auto e = make(Expr::Kind::Pow, off);
    e->a = base;
    e->number = negexp ? -v : v;
    return e;
  }

  double number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        pos_ = mark;  // 'e' belongs to something else; not part of the literal
      } else {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    if (pos_ == start) throw ParseError("expected number", start);
    return std::stod(s_.substr(start, pos_ - start));
  }

  ExprPtr atom() {
    skip_ws();
    std::size_t off = pos_;
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      auto e = make(Expr::Kind::Number, off);
      e->number = number();
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      static const std::map<std::string, Expr::Func> funcs = {
          {"sin", Expr::Func::Sin},   {"cos", Expr::Func::Cos},  {"tan", Expr::Func::Tan},
          {"exp", Expr::Func::Exp},   {"log", Expr::Func::Log},  {"sqrt", Expr::Func::Sqrt},
          {"sinh", Expr::Func::Sinh}, {"cosh", Expr::Func::Cosh}};
      auto fit = funcs.find(name);
      if (fit != funcs.end()) {
        if (!eat('(')) throw ParseError("function '" + name + "' expects one argument", pos_);
        ExprPtr arg = expr();
        if (eat(',')) throw ParseError("function '" + name + "' takes exactly one argument", pos_);
        if (!eat(')')) throw ParseError("expected ')'", pos_);
        auto e = make(Expr::Kind::Call, off);
        e->func = fit->second;
        e->a = arg;
        return e;
      }
      if (name.size() >= 2 && name[0] == 'x') {
        bool digits = true;
        for (std::size_t i = 1; i < name.size(); ++i)
          if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
        if (digits) {
          int idx = std::stoi(name.substr(1));
          if (idx >= dim_)
            throw ParseError("unknown identifier " + name + " (dimension is " +
                                 std::to_string(dim_) + ")",
                             start);
          auto e = make(Expr::Kind::Coord, off);
          e->coord = idx;
          return e;
        }
      }
      throw ParseError("unknown identifier " + name, start);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }
};

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

std::string fmt_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_rec(const ExprPtr& e, std::ostringstream& out, int parent_prec) {
  int prec = precedence(e->kind);
  bool paren = prec < parent_prec;
  if (paren) out << '(';
  switch (e->kind) {
    case Expr::Kind::Number: out << fmt_number(e->number); break;
    case Expr::Kind::Coord: out << 'x' << e->coord; break;
    case Expr::Kind::Add:
      print_rec(e->a, out, prec);
      out << " + ";
      print_rec(e->b, out, prec + 1);
      break;
    case Expr::Kind::Sub:
      print_rec(e->a, out, prec);
      out << " - ";
      print_rec(e->b, out, prec + 1);
      break;
    case Expr::Kind::Mul:
      print_rec(e->a, out, prec);
      out << "*";
      print_rec(e->b, out, prec + 1);
      break;
    case Expr::Kind::Div:
      print_rec(e->a, out, prec);
      out << "/";
      print_rec(e->b, out, prec + 1);
      break;
    case Expr::Kind::Neg:
      out << "-";
      print_rec(e->a, out, prec);
      break;
    case Expr::Kind::Pow:
      print_rec(e->a, out, prec + 1);
      out << "^";
      if (e->number < 0) out << "-" << fmt_number(-e->number);
      else out << fmt_number(e->number);
      break;
    case Expr::Kind::Call:
      out << Expr::func_name(e->func) << '(';
      print_rec(e->a, out, 0);
      out << ')';
      break;
  }
  if (paren) out << ')';
}

}  // namespace

ExprPtr parse_expr(const std::string& text, int dimension) {
  return Parser(text, dimension).run();
}

std::string print_expr(const ExprPtr& e) {
  std::ostringstream out;
  print_rec(e, out, 0);
  return out.str();
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) { return print_expr(a) == print_expr(b); }

ScalarField ScalarField::constant(double v, int dimension) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Number;
  e->number = v;
  return ScalarField(e, dimension);
}

TaylorValue eval_taylor(const ExprPtr& e, const Point& x, int order) {
  int n = static_cast<int>(x.size());
  try {
    switch (e->kind) {
      case Expr::Kind::Number: return TaylorValue::constant(n, order, e->number);
      case Expr::Kind::Coord: return TaylorValue::variable(n, order, e->coord, x[e->coord]);
      case Expr::Kind::Add: return eval_taylor(e->a, x, order) + eval_taylor(e->b, x, order);
      case Expr::Kind::Sub: return eval_taylor(e->a, x, order) - eval_taylor(e->b, x, order);
      case Expr::Kind::Mul: return eval_taylor(e->a, x, order) * eval_taylor(e->b, x, order);
      case Expr::Kind::Div: return eval_taylor(e->a, x, order) / eval_taylor(e->b, x, order);
      case Expr::Kind::Neg: return -eval_taylor(e->a, x, order);
      case Expr::Kind::Pow: return pow(eval_taylor(e->a, x, order), e->number);
      case Expr::Kind::Call: {
        TaylorValue u = eval_taylor(e->a, x, order);
        switch (e->func) {
          case Expr::Func::Sin: return sin(u);
          case Expr::Func::Cos: return cos(u);
          case Expr::Func::Tan: return tan(u);
          case Expr::Func::Exp: return exp(u);
          case Expr::Func::Log: return log(u);
          case Expr::Func::Sqrt: return sqrt(u);
          case Expr::Func::Sinh: return sinh(u);
          case Expr::Func::Cosh: return cosh(u);
        }
        break;
      }
    }
  } catch (const DomainError& err) {
    std::string what = err.what();
    if (what.find("| in subexpression") == std::string::npos) {
      throw DomainError(what + " | in subexpression '" + print_expr(e) + "' at byte " +
                        std::to_string(e->offset));
    }
    throw;
  }
  throw Error("eval_taylor: unreachable");
}

TaylorValue ScalarField::eval(const Point& x, int order) const {
  if (static_cast<int>(x.size()) != dim_) throw ShapeError("scalar field: point dimension mismatch");
  return eval_taylor(ast_, x, order);
}

}  // namespace cartan
