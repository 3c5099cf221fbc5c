#include "qmont/funcexpr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <variant>

#include "qmont/errors.hpp"

namespace qmont::funcexpr {

namespace {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class UnaryFn { Exp, Ln, Sin, Cos, Sqrt, Abs };

const char* fn_name(UnaryFn fn) {
  switch (fn) {
    case UnaryFn::Exp: return "exp";
    case UnaryFn::Ln: return "ln";
    case UnaryFn::Sin: return "sin";
    case UnaryFn::Cos: return "cos";
    case UnaryFn::Sqrt: return "sqrt";
    case UnaryFn::Abs: return "abs";
  }
  return "?";
}

}  // namespace

struct Expr::Node {
  using Ptr = std::shared_ptr<const Node>;
  struct Number { double value; };
  struct Var {};
  struct Neg { Ptr child; };
  struct Binary { BinaryOp op; Ptr lhs, rhs; };
  struct Call { UnaryFn fn; Ptr arg; };
  std::variant<Number, Var, Neg, Binary, Call> v;
};

namespace {

using Node = Expr::Node;
using NodePtr = Node::Ptr;

NodePtr make_number(double v) { return std::make_shared<Node>(Node{Node::Number{v}}); }
NodePtr make_var() { return std::make_shared<Node>(Node{Node::Var{}}); }
NodePtr make_neg(NodePtr c) { return std::make_shared<Node>(Node{Node::Neg{std::move(c)}}); }
NodePtr make_binary(BinaryOp op, NodePtr l, NodePtr r) {
  return std::make_shared<Node>(Node{Node::Binary{op, std::move(l), std::move(r)}});
}
NodePtr make_call(UnaryFn fn, NodePtr a) {
  return std::make_shared<Node>(Node{Node::Call{fn, std::move(a)}});
}

// ---------------------------------------------------------------------------
// Lexing + recursive descent
// ---------------------------------------------------------------------------

struct Token {
  enum class Kind { Number, Var, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind = Kind::End;
  std::size_t offset = 0;
  double number = 0.0;
  std::string_view text{};
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { advance(); }

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    if (tok_.kind != Token::Kind::End)
      fail(tok_.offset, "an operator ('+', '-', '*', '/', '^') or end of input");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;

  [[noreturn]] void fail(std::size_t offset, std::string expected) const {
    throw SyntaxError("syntax error in '" + std::string(src_) + "'", offset,
                      std::move(expected));
  }

  void advance() { tok_ = lex(); }

  static bool is_ident_char(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
  static bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

  Token lex() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t at = pos_;
    if (pos_ >= src_.size()) return {Token::Kind::End, at};
    const char c = src_[pos_];
    switch (c) {
      case '+': ++pos_; return {Token::Kind::Plus, at};
      case '-': ++pos_; return {Token::Kind::Minus, at};
      case '*': ++pos_; return {Token::Kind::Star, at};
      case '/': ++pos_; return {Token::Kind::Slash, at};
      case '^': ++pos_; return {Token::Kind::Caret, at};
      case '(': ++pos_; return {Token::Kind::LParen, at};
      case ')': ++pos_; return {Token::Kind::RParen, at};
      default: break;
    }
    if (is_digit(c) || c == '.') return lex_number(at);
    if (is_ident_char(c)) {
      std::size_t end = pos_;
      while (end < src_.size() && is_ident_char(src_[end])) ++end;
      const std::string_view word = src_.substr(pos_, end - pos_);
      pos_ = end;
      if (word == "t") return {Token::Kind::Var, at};
      Token t{Token::Kind::Ident, at};
      t.text = word;
      return t;
    }
    fail(at, "a number, 't', a function name, an operator, or a parenthesis");
  }

  Token lex_number(std::size_t at) {
    std::size_t end = pos_;
    bool any_digit = false;
    while (end < src_.size() && is_digit(src_[end])) { ++end; any_digit = true; }
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      while (end < src_.size() && is_digit(src_[end])) { ++end; any_digit = true; }
    }
    if (!any_digit) fail(at, "a numeric literal");
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t exp = end + 1;
      if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
      if (!(exp < src_.size() && is_digit(src_[exp])))
        fail(exp, "exponent digits");
      end = exp;
      while (end < src_.size() && is_digit(src_[end])) ++end;
    }
    double value = 0.0;
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + end;
    if (*first == '.') {
      // from_chars wants a leading digit
      const std::string padded = "0" + std::string(first, last);
      std::from_chars(padded.data(), padded.data() + padded.size(), value);
    } else {
      std::from_chars(first, last, value);
    }
    pos_ = end;
    Token t{Token::Kind::Number, at};
    t.number = value;
    return t;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (tok_.kind == Token::Kind::Plus) {
        advance();
        lhs = make_binary(BinaryOp::Add, std::move(lhs), parse_term());
      } else if (tok_.kind == Token::Kind::Minus) {
        advance();
        lhs = make_binary(BinaryOp::Sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (tok_.kind == Token::Kind::Star) {
        advance();
        lhs = make_binary(BinaryOp::Mul, std::move(lhs), parse_factor());
      } else if (tok_.kind == Token::Kind::Slash) {
        advance();
        lhs = make_binary(BinaryOp::Div, std::move(lhs), parse_factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    if (tok_.kind == Token::Kind::Minus) {
      advance();
      return make_neg(parse_factor());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (tok_.kind == Token::Kind::Caret) {
      advance();
      return make_binary(BinaryOp::Pow, std::move(base), parse_factor());
    }
    return base;
  }

  NodePtr parse_atom() {
    switch (tok_.kind) {
      case Token::Kind::Number: {
        NodePtr n = make_number(tok_.number);
        advance();
        return n;
      }
      case Token::Kind::Var:
        advance();
        return make_var();
      case Token::Kind::Ident: {
        const std::string_view word = tok_.text;
        const std::size_t at = tok_.offset;
        UnaryFn fn;
        if (word == "exp") fn = UnaryFn::Exp;
        else if (word == "ln") fn = UnaryFn::Ln;
        else if (word == "sin") fn = UnaryFn::Sin;
        else if (word == "cos") fn = UnaryFn::Cos;
        else if (word == "sqrt") fn = UnaryFn::Sqrt;
        else if (word == "abs") fn = UnaryFn::Abs;
        else fail(at, "one of the functions exp, ln, sin, cos, sqrt, abs (or 't')");
        advance();
        if (tok_.kind != Token::Kind::LParen) fail(tok_.offset, "'(' after a function name");
        advance();
        NodePtr arg = parse_expr();
        if (tok_.kind != Token::Kind::RParen) fail(tok_.offset, "')'");
        advance();
        return make_call(fn, std::move(arg));
      }
      case Token::Kind::LParen: {
        advance();
        NodePtr inner = parse_expr();
        if (tok_.kind != Token::Kind::RParen) fail(tok_.offset, "')'");
        advance();
        return inner;
      }
      default:
        fail(tok_.offset, "a number, 't', a function call, '(' or unary '-'");
    }
  }
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double eval_node(const Node& n, double t) {
  return std::visit(
      [t](const auto& node) -> double {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Node::Number>) {
          return node.value;
        } else if constexpr (std::is_same_v<T, Node::Var>) {
          return t;
        } else if constexpr (std::is_same_v<T, Node::Neg>) {
          return -eval_node(*node.child, t);
        } else if constexpr (std::is_same_v<T, Node::Binary>) {
          const double l = eval_node(*node.lhs, t);
          const double r = eval_node(*node.rhs, t);
          switch (node.op) {
            case BinaryOp::Add: return l + r;
            case BinaryOp::Sub: return l - r;
            case BinaryOp::Mul: return l * r;
            case BinaryOp::Div:
              if (r == 0.0) throw EvalError("division by zero");
              return l / r;
            case BinaryOp::Pow:
              if (l < 0.0 && r != std::floor(r))
                throw EvalError("fractional power of a negative base");
              if (l == 0.0 && r < 0.0)
                throw EvalError("zero raised to a negative power");
              return std::pow(l, r);
          }
          return 0.0;  // unreachable
        } else {
          static_assert(std::is_same_v<T, Node::Call>);
          const double a = eval_node(*node.arg, t);
          switch (node.fn) {
            case UnaryFn::Exp: return std::exp(a);
            case UnaryFn::Ln:
              if (a <= 0.0) throw EvalError("ln of a non-positive argument");
              return std::log(a);
            case UnaryFn::Sin: return std::sin(a);
            case UnaryFn::Cos: return std::cos(a);
            case UnaryFn::Sqrt:
              if (a < 0.0) throw EvalError("sqrt of a negative argument");
              return std::sqrt(a);
            case UnaryFn::Abs: return std::fabs(a);
          }
          return 0.0;  // unreachable
        }
      },
      n.v);
}

// ---------------------------------------------------------------------------
// Printing: each child is rendered in the loosest grammar slot that still
// reparses to the same tree.
// ---------------------------------------------------------------------------

enum class Slot { Expr = 0, Term = 1, Factor = 2, Atom = 3 };

Slot node_slot(const Node& n) {
  return std::visit(
      [](const auto& node) -> Slot {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Node::Number>) {
          return node.value < 0.0 ? Slot::Factor : Slot::Atom;
        } else if constexpr (std::is_same_v<T, Node::Var>) {
          return Slot::Atom;
        } else if constexpr (std::is_same_v<T, Node::Neg>) {
          return Slot::Factor;
        } else if constexpr (std::is_same_v<T, Node::Binary>) {
          switch (node.op) {
            case BinaryOp::Add:
            case BinaryOp::Sub: return Slot::Expr;
            case BinaryOp::Mul:
            case BinaryOp::Div: return Slot::Term;
            case BinaryOp::Pow: return Slot::Factor;
          }
          return Slot::Expr;
        } else {
          return Slot::Atom;
        }
      },
      n.v);
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void print_node(std::string& out, const Node& n, Slot slot) {
  const bool parens = static_cast<int>(node_slot(n)) < static_cast<int>(slot);
  if (parens) out += '(';
  std::visit(
      [&out](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Node::Number>) {
          out += format_number(node.value);
        } else if constexpr (std::is_same_v<T, Node::Var>) {
          out += 't';
        } else if constexpr (std::is_same_v<T, Node::Neg>) {
          out += '-';
          print_node(out, *node.child, Slot::Factor);
        } else if constexpr (std::is_same_v<T, Node::Binary>) {
          switch (node.op) {
            case BinaryOp::Add:
              print_node(out, *node.lhs, Slot::Expr);
              out += " + ";
              print_node(out, *node.rhs, Slot::Term);
              break;
            case BinaryOp::Sub:
              print_node(out, *node.lhs, Slot::Expr);
              out += " - ";
              print_node(out, *node.rhs, Slot::Term);
              break;
            case BinaryOp::Mul:
              print_node(out, *node.lhs, Slot::Term);
              out += "*";
              print_node(out, *node.rhs, Slot::Factor);
              break;
            case BinaryOp::Div:
              print_node(out, *node.lhs, Slot::Term);
              out += "/";
              print_node(out, *node.rhs, Slot::Factor);
              break;
            case BinaryOp::Pow:
              print_node(out, *node.lhs, Slot::Atom);
              out += "^";
              print_node(out, *node.rhs, Slot::Factor);
              break;
          }
        } else {
          static_assert(std::is_same_v<T, Node::Call>);
          out += fn_name(node.fn);
          out += '(';
          print_node(out, *node.arg, Slot::Expr);
          out += ')';
        }
      },
      n.v);
  if (parens) out += ')';
}

bool nodes_equal(const Node& a, const Node& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      [&b](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.v);
        if constexpr (std::is_same_v<T, Node::Number>) {
          return lhs.value == rhs.value;
        } else if constexpr (std::is_same_v<T, Node::Var>) {
          return true;
        } else if constexpr (std::is_same_v<T, Node::Neg>) {
          return nodes_equal(*lhs.child, *rhs.child);
        } else if constexpr (std::is_same_v<T, Node::Binary>) {
          return lhs.op == rhs.op && nodes_equal(*lhs.lhs, *rhs.lhs) &&
                 nodes_equal(*lhs.rhs, *rhs.rhs);
        } else {
          return lhs.fn == rhs.fn && nodes_equal(*lhs.arg, *rhs.arg);
        }
      },
      a.v);
}

}  // namespace

double Expr::eval(double t) const {
  const double v = eval_node(*root_, t);
  if (!std::isfinite(v)) throw EvalError("expression is non-finite at t = " + format_number(t));
  return v;
}

std::string Expr::str() const {
  std::string out;
  print_node(out, *root_, Slot::Expr);
  return out;
}

bool operator==(const Expr& lhs, const Expr& rhs) {
  return nodes_equal(*lhs.root_, *rhs.root_);
}

Expr parse(std::string_view src) {
  if (src.empty()) throw SyntaxError("empty expression", 0, "an expression");
  Parser p(src);
  return Expr(p.parse_all());
}

RealFn as_realfn(const Expr& e, std::string label) {
  return RealFn(std::move(label), [e](double t) { return e.eval(t); });
}

}  // namespace qmont::funcexpr
