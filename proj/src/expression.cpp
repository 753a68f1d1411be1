#include "thermoplast/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace thermoplast {

struct Expression::Node {
  enum class Op { constant, variable, add, sub, mul, div, pow, neg, call };
  Op op = Op::constant;
  double value = 0.0;
  std::string function;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double r) const {
    switch (op) {
      case Op::constant: return value;
      case Op::variable: return r;
      case Op::add: return args[0]->eval(r) + args[1]->eval(r);
      case Op::sub: return args[0]->eval(r) - args[1]->eval(r);
      case Op::mul: return args[0]->eval(r) * args[1]->eval(r);
      case Op::div: return args[0]->eval(r) / args[1]->eval(r);
      case Op::pow: return std::pow(args[0]->eval(r), args[1]->eval(r));
      case Op::neg: return -args[0]->eval(r);
      case Op::call: break;
    }
    const double a = args[0]->eval(r);
    if (function == "abs") return std::abs(a);
    if (function == "sqrt") return std::sqrt(a);
    if (function == "exp") return std::exp(a);
    if (function == "log") return std::log(a);
    if (function == "sin") return std::sin(a);
    if (function == "cos") return std::cos(a);
    if (function == "tanh") return std::tanh(a);
    if (function == "sign") return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
    const double b = args[1]->eval(r);
    if (function == "min") return std::min(a, b);
    if (function == "max") return std::max(a, b);
    return std::pow(a, b);  // pow
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0, std::string fn = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->args = std::move(args);
  n->value = value;
  n->function = std::move(fn);
  return n;
}

int arity(const std::string& fn) {
  if (fn == "min" || fn == "max" || fn == "pow") return 2;
  if (fn == "abs" || fn == "sqrt" || fn == "exp" || fn == "log" || fn == "sin" || fn == "cos" ||
      fn == "tanh" || fn == "sign") {
    return 1;
  }
  return 0;
}

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' unary)?
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ExpressionError("expression '" + s_ + "': " + msg + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Op::add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Op::sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Op::mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Op::div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Op::neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Op::pow, {base, unary()});
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make(Op::constant, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "r") return make(Op::variable);
      const int n = arity(name);
      if (n == 0) fail("unknown identifier '" + name + "'");
      if (!accept('(')) fail("expected '(' after " + name);
      std::vector<NodePtr> args{expr()};
      if (n == 2) {
        if (!accept(',')) fail("expected ',' in " + name);
        args.push_back(expr());
      }
      if (!accept(')')) fail("expected ')' after arguments of " + name);
      return make(Op::call, std::move(args), 0.0, name);
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string text, std::shared_ptr<const Node> root)
    : text_(std::move(text)), root_(std::move(root)) {}

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  NodePtr root = p.parse();
  return Expression(text, std::move(root));
}

double Expression::operator()(double r) const { return root_->eval(r); }

}  // namespace thermoplast
