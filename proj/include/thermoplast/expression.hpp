#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace thermoplast {

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scalar expression in one variable `r`: numbers, + - * / ^, parentheses and
/// the functions abs, sqrt, exp, log, sin, cos, tanh, sign, min, max, pow.
class Expression {
 public:
  /// Throws ExpressionError on malformed input.
  static Expression parse(const std::string& text);

  double operator()(double r) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  Expression(std::string text, std::shared_ptr<const Node> root);
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace thermoplast
