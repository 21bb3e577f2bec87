#pragma once

#include <functional>
#include <string>

#include "glift/types.hpp"

namespace glift {

/// Arithmetic over x1..xm, y1..yn: + - * / ^ (right associative), unary minus,
/// exp log sin cos tan sqrt, the constant pi and decimal literals.
/// Parse errors throw ConfigParse with the column in `value`.
class Expression {
 public:
  static Expression parse(const std::string& text, Eigen::Index m, Eigen::Index n);

  double operator()(const Vector& x, const Vector& y) const { return eval_(x, y); }
  const std::string& text() const { return text_; }

 private:
  using Eval = std::function<double(const Vector&, const Vector&)>;
  Expression(std::string text, Eval eval) : text_(std::move(text)), eval_(std::move(eval)) {}

  std::string text_;
  Eval eval_;
};

}  // namespace glift
