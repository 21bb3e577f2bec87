#include "glift/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "glift/error.hpp"

namespace glift {

namespace {

using Eval = std::function<double(const Vector&, const Vector&)>;

// Recursive descent:
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := number | variable | name '(' expr ')' | 'pi' | '(' expr ')'
class Parser {
 public:
  Parser(const std::string& s, Eigen::Index m, Eigen::Index n) : s_(s), m_(m), n_(n) {}

  Eval parse() {
    Eval e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ConfigParse, "expression '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1),
                static_cast<double>(pos_ + 1));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Eval expr() {
    Eval lhs = term();
    while (true) {
      if (eat('+')) {
        lhs = [a = lhs, b = term()](const Vector& x, const Vector& y) { return a(x, y) + b(x, y); };
      } else if (eat('-')) {
        lhs = [a = lhs, b = term()](const Vector& x, const Vector& y) { return a(x, y) - b(x, y); };
      } else {
        return lhs;
      }
    }
  }

  Eval term() {
    Eval lhs = unary();
    while (true) {
      if (eat('*')) {
        lhs = [a = lhs, b = unary()](const Vector& x, const Vector& y) { return a(x, y) * b(x, y); };
      } else if (eat('/')) {
        lhs = [a = lhs, b = unary()](const Vector& x, const Vector& y) { return a(x, y) / b(x, y); };
      } else {
        return lhs;
      }
    }
  }

  Eval unary() {
    if (eat('-')) return [a = unary()](const Vector& x, const Vector& y) { return -a(x, y); };
    return power();
  }

  Eval power() {
    Eval base = atom();
    if (eat('^')) {
      return [a = base, b = unary()](const Vector& x, const Vector& y) { return std::pow(a(x, y), b(x, y)); };
    }
    return base;
  }

  Eval atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Eval e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Eval number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    return [v](const Vector&, const Vector&) { return v; };
  }

  Eval word() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string w = s_.substr(start, pos_ - start);

    if (w == "pi") return [](const Vector&, const Vector&) { return std::numbers::pi; };
    if ((w[0] == 'x' || w[0] == 'y') && w.size() > 1 &&
        w.find_first_not_of("0123456789", 1) == std::string::npos) {
      const long idx = std::stol(w.substr(1)) - 1;
      const Eigen::Index bound = w[0] == 'x' ? m_ : n_;
      if (idx < 0 || idx >= bound) {
        pos_ = start;
        fail("variable " + w + " out of range");
      }
      if (w[0] == 'x') return [idx](const Vector& x, const Vector&) { return x(idx); };
      return [idx](const Vector&, const Vector& y) { return y(idx); };
    }

    double (*fn)(double) = nullptr;
    if (w == "exp") fn = [](double v) { return std::exp(v); };
    else if (w == "log") fn = [](double v) { return std::log(v); };
    else if (w == "sin") fn = [](double v) { return std::sin(v); };
    else if (w == "cos") fn = [](double v) { return std::cos(v); };
    else if (w == "tan") fn = [](double v) { return std::tan(v); };
    else if (w == "sqrt") fn = [](double v) { return std::sqrt(v); };
    if (!fn) {
      pos_ = start;
      fail("unknown name '" + w + "'");
    }
    if (!eat('(')) fail("expected '(' after " + w);
    Eval arg = expr();
    if (!eat(')')) fail("expected ')'");
    return [fn, arg](const Vector& x, const Vector& y) { return fn(arg(x, y)); };
  }

  const std::string& s_;
  Eigen::Index m_, n_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, Eigen::Index m, Eigen::Index n) {
  return Expression(text, Parser(text, m, n).parse());
}

}  // namespace glift
