#pragma once

// Weight expressions over the boundary parameter t, restricted to a closed
// grammar that keeps the weight a trigonometric polynomial:
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := NUMBER | 'cos(' [INT] 't' ')' | 'sin(' [INT] 't' ')' | '(' expr ')'
//
// e.g. "2+cos(t)", "1.5 + 0.25*sin(3t)".

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include "szego/errors.hpp"

namespace szego::weightexpr {

class Parser {
 public:
  using Fn = std::function<double(double)>;

  static Fn parse(const std::string& text) {
    Parser p(text);
    Fn f = p.expr();
    p.skip_ws();
    if (p.pos_ != p.s_.size())
      fail(errc::usage, "weight expression: trailing input at '" +
                            p.s_.substr(p.pos_) + "'");
    return f;
  }

 private:
  explicit Parser(std::string s) : s_(std::move(s)) {}

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

  Fn expr() {
    Fn acc = term();
    for (;;) {
      if (eat('+')) {
        Fn rhs = term();
        acc = [acc, rhs](double t) { return acc(t) + rhs(t); };
      } else if (eat('-')) {
        Fn rhs = term();
        acc = [acc, rhs](double t) { return acc(t) - rhs(t); };
      } else {
        return acc;
      }
    }
  }

  Fn term() {
    Fn acc = factor();
    while (eat('*')) {
      Fn rhs = factor();
      acc = [acc, rhs](double t) { return acc(t) * rhs(t); };
    }
    return acc;
  }

  Fn factor() {
    skip_ws();
    if (eat('(')) {
      Fn inner = expr();
      if (!eat(')')) fail(errc::usage, "weight expression: missing ')'");
      return inner;
    }
    if (match_word("cos")) return trig(true);
    if (match_word("sin")) return trig(false);
    return number();
  }

  bool match_word(const char* w) {
    skip_ws();
    std::size_t len = std::string(w).size();
    if (s_.compare(pos_, len, w) == 0) {
      pos_ += len;
      return true;
    }
    return false;
  }

  Fn trig(bool is_cos) {
    if (!eat('(')) fail(errc::usage, "weight expression: expected '(' after cos/sin");
    skip_ws();
    int k = 1;
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      k = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        k = 10 * k + (s_[pos_++] - '0');
    }
    if (!match_word("t"))
      fail(errc::usage, "weight expression: cos/sin argument must be an integer multiple of t");
    if (!eat(')')) fail(errc::usage, "weight expression: missing ')'");
    if (is_cos) return [k](double t) { return std::cos(k * t); };
    return [k](double t) { return std::sin(k * t); };
  }

  Fn number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
            s_[pos_] == 'e' || s_[pos_] == 'E' ||
            ((s_[pos_] == '+' || s_[pos_] == '-') && pos_ > start &&
             (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
      ++pos_;
    if (pos_ == start)
      fail(errc::usage, "weight expression: expected a number at '" +
                            s_.substr(pos_) + "'");
    try {
      double v = std::stod(s_.substr(start, pos_ - start));
      return [v](double) { return v; };
    } catch (...) {
      fail(errc::usage, "weight expression: bad number");
    }
  }

  std::string s_;
  std::size_t pos_ = 0;
};

inline std::function<double(double)> parse(const std::string& text) {
  return Parser::parse(text);
}

}  // namespace szego::weightexpr
