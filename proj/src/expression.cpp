#include "whf/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "whf/errors.hpp"

namespace whf {

namespace {

bool is_smooth(const BoundaryFunction& f) { return f.max_frequency() == 0.0; }

BoundaryFunction reciprocal(const BoundaryFunction& d) {
  if (d.is_zero()) throw ConfigError("division by zero");
  if (!is_smooth(d)) throw ConfigError("cannot divide by an oscillating expression");
  BoundaryFunction r([d](double x) { return 1.0 / d(x); }, 0.0);
  if (d.has_continuation())
    r = r.with_continuation([d](cplx z) { return 1.0 / d.continue_to(z); }, d.continuation_region());
  return r;
}

// exp(a + s x) with Re s = 0
BoundaryFunction exp_affine(const BoundaryFunction& arg) {
  if (arg.is_zero()) return BoundaryFunction::constant(1.0);
  if (!is_smooth(arg)) throw ConfigError("exp() argument must not oscillate");
  const cplx a = arg(0.0);
  const cplx s = arg(1.0) - a;
  for (double t : {-3.7, 2.3, 10.1, -50.0}) {
    const cplx expect = a + s * t;
    if (std::abs(arg(t) - expect) > 1e-9 * (1.0 + std::abs(a) + std::abs(s) * std::abs(t)))
      throw ConfigError("exp() argument must be affine in x");
  }
  if (std::abs(s.real()) > 1e-12 * (1.0 + std::abs(s)))
    throw ConfigError("exp() argument must have a purely imaginary slope in x (bounded on the line)");
  const cplx ea = std::exp(a);
  const double w = s.imag();
  auto cont = [a, s](cplx z) { return std::exp(a + s * z); };
  if (w == 0.0) return BoundaryFunction::constant(ea);
  return BoundaryFunction::oscillating(w, [ea](double) { return ea; }, 0.0)
      .with_continuation(cont, Region::plane);
}

class Parser {
 public:
  Parser(const std::string& text, double eps) : s_(text), eps_(eps) {}

  BoundaryFunction parse() {
    BoundaryFunction v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression '" + s_ + "': " + msg + " at position " + std::to_string(pos_));
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

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  BoundaryFunction expr() {
    BoundaryFunction v = term();
    for (;;) {
      if (accept('+'))
        v = v + term();
      else if (accept('-'))
        v = v - term();
      else
        return v;
    }
  }

  BoundaryFunction term() {
    BoundaryFunction v = unary();
    for (;;) {
      if (accept('*'))
        v = v * unary();
      else if (accept('/'))
        v = v * reciprocal(unary());
      else
        return v;
    }
  }

  BoundaryFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  BoundaryFunction power() {
    BoundaryFunction base = primary();
    if (!accept('^')) return base;
    const bool neg = accept('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer literal");
    const int k = std::stoi(s_.substr(start, pos_ - start));
    if (k > 64) fail("exponent too large");
    BoundaryFunction b = neg ? reciprocal(base) : base;
    BoundaryFunction r = BoundaryFunction::constant(1.0);
    for (int j = 0; j < k; ++j) r = r * b;
    return r;
  }

  BoundaryFunction primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      BoundaryFunction v = expr();
      expect(')');
      return v;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  BoundaryFunction number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    return BoundaryFunction::constant(v);
  }

  BoundaryFunction identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    if (id == "x")
      return BoundaryFunction([](double x) { return cplx(x, 0.0); }, 0.0, "x")
          .with_continuation([](cplx z) { return z; }, Region::plane);
    if (id == "i") return BoundaryFunction::constant(kI);
    if (id == "eps") return BoundaryFunction::constant(eps_);
    if (id == "pi") return BoundaryFunction::constant(std::numbers::pi);
    if (id == "exp" || id == "sin" || id == "cos") {
      expect('(');
      const BoundaryFunction arg = expr();
      expect(')');
      if (id == "exp") return exp_affine(arg);
      const BoundaryFunction ep = exp_affine(kI * arg);
      const BoundaryFunction em = exp_affine(-kI * arg);
      if (id == "sin") return cplx(0.0, -0.5) * (ep - em);
      return cplx(0.5) * (ep + em);
    }
    pos_ = start;
    fail("unknown identifier '" + id + "'");
  }

  std::string s_;
  double eps_;
  std::size_t pos_ = 0;
};

}  // namespace

BoundaryFunction parse_expression(const std::string& text, double eps) {
  return Parser(text, eps).parse();
}

}  // namespace whf
