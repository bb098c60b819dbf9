#include "holoflow/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace holoflow::expr {

ParseError::ParseError(std::size_t offset, std::string expected)
    : DomainError("parse error at offset " + std::to_string(offset) + ": expected " + expected),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

Ast make(Op op, cplx value = {}, Ast lhs = nullptr, Ast rhs = nullptr) {
  return std::make_shared<const Node>(Node{op, value, std::move(lhs), std::move(rhs)});
}

bool is_const(const Ast& a) { return a->op == Op::constant; }
bool is_const_value(const Ast& a, cplx v) { return is_const(a) && a->value == v; }

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Ast run() {
    skip();
    if (pos_ == s_.size()) throw ParseError(pos_, "an expression (input is empty)");
    Ast a = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(pos_, "operator or end of input");
    return a;
  }

 private:
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

  Ast expr() {
    Ast a = term();
    for (;;) {
      if (accept('+'))
        a = make(Op::add, {}, a, term());
      else if (accept('-'))
        a = make(Op::sub, {}, a, term());
      else
        return a;
    }
  }

  Ast term() {
    Ast a = factor();
    for (;;) {
      if (accept('*'))
        a = make(Op::mul, {}, a, factor());
      else if (accept('/'))
        a = make(Op::div, {}, a, factor());
      else
        return a;
    }
  }

  Ast factor() {
    Ast b = base();
    if (accept('^')) return make(Op::pow, {}, b, factor());
    return b;
  }

  Ast base() {
    skip();
    if (pos_ == s_.size()) throw ParseError(pos_, "number, 'z', 'i', function or '('");
    char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return make(Op::neg, {}, base());
    }
    if (c == '(') {
      ++pos_;
      Ast a = expr();
      if (!accept(')')) throw ParseError(pos_, "')'");
      return a;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string_view id = s_.substr(start, pos_ - start);
      if (id == "z") return make(Op::variable);
      if (id == "i") return make(Op::constant, cplx(0.0, 1.0));
      Op fn;
      if (id == "log")
        fn = Op::log;
      else if (id == "exp")
        fn = Op::exp;
      else if (id == "sqrt")
        fn = Op::sqrt;
      else
        throw ParseError(start, "known identifier (z, i, log, exp, sqrt), got '" + std::string(id) + "'");
      if (!accept('(')) throw ParseError(pos_, "'(' after " + std::string(id));
      Ast arg = expr();
      if (!accept(')')) throw ParseError(pos_, "')'");
      return make(fn, {}, arg);
    }
    throw ParseError(pos_, "number, 'z', 'i', function or '('");
  }

  Ast number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) throw ParseError(start, "a decimal number");
    return make(Op::constant, cplx(v, 0.0));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

cplx principal_log(cplx a, EvalDiagnostics* diag) {
  if (a == cplx(0.0, 0.0)) throw EvalError("log of zero");
  double im = a.imag();
  if (im == 0.0) {
    if (a.real() < 0.0) {
      if (diag) ++diag->branch_cut_hits;
      return {std::log(-a.real()), kPi};
    }
    return {std::log(a.real()), 0.0};
  }
  return {std::log(std::abs(a)), std::atan2(im, a.real())};
}

cplx int_pow(cplx a, long n) {
  bool inv = n < 0;
  unsigned long m = inv ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  cplx r(1.0, 0.0), b = a;
  while (m) {
    if (m & 1u) r *= b;
    b *= b;
    m >>= 1;
  }
  return inv ? 1.0 / r : r;
}

cplx eval_rec(const Node& n, cplx z, EvalDiagnostics* diag) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return z;
    case Op::neg: return -eval_rec(*n.lhs, z, diag);
    case Op::add: return eval_rec(*n.lhs, z, diag) + eval_rec(*n.rhs, z, diag);
    case Op::sub: return eval_rec(*n.lhs, z, diag) - eval_rec(*n.rhs, z, diag);
    case Op::mul: return eval_rec(*n.lhs, z, diag) * eval_rec(*n.rhs, z, diag);
    case Op::div: {
      cplx d = eval_rec(*n.rhs, z, diag);
      if (d == cplx(0.0, 0.0)) throw EvalError("division by zero");
      return eval_rec(*n.lhs, z, diag) / d;
    }
    case Op::pow: {
      cplx a = eval_rec(*n.lhs, z, diag);
      if (n.rhs->op == Op::constant && n.rhs->value.imag() == 0.0) {
        double e = n.rhs->value.real();
        if (e == std::round(e) && std::abs(e) <= 64.0) {
          if (a == cplx(0.0, 0.0) && e <= 0.0) throw EvalError("pow at zero with non-positive exponent");
          return int_pow(a, static_cast<long>(e));
        }
      }
      cplx b = eval_rec(*n.rhs, z, diag);
      if (a == cplx(0.0, 0.0)) throw EvalError("pow at zero");
      return std::exp(b * principal_log(a, diag));
    }
    case Op::log: return principal_log(eval_rec(*n.lhs, z, diag), diag);
    case Op::exp: return std::exp(eval_rec(*n.lhs, z, diag));
    case Op::sqrt: {
      cplx a = eval_rec(*n.lhs, z, diag);
      if (a.imag() == 0.0 && a.real() < 0.0) {
        if (diag) ++diag->branch_cut_hits;
        return {0.0, std::sqrt(-a.real())};
      }
      return std::sqrt(a);
    }
  }
  return {};
}

Ast diff_rec(const Ast& a) {
  switch (a->op) {
    case Op::constant: return constant(0.0);
    case Op::variable: return constant(1.0);
    case Op::neg: return neg(diff_rec(a->lhs));
    case Op::add: return add(diff_rec(a->lhs), diff_rec(a->rhs));
    case Op::sub: return sub(diff_rec(a->lhs), diff_rec(a->rhs));
    case Op::mul: return add(mul(diff_rec(a->lhs), a->rhs), mul(a->lhs, diff_rec(a->rhs)));
    case Op::div:
      return div(sub(mul(diff_rec(a->lhs), a->rhs), mul(a->lhs, diff_rec(a->rhs))), pow(a->rhs, constant(2.0)));
    case Op::pow: {
      Ast u = a->lhs, v = a->rhs;
      Ast du = diff_rec(u);
      if (is_const(v)) return mul(mul(v, pow(u, constant(v->value - 1.0))), du);
      // u^v = exp(v log u)
      return mul(a, add(mul(diff_rec(v), log(u)), div(mul(v, du), u)));
    }
    case Op::log: return div(diff_rec(a->lhs), a->lhs);
    case Op::exp: return mul(a, diff_rec(a->lhs));
    case Op::sqrt: return div(diff_rec(a->lhs), mul(constant(2.0), a));
  }
  return constant(0.0);
}

void print_rec(const Node& n, std::string& out) {
  auto bin = [&](const char* op) {
    out += '(';
    print_rec(*n.lhs, out);
    out += op;
    print_rec(*n.rhs, out);
    out += ')';
  };
  auto fn = [&](const char* name) {
    out += name;
    out += '(';
    print_rec(*n.lhs, out);
    out += ')';
  };
  switch (n.op) {
    case Op::constant:
      if (n.value == cplx(0.0, 1.0))
        out += 'i';
      else if (n.value.imag() == 0.0)
        out += number_text(n.value.real());
      else
        out += complex_text(n.value);
      break;
    case Op::variable: out += 'z'; break;
    case Op::neg:
      out += "(-";
      print_rec(*n.lhs, out);
      out += ')';
      break;
    case Op::add: bin("+"); break;
    case Op::sub: bin("-"); break;
    case Op::mul: bin("*"); break;
    case Op::div: bin("/"); break;
    case Op::pow: bin("^"); break;
    case Op::log: fn("log"); break;
    case Op::exp: fn("exp"); break;
    case Op::sqrt: fn("sqrt"); break;
  }
}

}  // namespace

Ast parse(std::string_view text) { return Parser(text).run(); }

cplx eval(const Ast& ast, cplx z, EvalDiagnostics* diag) { return eval_rec(*ast, z, diag); }

Ast differentiate(const Ast& ast) { return diff_rec(ast); }

std::string to_string(const Ast& ast) {
  std::string out;
  print_rec(*ast, out);
  return out;
}

bool structurally_equal(const Ast& a, const Ast& b) {
  if (!a || !b) return a == b;
  if (a->op != b->op) return false;
  if (a->op == Op::constant) return a->value == b->value;
  return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
}

Ast constant(cplx c) { return make(Op::constant, c); }
Ast variable() { return make(Op::variable); }

Ast neg(Ast a) {
  if (is_const(a)) return constant(-a->value);
  return make(Op::neg, {}, std::move(a));
}

Ast add(Ast a, Ast b) {
  if (is_const(a) && is_const(b)) return constant(a->value + b->value);
  if (is_const_value(a, 0.0)) return b;
  if (is_const_value(b, 0.0)) return a;
  return make(Op::add, {}, std::move(a), std::move(b));
}

Ast sub(Ast a, Ast b) {
  if (is_const(a) && is_const(b)) return constant(a->value - b->value);
  if (is_const_value(b, 0.0)) return a;
  if (is_const_value(a, 0.0)) return neg(std::move(b));
  return make(Op::sub, {}, std::move(a), std::move(b));
}

Ast mul(Ast a, Ast b) {
  if (is_const(a) && is_const(b)) return constant(a->value * b->value);
  if (is_const_value(a, 0.0) || is_const_value(b, 0.0)) return constant(0.0);
  if (is_const_value(a, 1.0)) return b;
  if (is_const_value(b, 1.0)) return a;
  return make(Op::mul, {}, std::move(a), std::move(b));
}

Ast div(Ast a, Ast b) {
  if (is_const_value(b, 1.0)) return a;
  if (is_const_value(a, 0.0) && !is_const_value(b, 0.0)) return constant(0.0);
  if (is_const(a) && is_const(b) && b->value != cplx(0.0, 0.0)) return constant(a->value / b->value);
  return make(Op::div, {}, std::move(a), std::move(b));
}

Ast pow(Ast a, Ast b) {
  if (is_const_value(b, 1.0)) return a;
  if (is_const_value(b, 0.0)) return constant(1.0);
  return make(Op::pow, {}, std::move(a), std::move(b));
}

Ast log(Ast a) { return make(Op::log, {}, std::move(a)); }
Ast exp(Ast a) { return make(Op::exp, {}, std::move(a)); }
Ast sqrt(Ast a) { return make(Op::sqrt, {}, std::move(a)); }

std::string number_text(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string complex_text(cplx c) {
  std::string re = number_text(c.real());
  std::string im = number_text(std::abs(c.imag()));
  return "(" + re + (c.imag() < 0 ? "-" : "+") + im + "*i)";
}

}  // namespace holoflow::expr
