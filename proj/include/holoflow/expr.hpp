#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "holoflow/disc.hpp"

namespace holoflow::expr {

enum class Op { constant, variable, neg, add, sub, mul, div, pow, log, exp, sqrt };

struct Node;
using Ast = std::shared_ptr<const Node>;

struct Node {
  Op op;
  cplx value;  // only for Op::constant
  Ast lhs;     // operand of unary nodes and functions
  Ast rhs;
};

class ParseError : public DomainError {
 public:
  ParseError(std::size_t offset, std::string expected);
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class EvalError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Counts evaluations that landed on a branch cut (principal value returned).
struct EvalDiagnostics {
  int branch_cut_hits = 0;
};

// expr   := term (('+'|'-') term)*
// term   := factor (('*'|'/') factor)*
// factor := base ('^' factor)?
// base   := number | 'i' | 'z' | func '(' expr ')' | '(' expr ')' | '-' base
Ast parse(std::string_view text);

cplx eval(const Ast& ast, cplx z, EvalDiagnostics* diag = nullptr);

Ast differentiate(const Ast& ast);

// Fully parenthesized; parse(to_string(a)) is structurally equal to a
// whenever a contains only real constants and i.
std::string to_string(const Ast& ast);

bool structurally_equal(const Ast& a, const Ast& b);

// Builders with light constant folding.
Ast constant(cplx c);
Ast variable();
Ast neg(Ast a);
Ast add(Ast a, Ast b);
Ast sub(Ast a, Ast b);
Ast mul(Ast a, Ast b);
Ast div(Ast a, Ast b);
Ast pow(Ast a, Ast b);
Ast log(Ast a);
Ast exp(Ast a);
Ast sqrt(Ast a);

// Literal text for a double that parses back to the same value.
std::string number_text(double x);
// Literal text for a complex constant, e.g. "(0.5+0.25*i)".
std::string complex_text(cplx c);

}  // namespace holoflow::expr
