#include <doctest.h>

#include "holoflow/expr.hpp"
#include "holoflow/generators.hpp"
#include "support.hpp"

using namespace holoflow;
using holoflow::testing::Gen;

namespace {

cplx at(const char* text, cplx z) { return expr::eval(expr::parse(text), z); }

cplx central_difference(const expr::Ast& a, cplx z, double h = 1e-6) {
  return (expr::eval(a, z + h) - expr::eval(a, z - h)) / (2 * h);
}

const char* kSamples[] = {
    "(1-z)^2",
    "exp(z)",
    "log((1+z)/(1-z))",
    "sqrt(1+z)*z^3-2*i*z",
    "((1+z)/(1-z))^0.5/(2*0.5)",
    "-0.5*(1-z^2)*log((1+z)/(1-z))",
    "-i*(1-z)^2*((i-z)/(1-i*z))^0.5",
    "(1-z)^3/(4*(1+z))",
    "exp(i*0.3*log((1+z)/(1-z)))*(2+z)^(1+z)",
    "z/(2-z)^-1.5",
};

}  // namespace

TEST_CASE("parse and evaluate") {
  CHECK(at("(1-z)^2", 0.0) == cplx(1, 0));
  CHECK(at("(1-z)^2", 0.5) == cplx(0.25, 0));
  CHECK(at("i*z", cplx(0, 1)) == cplx(-1, 0));
  CHECK(at("log((1+z)/(1-z))", 0.0) == cplx(0, 0));
  CHECK(at("log((1+z)/(1-z))", 0.5).real() == doctest::Approx(std::log(3.0)));
  CHECK(at("2^3^2", 0.0).real() == doctest::Approx(512.0));
  CHECK(at("8/4/2", 0.0).real() == doctest::Approx(1.0));
  CHECK(at("1-2-3", 0.0).real() == doctest::Approx(-4.0));
  // unary minus sits in base, so it binds tighter than the power
  CHECK(at("-z^2", 2.0).real() == doctest::Approx(4.0));
  CHECK(at("-(z^2)", 2.0).real() == doctest::Approx(-4.0));
}

TEST_CASE("parse errors carry the offset") {
  try {
    expr::parse("((1-z");
    FAIL("expected a parse error");
  } catch (const expr::ParseError& e) {
    CHECK(e.offset() == 5);
  }
  CHECK_THROWS_AS(expr::parse(""), expr::ParseError);
  CHECK_THROWS_AS(expr::parse("sin(z)"), expr::ParseError);
  CHECK_THROWS_AS(expr::parse("z+"), expr::ParseError);
  CHECK_THROWS_AS(expr::parse("1 2"), expr::ParseError);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(at("1/z", 0.0), expr::EvalError);
  CHECK_THROWS_AS(at("log(z)", 0.0), expr::EvalError);
  expr::EvalDiagnostics d;
  expr::eval(expr::parse("log(z)"), -1.0, &d);
  CHECK(d.branch_cut_hits == 1);
}

TEST_CASE("derivative examples") {
  auto d1 = expr::differentiate(expr::parse("(1-z)^2"));
  CHECK(std::abs(expr::eval(d1, 0.0) - cplx(-2, 0)) < 1e-15);
  auto e = expr::parse("exp(z)");
  auto de = expr::differentiate(e);
  Gen g(21);
  for (int k = 0; k < 20; ++k) {
    cplx z = g.disc_point(2.0);
    CHECK(std::abs(expr::eval(de, z) - expr::eval(e, z)) < 1e-12 * std::abs(expr::eval(e, z)));
  }
  auto zz = expr::parse("z^z");
  CHECK(std::abs(expr::eval(expr::differentiate(zz), 1.0) - 1.0) < 1e-12);
  CHECK(std::abs(central_difference(zz, 1.0) - 1.0) < 1e-8);
}

TEST_CASE("symbolic derivatives match finite differences") {
  Gen g(22);
  for (const char* text : kSamples) {
    auto a = expr::parse(text);
    auto da = expr::differentiate(a);
    for (int k = 0; k < 100; ++k) {
      cplx z = g.disc_point(0.9);
      cplx exact = expr::eval(da, z), fd = central_difference(a, z);
      CHECK_MESSAGE(holoflow::testing::rel_err(fd, exact) < 1e-6, text << " at " << z);
    }
  }
}

TEST_CASE("printing round-trips") {
  for (const char* text : kSamples) {
    auto a = expr::parse(text);
    auto b = expr::parse(expr::to_string(a));
    CHECK_MESSAGE(expr::structurally_equal(a, b), text);
    CHECK(expr::to_string(b) == expr::to_string(a));
  }
  for (const auto& gen : gallery_all())
    if (gen.direct_G) CHECK(expr::structurally_equal(*gen.direct_G, expr::parse(expr::to_string(*gen.direct_G))));
}

TEST_CASE("evaluation satisfies Cauchy-Riemann") {
  Gen g(23);
  for (const char* text : kSamples) {
    auto a = expr::parse(text);
    for (int k = 0; k < 50; ++k) {
      cplx z = g.disc_point(0.9);
      const double h = 1e-5;
      cplx fx = (expr::eval(a, z + h) - expr::eval(a, z - h)) / (2 * h);
      cplx fy = (expr::eval(a, z + cplx(0, h)) - expr::eval(a, z - cplx(0, h))) / (2 * h);
      // f_y = i f_x for holomorphic f
      double scale = std::max(1.0, std::abs(fx));
      CHECK_MESSAGE(std::abs(fy - cplx(0, 1) * fx) < 1e-8 * scale, text << " at " << z);
    }
  }
}
