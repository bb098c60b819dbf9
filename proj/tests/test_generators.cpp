#include <doctest.h>

#include "holoflow/blaschke.hpp"
#include "holoflow/generators.hpp"
#include "mp_oracle.hpp"
#include "support.hpp"

using namespace holoflow;
using holoflow::testing::Gen;

TEST_CASE("Berkson-Porta assembly") {
  auto parabolic = make_generator(1.0, HerglotzSpec::constant(1.0));
  CHECK(std::abs(berkson_porta_eval(parabolic, DiscPoint(0.0)) - 1.0) < 1e-15);
  auto dil = make_generator(0.0, HerglotzSpec::constant(1.0));
  CHECK(std::abs(berkson_porta_eval(dil, DiscPoint(0.5)) + 0.5) < 1e-15);
  // (1.9)^2 (0.1/1.9)^0.5 / (2 * 0.5)
  double want = 1.9 * 1.9 * std::sqrt(0.1 / 1.9);
  CHECK(berkson_porta_eval(gallery("sector", {{"alpha", 0.5}}), DiscPoint(-0.9)).real() ==
        doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(0.8281).epsilon(1e-4));
}

TEST_CASE("both routes must agree") {
  CHECK_NOTHROW(make_generator(1.0, HerglotzSpec::constant(1.0), expr::parse("(1-z)^2")));
  CHECK_THROWS_AS(make_generator(1.0, HerglotzSpec::constant(1.0), expr::parse("(1-z)^2*1.001")), DomainError);
}

TEST_CASE("Herglotz validation") {
  auto kernel = herglotz_validate(HerglotzSpec::expression(expr::parse("(1+z)/(1-z)")), 32);
  CHECK(kernel.valid);
  CHECK(kernel.min_re >= 0.0);
  CHECK(kernel.min_re < 1e-2);
  auto bad = herglotz_validate(HerglotzSpec::expression(expr::parse("z")), 32);
  CHECK_FALSE(bad.valid);
  CHECK(bad.min_re < 0.0);
  CHECK_THROWS_AS(make_generator(1.0, HerglotzSpec::expression(expr::parse("z"))), InvalidGenerator);
  // boundary case sinh a = pi (1 - |alpha|) / 2
  auto wobble = gallery("strip_wobble", {{"alpha", 0.5}});
  CHECK(herglotz_validate(*wobble.p, 32, 64).valid);
}

TEST_CASE("every gallery generator has a Herglotz p") {
  for (const auto& g : gallery_all()) {
    REQUIRE_MESSAGE(g.p, g.name);
    auto rep = herglotz_validate(*g.p, 32, 64, 1e-9);
    CHECK_MESSAGE(rep.valid, g.name << " min Re p = " << rep.min_re);
  }
}

TEST_CASE("gallery anchors and parameters") {
  auto ca = gallery("contact_alpha", {{"alpha", 0.5}});
  CHECK(std::abs(ca.G(0.0) - cplx(0, -1) * std::polar(1.0, kPi / 4)) < 1e-12);
  auto ll = gallery("loglinear");
  CHECK(std::abs(ll.G(0.0)) < 1e-15);
  for (cplx z : {cplx(0.3, 0.2), cplx(-0.5, 0.1)})
    CHECK(std::abs(ll.G(z) - (-0.5 * (1.0 - z * z) * std::log((1.0 + z) / (1.0 - z)))) < 1e-14);
  CHECK(std::abs(gallery("parabolic").G(0.0) - 1.0) < 1e-15);
  auto slit = gallery("slit");
  cplx z(0.2, -0.4);
  CHECK(std::abs(slit.G(z) - std::pow(1.0 - z, 3) / (4.0 * (1.0 + z))) < 1e-13);
  auto nrs = gallery("no_reg_sing");
  CHECK(std::abs((*nrs.p)(0.0) - 1.0) < 1e-12);
  CHECK_THROWS_AS(gallery("nope"), DomainError);
  CHECK_THROWS_AS(gallery("sector", {{"alpha", 0.0}}), DomainError);
  CHECK_THROWS_AS(gallery("sector", {{"alpha", 1.0}}), DomainError);
  CHECK_THROWS_AS(gallery("sector", {{"beta", 0.5}}), DomainError);
  CHECK_THROWS_AS(gallery("strip_wobble", {{"alpha", 0.5}, {"a", 2.0}}), DomainError);
}

TEST_CASE("G' agrees with the derivative of G") {
  Gen g(31);
  for (const auto& gen : gallery_all()) {
    for (int k = 0; k < 20; ++k) {
      cplx z = g.disc_point(0.9);
      const double h = 1e-6;
      cplx fd = (gen.G(z + h) - gen.G(z - h)) / (2 * h);
      CHECK_MESSAGE(holoflow::testing::rel_err(fd, gen.G_prime(z)) < 1e-6, gen.name << " at " << z);
    }
  }
}

TEST_CASE("log-domain Blaschke values") {
  BlaschkeHyperbolic one({2.0});
  CHECK(std::isinf(blaschke_log_eval(one, 2.0).log_abs));
  CHECK(std::abs(blaschke_log_eval(one, 60.0).log_abs) < 1e-20);
  auto b6 = BlaschkeHyperbolic::factorial(6);
  auto v = blaschke_log_eval(b6, 15.0);
  CHECK(v.sign == -1);
  auto mp = holoflow::testing::mp_blaschke(b6.a(), 15.0);
  CHECK(mp.sign == -1);
  CHECK(std::abs(v.log_abs - mp.log_abs) < 1e-12 * std::abs(mp.log_abs));
  CHECK(v.log_abs < -1e-4);
  CHECK(v.log_abs > -1e-2);
}

TEST_CASE("log-domain values agree with the naive product") {
  // Both paths must see the same doubles: near a_n = 30 one ulp in x_n or z
  // moves a factor by ~1e-16 / (1 - x_n), so zeros and sample points are
  // materialized first and their s coordinates recomputed from them.
  auto s_of = [](double x) { return std::log1p(x) - std::log1p(-x); };
  std::vector<double> a;
  for (double an : {0.5, 1.7, 3.0, 6.5, 11.0, 24.0, 30.0}) a.push_back(s_of(std::tanh(an / 2)));
  BlaschkeHyperbolic b(a);
  Gen g(32);
  for (int k = 0; k < 200; ++k) {
    double x = std::tanh(g.uniform(0.01, 36.0) / 2);
    auto v = blaschke_log_eval(b, s_of(x));
    cplx naive = b.eval_naive(x);
    CHECK(std::abs(v.sign * std::exp(v.log_abs) - naive.real()) < 1e-10);
    cplx z = g.disc_point(0.99);
    CHECK(std::abs(b.eval(z).f - b.eval_naive(z)) < 1e-10);
  }
}

TEST_CASE("oscillation ratio matches the extended-precision product") {
  auto b = BlaschkeHyperbolic::factorial(8);
  for (int j = 3; j <= 6; ++j) {
    double s = hyperbolic_midpoint(b, j);
    auto mp = holoflow::testing::mp_blaschke(b.a(), s);
    double oracle = (j % 2 == 1 ? 1.0 : -1.0) * mp.log_abs_mobius / mp.log_one_minus_z;
    CHECK_MESSAGE(std::abs(oscillation_ratio(b, j) - oracle) < 1e-8, "j=" << j);
  }
}

TEST_CASE("oscillation ratio does not depend on the truncation") {
  auto b8 = BlaschkeHyperbolic::factorial(8), b9 = BlaschkeHyperbolic::factorial(9);
  for (int j = 3; j <= 6; ++j) CHECK(std::abs(oscillation_ratio(b8, j) - oscillation_ratio(b9, j)) < 1e-6);
}
