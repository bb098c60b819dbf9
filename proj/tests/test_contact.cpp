#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "holoflow/contact.hpp"
#include "holoflow/flow.hpp"
#include "holoflow/koenigs.hpp"
#include "support.hpp"

using namespace holoflow;
using holoflow::testing::Gen;

namespace {

GeneratorSpec contact_alpha() { return gallery("contact_alpha", {{"alpha", 0.5}}); }

ArcScanOptions quick() {
  ArcScanOptions o;
  o.life_times = false;
  return o;
}

// (1/2pi) int_a^b Poisson kernel P_r(theta) d theta, for 0 < a < b < 2pi
double poisson_mass(double r, double a, double b) {
  double k = (1.0 + r) / (1.0 - r);
  auto F = [&](double th) { return std::atan(k * std::tan(0.5 * th)) / kPi; };
  // tan(theta/2) jumps at theta = pi
  if (a < kPi && b > kPi) return (0.5 - F(a)) + (F(b) + 0.5);
  return F(b) - F(a);
}

}  // namespace

TEST_CASE("radial tangency examples") {
  auto ca = radial_tangency(contact_alpha(), kPi);
  CHECK(ca.contact);
  CHECK(std::abs(ca.re_limit) < 1e-8);
  CHECK(ca.im_magnitude > 1e-3);

  auto dil = radial_tangency(gallery("dilation"), kPi);
  CHECK_FALSE(dil.contact);
  CHECK(std::abs(dil.re_limit + 1.0) < 1e-6);

  auto par = radial_tangency(gallery("parabolic"), kPi / 2);
  CHECK_FALSE(par.contact);
  CHECK(std::abs(par.re_limit + 2.0) < 1e-6);
}

TEST_CASE("parabolic tangency matches 2 cos theta - 2") {
  auto par = gallery("parabolic");
  Gen g(43);
  for (int k = 0; k < 20; ++k) {
    double th = g.uniform(0.3, kTwoPi - 0.3);
    CHECK(std::abs(radial_tangency(par, th).re_limit - (2.0 * std::cos(th) - 2.0)) < 1e-6);
  }
}

TEST_CASE("arc detection") {
  auto arcs = detect_arcs(contact_alpha(), quick());
  REQUIRE(arcs.size() == 1);
  const auto& a = arcs[0];
  CHECK(std::abs(angle_difference(a.interval.start, kPi / 2)) < 1e-4);
  CHECK(std::abs(angle_difference(a.interval.end(), 1.5 * kPi)) < 1e-4);
  CHECK(a.orientation == 1);
  CHECK(std::abs(a.x0.value() - cplx(0.0, 1.0)) < 1e-4);
  CHECK(std::abs(a.x1.value() - cplx(0.0, -1.0)) < 1e-4);

  CHECK(detect_arcs(gallery("dilation"), quick()).empty());
  CHECK(detect_arcs(gallery("parabolic"), quick()).empty());
  ArcScanOptions coarse = quick();
  coarse.resolution = 100;
  CHECK_THROWS_AS(detect_arcs(contact_alpha(), coarse), DomainError);
}

TEST_CASE("arc detection across alpha") {
  for (double al : {0.25, 0.5, 0.75}) {
    auto arcs = detect_arcs(gallery("contact_alpha", {{"alpha", al}}), quick());
    CAPTURE(al);
    REQUIRE(arcs.size() == 1);
    CHECK(std::abs(angle_difference(arcs[0].interval.start, kPi / 2)) < 1e-4);
    CHECK(std::abs(arcs[0].interval.length - kPi) < 2e-4);
  }
}

TEST_CASE("reported arcs pass the tangency grid test") {
  for (const auto& gen : gallery_all()) {
    auto arcs = detect_arcs(gen, quick());
    for (const auto& a : arcs) {
      CAPTURE(gen.name);
      for (int k = 1; k <= 128; ++k) {
        double th = a.interval.at(k / 129.0);
        auto cs = circle_sample(gen, th);
        CHECK(std::abs(cs.tangency) < 1e-8);
        CHECK(cs.abs_G > 1e-8);
      }
    }
  }
}

TEST_CASE("endpoint classes") {
  auto ca = contact_alpha();
  auto arcs = detect_arcs(ca, quick());
  REQUIRE(arcs.size() == 1);
  auto a = arcs[0];
  endpoint_classify(ca, a);
  CHECK(a.x0_class == InitialClass::contact_point);
  CHECK(a.x1_class == FinalClass::absorbed);
  CHECK(a.G_x1.infinite);
  // order +alpha at i: the radial limit of G is 0. The bisected endpoint is
  // within kArcEndpointTol of i and |G| ~ |theta - pi/2|^{1/2} beside it.
  CHECK_FALSE(a.G_x0.infinite);
  CHECK(std::abs(a.G_x0.value) < 2.0 * std::sqrt(kArcEndpointTol));
  auto exact = endpoint_value(ca, kPi / 2);
  CHECK_FALSE(exact.infinite);
  CHECK(std::abs(exact.value) < 1e-5);

  auto ad = gallery("arc_to_dw");
  auto adarcs = detect_arcs(ad, quick());
  REQUIRE(adarcs.size() == 1);
  auto b = adarcs[0];
  endpoint_classify(ad, b);
  CHECK(std::abs(b.x1.value() - 1.0) < 1e-4);
  CHECK(b.x1_class == FinalClass::dw_point);
  CHECK_FALSE(b.G_x1.infinite);
  CHECK(std::abs(b.G_x1.value) < 1e-6);
}

TEST_CASE("life-times") {
  auto ca = contact_alpha();
  auto arcs = detect_arcs(ca, quick());
  REQUIRE(arcs.size() == 1);
  auto mid = life_time(ca, arcs[0], kPi, 200.0);
  REQUIRE(mid.finite);
  CHECK(std::abs(angle_difference(mid.final_theta, 1.5 * kPi)) < 1e-6);

  // t1 = int d theta / v(theta) with v = Im{e^{-i theta} G(e^{i theta})}
  boost::math::quadrature::tanh_sinh<double> ts;
  auto speed = [&](double th) { return 1.0 / circle_sample(ca, th).velocity; };
  double oracle = ts.integrate(speed, kPi, 1.5 * kPi);
  CHECK(std::abs(mid.t1 - oracle) < 1e-5 * oracle);

  auto early = life_time(ca, arcs[0], arcs[0].interval.start + 1e-3, 200.0);
  REQUIRE(early.finite);
  CHECK(early.t1 > mid.t1);
  double oracle_early = ts.integrate(speed, arcs[0].interval.start + 1e-3, 1.5 * kPi);
  CHECK(std::abs(early.t1 - oracle_early) < 1e-5 * oracle_early);

  CHECK_THROWS_AS(life_time(ca, arcs[0], 0.1, 200.0), DomainError);

  auto ad = gallery("arc_to_dw");
  auto adarcs = detect_arcs(ad, quick());
  REQUIRE(adarcs.size() == 1);
  auto inf = life_time(ad, adarcs[0], adarcs[0].interval.midpoint(), 200.0);
  CHECK_FALSE(inf.finite);
}

TEST_CASE("boundary orbits stay inside the arc and move monotonically") {
  auto ca = contact_alpha();
  Gen g(47);
  for (int k = 0; k < 6; ++k) {
    double th = g.uniform(kPi / 2 + 0.01, 1.5 * kPi - 0.01);
    auto bf = boundary_flow(ca, th, 20.0);
    CHECK(bf.monotone);
    for (double v : bf.thetas) {
      CHECK(v >= th);
      CHECK(v <= 1.5 * kPi + 1e-6);
    }
  }
}

TEST_CASE("interior orbits shadow the boundary orbit") {
  auto ca = contact_alpha();
  for (double th : {kPi * 0.8, kPi, kPi * 1.2}) {
    auto bf = boundary_flow(ca, th, 0.05);
    REQUIRE(bf.stop == BoundaryStop::time_exhausted);
    cplx z = flow_point(ca, (1.0 - 1e-6) * unit_at(th), 0.05, 1e-12);
    CHECK(std::abs(z - unit_at(bf.final_theta)) < 1e-4);
  }
}

TEST_CASE("arcs contain no boundary fixed points") {
  auto ca = contact_alpha();
  RadialSchedule sched(4, 40);
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    double th = ArcInterval(kPi / 2, kPi).at(s);
    CHECK(boundary_value(ca, BoundaryPoint::from_angle(th), sched).tag == BoundaryTag::finite);
  }
}

TEST_CASE("Herglotz masses") {
  std::vector<double> radii = {0.9, 0.99, 0.999};
  auto ca = herglotz_mass(contact_alpha(), ArcInterval(kPi * 0.75, kPi / 2), radii);
  CHECK(ca.decreasing);
  CHECK(ca.masses.back() < 1e-3);
  for (double m : ca.masses) CHECK(m >= 0.0);

  ArcInterval arc(1.0, 2.5);
  auto one = herglotz_mass(HerglotzSpec::constant(1.0), arc, radii);
  for (double m : one.masses) CHECK(std::abs(m - 2.5 / kTwoPi) < 1e-12);

  auto kernel = herglotz_mass(HerglotzSpec::expression(expr::parse("(1+z)/(1-z)")), arc, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) CHECK(std::abs(kernel.masses[i] - poisson_mass(radii[i], 1.0, 3.5)) < 1e-8);
  CHECK(kernel.decreasing);

  CHECK_THROWS_AS(herglotz_mass(gallery("parabolic"), arc, {}), DomainError);
  CHECK_THROWS_AS(herglotz_mass(gallery("parabolic"), arc, {1.0}), DomainError);
}
