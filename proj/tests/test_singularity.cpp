#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "holoflow/contact.hpp"
#include "holoflow/flow.hpp"
#include "holoflow/koenigs.hpp"
#include "holoflow/singularity.hpp"
#include "support.hpp"

using namespace holoflow;
using holoflow::testing::Gen;

namespace {

const RadialSchedule kSched(4, 48);
BoundaryPoint at(double theta) { return BoundaryPoint::from_angle(theta); }

int tag_count(const SingularityReport& r) {
  int n = 0;
  for (auto c : {SingularityClass::regular_pole, SingularityClass::regular_null, SingularityClass::regular_fractional,
                 SingularityClass::non_regular, SingularityClass::dw_point})
    n += r.classification == c;
  return n;
}

}  // namespace

TEST_CASE("order estimates") {
  auto sec = order_estimate(gallery("sector", {{"alpha", 0.5}}), at(kPi), kSched);
  CHECK(std::abs(sec.alpha_plus - 0.5) < 0.02);
  CHECK(std::abs(sec.alpha_minus - 0.5) < 0.02);
  CHECK(sec.single);
  auto dil = order_estimate(gallery("dilation"), at(kPi), kSched);
  CHECK(std::abs(dil.alpha_plus) < 0.02);
  CHECK(std::abs(dil.alpha_minus) < 0.02);
  auto slit = order_estimate(gallery("slit"), at(kPi), kSched);
  CHECK(std::abs(slit.alpha_plus + 1.0) < 0.02);
  CHECK(order_estimate(gallery("parabolic"), at(0.0), kSched).dw_point);
}

TEST_CASE("order estimates across the sector family") {
  for (double a : {-0.75, -0.5, -0.25, 0.25, 0.5, 0.75}) {
    auto o = order_estimate(gallery("sector", {{"alpha", a}}), at(kPi), kSched);
    CAPTURE(a);
    CHECK(std::abs(o.alpha_plus - a) < 0.02);
    CHECK(std::abs(o.alpha_minus - a) < 0.02);
  }
}

TEST_CASE("blaschke_osc windowed slopes swing between -1 and 1") {
  auto o = order_estimate(gallery("blaschke_osc"), at(0.0), kSched);
  double hi = *std::max_element(o.slopes.begin(), o.slopes.end());
  double lo = *std::min_element(o.slopes.begin(), o.slopes.end());
  CHECK(hi > 0.99);
  CHECK(lo < -0.99);
}

TEST_CASE("regular singularities") {
  auto sec = regular_singularity(gallery("sector", {{"alpha", 0.5}}), at(kPi), 0.5, kSched);
  REQUIRE(sec.regular);
  CHECK(holoflow::testing::rel_err(sec.M, 2.0 * std::sqrt(2.0)) < 1e-3);
  auto slit = regular_singularity(gallery("slit"), at(kPi), -1.0, kSched);
  REQUIRE(slit.regular);
  CHECK(holoflow::testing::rel_err(slit.M, 2.0) < 1e-3);
  CHECK_FALSE(regular_singularity(gallery("loglinear"), at(kPi), 1.0, kSched).regular);
}

TEST_CASE("M matches the closed form on the sector family") {
  // zeta(-r) = (1-r)/(1+r), so G(-r) / (1-r)^a = (1+r)^{2-a} / (2(1-a))
  for (double a : {-0.5, 0.25, 0.5, 0.75}) {
    auto r = regular_singularity(gallery("sector", {{"alpha", a}}), at(kPi), a, kSched);
    CAPTURE(a);
    REQUIRE(r.regular);
    double expect = std::pow(2.0, 2.0 - a) / (2.0 * (1.0 - a));
    CHECK(holoflow::testing::rel_err(r.M, expect) < 1e-3);
  }
}

TEST_CASE("nontangential consistency") {
  auto sec = nontangential_check(gallery("sector", {{"alpha", 0.5}}), at(kPi), 0.5, kSched, {kPi / 4});
  CHECK(sec.consistent);
  REQUIRE(sec.rays.size() == 1);
  CHECK(holoflow::testing::rel_err(sec.rays[0].M, 2.0 * std::sqrt(2.0)) < 1e-2);
  auto slit = nontangential_check(gallery("slit"), at(kPi), -1.0, kSched, {-kPi / 3});
  CHECK(slit.consistent);
  CHECK(holoflow::testing::rel_err(slit.rays[0].M, 2.0) < 1e-2);
  CHECK_FALSE(nontangential_check(gallery("strip_wobble"), at(0.0), 0.5, kSched).consistent);
}

TEST_CASE("regularity holds exactly when the order is single and the phase settles") {
  for (double a : {-0.5, 0.5}) {
    auto g = gallery("sector", {{"alpha", a}});
    auto o = order_estimate(g, at(kPi), kSched);
    CHECK((o.single && o.alpha && std::abs(*o.alpha - a) < 0.02));
    CHECK(regular_singularity(g, at(kPi), a, kSched).regular);
  }
  auto slit = gallery("slit");
  CHECK(order_estimate(slit, at(kPi), kSched).single);
  CHECK(regular_singularity(slit, at(kPi), -1.0, kSched).regular);

  auto sw = gallery("strip_wobble");
  auto o = order_estimate(sw, at(0.0), kSched);
  CHECK_FALSE(regular_singularity(sw, at(0.0), o.alpha.value_or(o.alpha_plus), kSched).regular);
  auto bo = gallery("blaschke_osc");
  for (double a : {-1.0, 1.0}) CHECK_FALSE(regular_singularity(bo, at(0.0), a, kSched).regular);
}

TEST_CASE("pole masses") {
  auto slit = pole_mass(gallery("slit"), at(kPi), kSched);
  CHECK(slit.converged);
  CHECK(std::abs(slit.C - 2.0) < 1e-6);
  CHECK(std::abs(pole_mass(gallery("sector", {{"alpha", 0.5}}), at(kPi), kSched).C) < 1e-6);
  CHECK(std::abs(pole_mass(gallery("dilation"), at(kPi), kSched).C) < 1e-6);
}

TEST_CASE("dilations") {
  CHECK_FALSE(dilation(gallery("dilation"), at(kPi), kSched).null_point);
  CHECK_FALSE(dilation(gallery("parabolic"), at(kPi), kSched).null_point);
  // G = (1 - z^2)/2: G(-r) / (1 - r) = (1 + r)/2 -> 1
  auto h = dilation(gallery("hyperbolic"), at(kPi), kSched);
  CHECK(h.null_point);
  CHECK(std::abs(h.ell - 1.0) < 1e-6);
  CHECK_FALSE(h.nonreal);
}

TEST_CASE("boundary dilatation coefficients") {
  auto sched = kSched.clipped(30);
  auto id = dilatation_coeff(MapKind::phi_t, gallery("dilation"), at(kPi), sched, 0.0);
  CHECK(id.finite);
  CHECK(std::abs(id.value - 1.0) < 1e-9);
  CHECK_FALSE(dilatation_coeff(MapKind::phi_t, gallery("dilation"), at(kPi), sched, 1.0).finite);

  // i is a contact point of phi_t for small t (its orbit runs along the arc) but
  // not a regular one: phi_t' grows like (1-r)^{-1/2} there
  auto ca = gallery("contact_alpha", {{"alpha", 0.5}});
  auto c = dilatation_coeff(MapKind::phi_t, ca, at(kPi / 2), sched, 0.1);
  CHECK_FALSE(c.finite);
  double prev = 1.0;
  for (int k = 8; k <= 24; k += 4) {
    double g = std::ldexp(1.0, -k);
    double dist = 1.0 - std::abs(flow_point(ca, (1.0 - g) * cplx(0.0, 1.0), 0.1, 1e-12));
    CHECK(dist < prev);
    prev = dist;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("repelling order: not a contact point for alpha in (-1, 0)") {
  auto ca = gallery("contact_alpha", {{"alpha", 0.5}});
  auto rep = classify(ca, at(1.5 * kPi), kSched);
  REQUIRE(rep.classification == SingularityClass::regular_fractional);
  REQUIRE(rep.alpha);
  CHECK(*rep.alpha < 0.0);
  CHECK_FALSE(dilatation_coeff(MapKind::phi_t, ca, at(1.5 * kPi), kSched.clipped(30), 0.5).finite);
  auto sec = gallery("sector", {{"alpha", -0.5}});
  CHECK_FALSE(dilatation_coeff(MapKind::phi_t, sec, at(kPi), kSched.clipped(30), 0.5).finite);
}

TEST_CASE("beta points") {
  auto sched = kSched.clipped(30);
  auto slit = beta_point_test(gallery("slit"), 1.0, at(kPi), sched);
  CHECK(slit.beta_point);
  CHECK(slit.agrees_with_pole);
  auto sec = beta_point_test(gallery("sector", {{"alpha", 0.5}}), 1.0, at(kPi), sched);
  CHECK_FALSE(sec.beta_point);
  CHECK(sec.agrees_with_pole);
  CHECK_FALSE(beta_point_test(gallery("dilation"), 1.0, at(kPi), sched).beta_point);
}

TEST_CASE("cross-equivalence harness on the sector") {
  auto r = thm11_crosscheck(gallery("sector", {{"alpha", 0.5}}), at(kPi), 0.5, {0.5, 1.0}, RadialSchedule(4, 24));
  CHECK_FALSE(r.partial);
  REQUIRE(r.H_prime);
  REQUIRE(r.H);
  CHECK(std::abs(*r.H_prime - 0.5 * std::pow(2.0, -0.5)) < 1e-4);
  CHECK(std::abs(*r.H - std::pow(2.0, -0.5)) < 1e-4);
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
  }
}

TEST_CASE("cross-equivalence harness on the slit with one time") {
  auto r = thm11_crosscheck(gallery("slit"), at(kPi), -1.0, {1.0}, RadialSchedule(4, 24));
  CHECK_FALSE(r.partial);
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
  }
  CHECK_THROWS_AS(thm11_crosscheck(gallery("sector", {{"alpha", 0.5}}), at(kPi), 0.5, {1.0}, kSched), DomainError);
}

TEST_CASE("the arc traversal time is the exceptional time") {
  auto ca = gallery("contact_alpha", {{"alpha", 0.5}});
  // traversal time i -> -i from the Abel equation h(phi_t) = h + t on the circle
  RadialSchedule sched(4, 40);
  auto h0 = boundary_value(ca, at(kPi / 2), sched), h1 = boundary_value(ca, at(1.5 * kPi), sched);
  REQUIRE(h0.tag == BoundaryTag::finite);
  REQUIRE(h1.tag == BoundaryTag::finite);
  cplx t1 = h1.value - h0.value;
  CHECK(std::abs(t1.imag()) < 1e-8);

  // life-times from just inside the arc increase toward t1
  ArcScanOptions opts;
  opts.life_times = false;
  auto arcs = detect_arcs(ca, opts);
  REQUIRE(arcs.size() == 1);
  double prev = 0.0;
  for (double d : {1e-4, 1e-5, 1e-6}) {
    auto lt = life_time(ca, arcs[0], kPi / 2 + d, 200.0);
    REQUIRE(lt.finite);
    CHECK(lt.t1 > prev);
    CHECK(lt.t1 < t1.real());
    prev = lt.t1;
  }
  CHECK(t1.real() - prev < 5e-3);

  auto r = thm11_crosscheck(ca, at(kPi / 2), 0.5, {0.5 * t1.real(), t1.real()}, RadialSchedule(4, 30));
  REQUIRE(r.L.size() == 2);
  CHECK(r.L[0].finite);
  CHECK_FALSE(r.L[1].finite);
}

TEST_CASE("classification") {
  auto cls = [](const GeneratorSpec& g, double th) { return classify(g, at(th), kSched); };
  CHECK(cls(gallery("sector", {{"alpha", 0.5}}), kPi).classification == SingularityClass::regular_fractional);
  auto slit = cls(gallery("slit"), kPi);
  CHECK(slit.classification == SingularityClass::regular_pole);
  CHECK(std::abs(slit.pole_mass - 2.0) < 1e-6);
  auto hyp = cls(gallery("hyperbolic"), kPi);
  CHECK(hyp.classification == SingularityClass::regular_null);
  CHECK(std::abs(hyp.dilation - 1.0) < 1e-6);
  CHECK(cls(gallery("parabolic"), 0.0).classification == SingularityClass::dw_point);
  CHECK(cls(gallery("strip_wobble"), 0.0).classification == SingularityClass::non_regular);
  CHECK(cls(gallery("blaschke_osc"), 0.0).classification == SingularityClass::non_regular);
  CHECK(cls(gallery("loglinear"), kPi).classification == SingularityClass::non_regular);
}

TEST_CASE("report invariants over the gallery") {
  Gen g(41);
  for (const auto& gen : gallery_all()) {
    for (int k = 0; k < 3; ++k) {
      double th = g.angle();
      auto r = classify(gen, at(th), RadialSchedule(4, 40));
      CAPTURE(gen.name);
      CAPTURE(th);
      CHECK(tag_count(r) == 1);
      CHECK(r.alpha_minus <= r.alpha_plus);
      if (r.classification != SingularityClass::dw_point) {
        CHECK(r.alpha_minus >= -1.0 - kOrderSlack);
        CHECK(r.alpha_plus <= 1.0 + kOrderSlack);
      }
    }
  }
}

TEST_CASE("radial probe serial and parallel agree bit for bit") {
  auto gen = gallery("sector", {{"alpha", 0.5}});
  auto f = [&](cplx z) { return gen.G(z); };
  auto a = radial_probe(f, at(kPi), kSched, 1e-4, ExecPolicy::serial);
  auto b = radial_probe(f, at(kPi), kSched, 1e-4, ExecPolicy::openmp);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i] == b.samples[i]);
  CHECK(a.limit.value == b.limit.value);
}
