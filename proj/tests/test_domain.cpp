#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "holoflow/domain.hpp"
#include "support.hpp"

using namespace holoflow;
using holoflow::testing::Gen;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(HOLOFLOW_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("slit plane membership") {
  auto d = PlanarDomain::slit_plane(0.0, kPi);
  CHECK(d.membership(1.0) == Membership::inside);
  CHECK(d.membership(-1.0) != Membership::inside);
  CHECK(d.membership(cplx(-1.0, 1e-3)) == Membership::inside);
  CHECK(d.membership(cplx(-1.0, 1e-12)) == Membership::boundary_band);
}

TEST_CASE("sector membership") {
  auto d = PlanarDomain::sector(0.0, 0.0, kPi / 2);
  CHECK(d.membership(unit_at(kPi / 8)) == Membership::inside);
  CHECK(d.membership(unit_at(kPi / 3)) == Membership::outside);
  CHECK(d.membership(unit_at(-kPi / 8)) == Membership::inside);
  CHECK(d.membership(unit_at(kPi)) == Membership::outside);
  CHECK(d.membership(unit_at(kPi / 4)) == Membership::boundary_band);
}

TEST_CASE("comb membership") {
  std::vector<double> deltas = {0.5, 0.25, 0.125, 0.0625};
  auto d = PlanarDomain::comb(deltas);
  for (std::size_t n = 1; n <= deltas.size(); ++n) {
    double x = -2.0 * n;
    CHECK(d.membership(cplx(x, deltas[n - 1])) != Membership::inside);
    CHECK(d.membership(cplx(x - 0.5, -deltas[n - 1])) != Membership::inside);
    CHECK(d.membership(cplx(x + 0.5, deltas[n - 1])) == Membership::inside);
  }
  CHECK(d.membership(cplx(0.0, 0.9)) == Membership::inside);
  CHECK(d.membership(cplx(0.0, 1.1)) == Membership::outside);
  CHECK(d.membership(cplx(-3.0, 0.3)) == Membership::inside);
}

TEST_CASE("strip membership") {
  auto d = PlanarDomain::strip(0.0, 1.0);
  CHECK(d.membership(cplx(1e6, 0.49)) == Membership::inside);
  CHECK(d.membership(cplx(-1e6, -0.51)) == Membership::outside);
}

TEST_CASE("closed chains answer membership by ray casting") {
  auto sq = PlanarDomain::from_json_text(slurp("square.json"));
  CHECK(sq.has_membership());
  CHECK(sq.membership(cplx(0.5, 0.5)) == Membership::inside);
  CHECK(sq.membership(cplx(1.5, 0.5)) == Membership::outside);
  CHECK(sq.membership(cplx(1.0, 0.5)) == Membership::boundary_band);

  // disc of radius 2 as a single closed arc
  auto disc = PlanarDomain::from_chain({ChainPiece::arc(0.0, 2.0, 0.0, kTwoPi)}, true);
  Gen g(53);
  for (int k = 0; k < 200; ++k) {
    cplx w(g.uniform(-3, 3), g.uniform(-3, 3));
    if (std::abs(std::abs(w) - 2.0) < 1e-3) continue;
    CHECK((disc.membership(w) == Membership::inside) == (std::abs(w) < 2.0));
  }
}

TEST_CASE("domain files") {
  auto slit = PlanarDomain::from_json_text(slurp("slit_plane.json"));
  CHECK(slit.kind() == DomainKind::slit_plane);
  CHECK(slit.translation_invariant());
  CHECK(slit.membership(0.0) == Membership::inside);
  CHECK(slit.membership(-2.0) != Membership::inside);

  auto sec = PlanarDomain::from_json_text(slurp("sector_half_pi.json"));
  CHECK(sec.kind() == DomainKind::sector);
  CHECK(std::abs(sec.opening() - kPi / 2) < 1e-15);
  CHECK(sec.vertex() == cplx(-1.0, 0.0));

  auto comb = PlanarDomain::from_json_text(slurp("comb.json"));
  CHECK(comb.kind() == DomainKind::comb);
  REQUIRE(comb.escape_directions().size() == 2);

  CHECK(PlanarDomain::from_json_text(slurp("unit_strip.json")).kind() == DomainKind::strip);
}

TEST_CASE("malformed domain files are rejected") {
  CHECK_THROWS_AS(PlanarDomain::from_json_text("{"), DomainError);
  CHECK_THROWS_AS(PlanarDomain::from_json_text("{}"), DomainError);
  CHECK_THROWS_AS(PlanarDomain::from_json_text(R"({"kind": "blob"})"), DomainError);
  CHECK_THROWS_AS(PlanarDomain::from_json_text(R"({"kind": "sector", "vertex": [0, 0]})"), DomainError);
  CHECK_THROWS_AS(PlanarDomain::from_json_text(R"({"kind": "polygon", "vertices": [[0, 0], [1, 0]]})"), DomainError);
  CHECK_THROWS_AS(PlanarDomain::from_json_text(R"({"kind": "chain", "pieces": [{"type": "spline"}]})"), DomainError);
  CHECK_THROWS_AS(PlanarDomain::sector(0.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(PlanarDomain::strip(0.0, -1.0), DomainError);
}

TEST_CASE("circle intersections of pieces") {
  auto seg = ChainPiece::segment(cplx(-2.0, 0.5), cplx(2.0, 0.5));
  auto hits = seg.circle_intersections(0.0, 1.0);
  REQUIRE(hits.size() == 2);
  for (cplx h : hits) CHECK(std::abs(std::abs(h) - 1.0) < 1e-14);

  auto ray = ChainPiece::ray(cplx(1.0, 0.0), 0.0);
  // far from the origin a tiny circle around a point of the ray
  auto tiny = ray.circle_intersections(cplx(1e3, 0.0), 1e-9);
  REQUIRE(tiny.size() == 2);
  for (cplx h : tiny) CHECK(std::abs(std::abs(h - cplx(1e3, 0.0)) - 1e-9) < 1e-12);
}

TEST_CASE("translation preserves membership") {
  Gen g(59);
  std::vector<PlanarDomain> doms = {PlanarDomain::sector(cplx(-1.0, 0.5), 0.4, 2.0), PlanarDomain::slit_plane(-1.0, kPi),
                                    PlanarDomain::strip(0.25, 1.0), PlanarDomain::comb({0.5, 0.25, 0.125})};
  for (const auto& d : doms) {
    cplx v(g.uniform(-2, 2), g.uniform(-1, 1));
    auto t = d.translated(v);
    for (int k = 0; k < 200; ++k) {
      cplx w(g.uniform(-5, 5), g.uniform(-1.2, 1.2));
      CAPTURE(to_string(d.kind()));
      CHECK(t.membership(w - v) == d.membership(w));
    }
  }
}

TEST_CASE("the sharp side test resolves points below the band scale") {
  auto d = PlanarDomain::sector(-1.0, 0.0, kPi / 2).translated(-1.0);
  cplx in = 1e-12 * unit_at(0.1), out = 1e-12 * unit_at(2.0);
  CHECK(d.membership(in) == Membership::boundary_band);
  CHECK(d.contains(in));
  CHECK_FALSE(d.contains(out));
}
