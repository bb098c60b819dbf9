#include <doctest.h>

#include <functional>
#include <string>

#include "holoflow/contact.hpp"
#include "holoflow/geometry.hpp"
#include "holoflow/koenigs.hpp"
#include "holoflow/report_json.hpp"
#include "holoflow/singularity.hpp"
#include "support.hpp"

using namespace holoflow;

namespace {

// Runs fn once per policy and restores the default.
std::pair<std::string, std::string> both(const std::function<std::string()>& fn) {
  ExecPolicy saved = default_policy();
  set_default_policy(ExecPolicy::serial);
  std::string s = fn();
  set_default_policy(ExecPolicy::openmp);
  std::string p = fn();
  set_default_policy(saved);
  return {s, p};
}

template <class T>
std::string dumped(const T& r) {
  return report::dump(report::to_json(r));
}

}  // namespace

TEST_CASE("arc scan") {
  auto ca = gallery("contact_alpha", {{"alpha", 0.5}});
  auto [s, p] = both([&] { return dumped(detect_arcs(ca)); });
  CHECK(s == p);
}

TEST_CASE("Herglotz mass") {
  auto ca = gallery("contact_alpha", {{"alpha", 0.5}});
  auto [s, p] = both([&] { return dumped(herglotz_mass(ca, ArcInterval(kPi * 0.75, kPi / 2), {0.9, 0.99, 0.999})); });
  CHECK(s == p);
}

TEST_CASE("classification sweeps") {
  for (const char* name : {"sector", "slit", "blaschke_osc"}) {
    auto gen = gallery(name);
    auto [s, p] = both([&] { return dumped(classify(gen, BoundaryPoint::from_angle(kPi), RadialSchedule(4, 24))); });
    CAPTURE(name);
    CHECK(s == p);
  }
  auto sec = gallery("sector", {{"alpha", 0.5}});
  auto [s, p] = both([&] {
    return dumped(thm11_crosscheck(sec, BoundaryPoint::from_angle(kPi), 0.5, {0.5, 1.0}, RadialSchedule(4, 24)));
  });
  CHECK(s == p);
}

TEST_CASE("corner shells") {
  auto dom = PlanarDomain::sector(0.0, 0.3, 1.2);
  auto [s, p] = both([&] { return dumped(dini_corner(dom, 0.0, 1.2)); });
  CHECK(s == p);
}

TEST_CASE("sector sampling") {
  auto comb = PlanarDomain::comb({0.5, 0.25, 0.125, 0.0625});
  auto [s, p] = both([&] { return dumped(sector_test(comb, cplx(-2.0, 0.5), cplx(1.0, 0.0), 1.0, 0.5)); });
  CHECK(s == p);
}

TEST_CASE("annulus cones") {
  auto comb = PlanarDomain::comb({0.5, 0.25, 0.125, 0.0625});
  auto [s, p] = both([&] { return dumped(bertilsson_alphas(comb, cplx(-3.0, 0.5), 2.0, 30)); });
  CHECK(s == p);
}

TEST_CASE("strip cross-sections") {
  auto [s, p] = both([&] { return dumped(rw_subdivision(PlanarDomain::strip(0.0, 1.0), {1.0, 50.0, 1000})); });
  CHECK(s == p);
}

TEST_CASE("hull sampling") {
  KoenigsEvaluator k(gallery("sector", {{"alpha", 0.5}}));
  auto dom = PlanarDomain::sector(-1.0, 0.0, 0.4 * kPi);
  auto [s, p] = both([&] {
    auto r = koenigs_image_hull_check(k, dom, -1.0, 2.0, 32);
    return std::to_string(r.checked) + "/" + std::to_string(r.outside_hull);
  });
  CHECK(s == p);
}
