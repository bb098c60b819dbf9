#include <doctest.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

const std::string kData = HOLOFLOW_TEST_DATA;

Run run(const std::string& args) {
  std::string cmd = std::string(HOLOFLOW_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json parsed(const Run& r) { return nlohmann::json::parse(r.out); }

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("flow csv") {
  auto r = run("flow --gallery parabolic --point 0.3,0 --t 5");
  REQUIRE(r.code == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() > 2);
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k][1] > rows[k - 1][1]);
  CHECK(std::abs(rows.back()[1] - 3.8 / 4.5) < 1e-9);

  auto zero = run("flow --gallery parabolic --point 0.3,0 --t 0");
  CHECK(zero.code == 0);
  CHECK(csv_rows(zero.out).size() == 1);
}

TEST_CASE("flow json and svg") {
  auto j = run("flow --gallery dilation --point 0.5,0 --t 1 --format json");
  REQUIRE(j.code == 0);
  CHECK(std::abs(parsed(j)["final_point"][0].get<double>() - 0.5 * std::exp(-1.0)) < 1e-9);
  auto s = run("flow --gallery parabolic --format svg --t 3");
  REQUIRE(s.code == 0);
  CHECK(s.out.rfind("<svg", 0) == 0);
  CHECK(s.out.find("</svg>") != std::string::npos);
}

TEST_CASE("classify") {
  auto sec = run("classify --gallery sector --param alpha=0.5 --theta 3.141592653589793");
  REQUIRE(sec.code == 0);
  auto js = parsed(sec);
  CHECK(js["classification"] == "regular-fractional");
  CHECK(std::abs(js["alpha"].get<double>() - 0.5) < 0.02);
  CHECK(std::abs(js["M"][0].get<double>() - 2.0 * std::sqrt(2.0)) < 0.02);

  auto slit = run("classify --gallery slit --point -1,0");
  REQUIRE(slit.code == 0);
  auto jl = parsed(slit);
  CHECK(jl["classification"] == "regular-pole");
  CHECK(std::abs(jl["pole_mass"].get<double>() - 2.0) < 0.01);

  auto dil = run("classify --gallery dilation --point 1,0");
  CHECK(dil.code == 0);
  auto par = run("classify --gallery parabolic --point 1,0");
  REQUIRE(par.code == 0);
  CHECK(parsed(par)["classification"] == "dw-point");
}

TEST_CASE("contact") {
  auto ca = run("contact --generator " + kData + "/contact_alpha.json");
  REQUIRE(ca.code == 0);
  auto arcs = parsed(ca);
  CHECK(arcs["count"] == 1);
  REQUIRE(arcs["arcs"].size() == 1);

  auto dil = run("contact --gallery dilation");
  CHECK(dil.code == 0);
  CHECK(parsed(dil)["count"] == 0);
  CHECK(parsed(dil)["arcs"].empty());

  auto svg = run("contact --gallery contact_alpha --format svg");
  CHECK(svg.code == 0);
  CHECK(svg.out.rfind("<svg", 0) == 0);
}

TEST_CASE("geometry") {
  auto slit = run("geometry --domain " + kData + "/slit_plane.json --criteria bertilsson");
  REQUIRE(slit.code == 0);
  auto js = parsed(slit)["bertilsson"];
  CHECK(js["verdict"] == "converges");
  CHECK(js["partial_sums"].back().get<double>() == 0.0);

  auto sec = run("geometry --domain " + kData + "/sector_half_pi.json --criteria bertilsson");
  REQUIRE(sec.code == 0);
  CHECK(parsed(sec)["bertilsson"]["verdict"] == "diverges");

  auto comb = run("geometry --domain " + kData + "/comb.json --criteria sector --point -2,0.5 --direction 3.141592653589793 --theta 0.5 --rho 0.4");
  REQUIRE(comb.code == 0);
  CHECK(parsed(comb)["sector"]["contained"] == false);

  auto strip = run("geometry --domain " + kData + "/unit_strip.json --criteria rw --u-max 100");
  REQUIRE(strip.code == 0);
  CHECK(parsed(strip)["rw"]["verdict"] == "yes");
}

TEST_CASE("identical runs give identical bytes") {
  std::string args = "geometry --domain " + kData + "/comb.json --criteria sector,bertilsson --point -2,0.5 --theta 1 --seed 5";
  auto a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto c = run("classify --gallery sector --theta 3.141592653589793 --schedule 4:24");
  auto d = run("classify --gallery sector --theta 3.141592653589793 --schedule 4:24");
  CHECK(c.out == d.out);
}

TEST_CASE("exit codes for configuration errors") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("flow --expr \"(1-z\" --point 0.1,0").code == 2);
  CHECK(run("flow --gallery parabolic").code == 2);
  CHECK(run("flow --gallery parabolic --expr z --point 0.1,0").code == 2);
  CHECK(run("flow --gallery nope --point 0.1,0").code == 2);
  CHECK(run("flow --gallery parabolic --point 2,0").code == 2);
  CHECK(run("flow --gallery parabolic --point 0.1,0 --format xml").code == 2);
  CHECK(run("contact --generator " + kData + "/corrupt.json").code == 2);
  CHECK(run("contact --generator /nonexistent/file.json").code == 2);
  CHECK(run("geometry --domain " + kData + "/square.json --criteria nothing").code == 2);
  CHECK(run("classify --gallery parabolic").code == 2);
}

TEST_CASE("exit code for numerical failures") {
  // two schedule radii leave no slope window
  CHECK(run("classify --gallery dilation --theta 0 --schedule 4:5").code == 3);
}
