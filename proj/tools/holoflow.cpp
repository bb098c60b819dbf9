// holoflow: command-line front end for the semigroup toolkit.
//
// Exit codes: 0 success, 2 configuration or parse error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "holoflow/contact.hpp"
#include "holoflow/flow.hpp"
#include "holoflow/geometry.hpp"
#include "holoflow/report_json.hpp"
#include "holoflow/singularity.hpp"

using namespace holoflow;
namespace rj = holoflow::report;

namespace {

struct Config {
  std::string generator_file, expr_text, gallery_name, domain_file;
  std::vector<std::string> params;
  std::string tau_text, point_text, schedule_text, format, out_path, t_text, criteria = "bertilsson";
  std::optional<double> theta, alpha;
  double T = 5.0;
  double tol = 1e-10;
  std::uint64_t seed = kDefaultSeed;
  // contact
  int resolution = kArcDefaultResolution;
  double horizon = 200.0;
  // geometry
  double direction = 0.0, rho = 0.1, gamma = 2.0, u0 = 1.0, u_max = 1e3;
  int k_max = 30;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cplx parse_complex(const std::string& text, const char* flag) {
  std::istringstream in(text);
  double re = 0, im = 0;
  char comma = 0;
  if (!(in >> re) || !(in >> comma) || comma != ',' || !(in >> im) || !(in >> std::ws).eof())
    throw DomainError(std::string(flag) + " expects re,im");
  return {re, im};
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw DomainError(std::string(flag) + " expects comma-separated numbers");
    }
  }
  return out;
}

GeneratorSpec load_generator(const Config& c) {
  int sources = int(!c.generator_file.empty()) + int(!c.expr_text.empty()) + int(!c.gallery_name.empty());
  if (sources != 1) throw DomainError("give exactly one of --generator, --expr, --gallery");
  if (!c.params.empty() && c.gallery_name.empty()) throw DomainError("--param only applies to --gallery");
  if (!c.tau_text.empty() && c.expr_text.empty()) throw DomainError("--tau only applies to --expr");
  if (!c.generator_file.empty()) return rj::generator_from_json_text(read_file(c.generator_file));
  if (!c.expr_text.empty()) {
    std::optional<cplx> tau;
    if (!c.tau_text.empty()) tau = parse_complex(c.tau_text, "--tau");
    return make_generator(expr::parse(c.expr_text), tau, "expr");
  }
  GalleryParams gp;
  for (const auto& kv : c.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw DomainError("--param expects key=value");
    gp[kv.substr(0, eq)] = parse_list(kv.substr(eq + 1), "--param").at(0);
  }
  return gallery(c.gallery_name, gp);
}

void emit(const Config& c, const std::string& text) {
  if (c.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out_path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + c.out_path + "'");
  out << text;
}

void require_format(const std::string& fmt, std::initializer_list<const char*> allowed, const char* cmd) {
  for (const char* a : allowed)
    if (fmt == a) return;
  throw DomainError(std::string("format '") + fmt + "' is not available for " + cmd);
}

// SVG helpers: the closed unit disc drawn in a 400 x 400 canvas.
struct Svg {
  std::ostringstream s;
  static double X(cplx z) { return 200.0 + 180.0 * z.real(); }
  static double Y(cplx z) { return 200.0 - 180.0 * z.imag(); }
  Svg() {
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n"
      << "<rect width=\"400\" height=\"400\" fill=\"white\"/>\n"
      << "<circle cx=\"200\" cy=\"200\" r=\"180\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }
  void polyline(const std::vector<cplx>& pts, const char* color, double width) {
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\" points=\"";
    char buf[64];
    for (cplx z : pts) {
      std::snprintf(buf, sizeof buf, "%.3f,%.3f ", X(z), Y(z));
      s << buf;
    }
    s << "\"/>\n";
  }
  void marker(cplx z, const char* color) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"%s\"/>\n", X(z), Y(z), color);
    s << buf;
  }
  std::string str() {
    s << "</svg>\n";
    return s.str();
  }
};

std::vector<cplx> arc_points(const ArcInterval& a, int n = 256) {
  std::vector<cplx> pts;
  for (int k = 0; k <= n; ++k) pts.push_back(unit_at(a.start + a.length * k / n));
  return pts;
}

int cmd_flow(const Config& c) {
  std::string fmt = c.format.empty() ? "csv" : c.format;
  require_format(fmt, {"csv", "svg", "json"}, "flow");
  auto gen = load_generator(c);
  if (!(c.T >= 0.0)) throw DomainError("--t must be nonnegative");
  std::vector<cplx> starts;
  if (!c.point_text.empty()) {
    starts.push_back(parse_complex(c.point_text, "--point"));
  } else if (fmt == "svg") {
    for (int k = 0; k < 12; ++k) starts.push_back(0.9 * unit_at(kTwoPi * k / 12 + 0.1));
  } else {
    throw DomainError("flow needs --point");
  }
  std::vector<Trajectory> trs;
  for (cplx z0 : starts) trs.push_back(integrate_flow(gen, DiscPoint(z0), c.T, c.tol));
  for (const auto& tr : trs)
    if (tr.truncated) std::cerr << "holoflow: trajectory truncated: " << tr.truncation_reason << "\n";
  if (fmt == "csv") {
    emit(c, trajectory_csv(trs.front()));
  } else if (fmt == "json") {
    const auto& tr = trs.front();
    rj::Json j;
    j["z0"] = rj::point(starts.front());
    j["T"] = rj::number(c.T);
    j["final_point"] = rj::point(tr.final_point());
    j["accepted"] = tr.accepted;
    j["rejected"] = tr.rejected;
    j["max_local_error"] = rj::number(tr.max_local_error);
    j["truncated"] = tr.truncated;
    j["truncation_reason"] = tr.truncation_reason;
    emit(c, rj::dump(j));
  } else {
    Svg svg;
    for (const auto& tr : trs) svg.polyline(tr.points, "steelblue", 1.5);
    for (cplx z0 : starts) svg.marker(z0, "gray");
    if (gen.tau) {
      svg.marker(*gen.tau, "crimson");
    } else {
      auto dw = dw_estimate(gen);
      if (dw.converged) svg.marker(dw.value, "crimson");
    }
    emit(c, svg.str());
  }
  return 0;
}

BoundaryPoint boundary_point(const Config& c) {
  if (c.theta && !c.point_text.empty()) throw DomainError("give only one of --point, --theta");
  if (c.theta) return BoundaryPoint::from_angle(*c.theta);
  if (c.point_text.empty()) throw DomainError("classify needs --point or --theta");
  return BoundaryPoint::from_value(parse_complex(c.point_text, "--point"));
}

int cmd_classify(const Config& c) {
  require_format(c.format.empty() ? "json" : c.format, {"json"}, "classify");
  auto gen = load_generator(c);
  BoundaryPoint x = boundary_point(c);
  RadialSchedule sched = c.schedule_text.empty() ? RadialSchedule(4, 48) : RadialSchedule::parse(c.schedule_text);
  std::vector<double> ts = c.t_text.empty() ? std::vector<double>{0.5, 1.0} : parse_list(c.t_text, "--t");
  auto rep = classify(gen, x, sched, c.alpha, ts);
  if (rep.classification == SingularityClass::dw_point)
    std::cerr << "holoflow: the point is the Denjoy-Wolff point; no singularity analysis\n";
  emit(c, rj::dump(rj::to_json(rep)));
  return 0;
}

int cmd_contact(const Config& c) {
  std::string fmt = c.format.empty() ? "json" : c.format;
  require_format(fmt, {"json", "svg"}, "contact");
  auto gen = load_generator(c);
  ArcScanOptions opts;
  opts.resolution = c.resolution;
  opts.life_time_T = c.horizon;
  auto arcs = detect_arcs(gen, opts);
  if (fmt == "json") {
    emit(c, rj::dump(rj::to_json(arcs)));
    return 0;
  }
  Svg svg;
  for (const auto& a : arcs) {
    svg.polyline(arc_points(a.interval), "darkorange", 6.0);
    svg.marker(a.x0.value(), "seagreen");
    svg.marker(a.x1.value(), "crimson");
  }
  emit(c, svg.str());
  return 0;
}

int cmd_geometry(const Config& c) {
  require_format(c.format.empty() ? "json" : c.format, {"json"}, "geometry");
  if (c.domain_file.empty()) throw DomainError("geometry needs --domain");
  auto dom = PlanarDomain::from_json_text(read_file(c.domain_file));
  cplx w0 = c.point_text.empty() ? dom.vertex() : parse_complex(c.point_text, "--point");
  std::vector<std::string> wanted;
  {
    std::istringstream in(c.criteria);
    std::string item;
    while (std::getline(in, item, ',')) wanted.push_back(item);
  }
  rj::Json j;
  j["domain"] = to_string(dom.kind());
  j["w0"] = rj::point(w0);
  for (const auto& w : wanted) {
    if (w == "dini") {
      j["dini"] = rj::to_json(dini_corner(dom, w0, c.theta.value_or(dom.opening())));
    } else if (w == "sector") {
      if (!c.theta) throw DomainError("the sector test needs --theta");
      j["sector"] = rj::to_json(sector_test(dom, w0, unit_at(c.direction), *c.theta, c.rho, c.seed));
    } else if (w == "bertilsson") {
      j["bertilsson"] = rj::to_json(bertilsson_alphas(dom, w0, c.gamma, c.k_max, c.seed));
    } else if (w == "rw") {
      j["rw"] = rj::to_json(rw_subdivision(dom, SubdivisionOptions{c.u0, c.u_max, 200000}));
    } else {
      throw DomainError("unknown criterion '" + w + "' (dini, sector, bertilsson, rw)");
    }
  }
  emit(c, rj::dump(j));
  return 0;
}

void generator_flags(CLI::App* sub, Config& c) {
  sub->add_option("--generator", c.generator_file, "JSON generator file");
  sub->add_option("--expr", c.expr_text, "expression for G(z)");
  sub->add_option("--tau", c.tau_text, "Denjoy-Wolff point re,im for --expr");
  sub->add_option("--gallery", c.gallery_name, "gallery entry name");
  sub->add_option("--param", c.params, "gallery parameter key=value (repeatable)");
  sub->add_option("--out", c.out_path, "output path (default stdout)");
  sub->add_option("--format", c.format, "json, csv or svg");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semigroups of holomorphic self-maps of the disc: flows, boundary singularities, contact arcs, image geometry"};
  app.require_subcommand(1);
  Config c;

  auto* flow = app.add_subcommand("flow", "integrate a trajectory; CSV, JSON summary or SVG phase portrait");
  generator_flags(flow, c);
  flow->add_option("--point", c.point_text, "start point re,im");
  flow->add_option("--t", c.T, "final time")->capture_default_str();
  flow->add_option("--tol", c.tol, "integrator tolerance")->capture_default_str();

  auto* cls = app.add_subcommand("classify", "classify the boundary singularity of G at a point");
  generator_flags(cls, c);
  cls->add_option("--point", c.point_text, "boundary point re,im");
  cls->add_option("--theta", c.theta, "boundary point angle");
  cls->add_option("--alpha", c.alpha, "order to test instead of the estimate");
  cls->add_option("--t", c.t_text, "cross-check times, comma-separated (default 0.5,1)");
  cls->add_option("--schedule", c.schedule_text, "radial schedule kmin:kmax[:scale] (default 4:48)");

  auto* con = app.add_subcommand("contact", "detect contact arcs, classify endpoints, life-times");
  generator_flags(con, c);
  con->add_option("--resolution", c.resolution, "angular scan resolution")->capture_default_str();
  con->add_option("--horizon", c.horizon, "largest life-time searched")->capture_default_str();

  auto* geo = app.add_subcommand("geometry", "image-domain criteria: dini, sector, bertilsson, rw");
  geo->add_option("--domain", c.domain_file, "JSON domain file")->required();
  geo->add_option("--criteria", c.criteria, "comma-separated subset of dini,sector,bertilsson,rw")->capture_default_str();
  geo->add_option("--point", c.point_text, "boundary point w0 re,im (default: domain vertex)");
  geo->add_option("--theta", c.theta, "sector test opening; target opening for dini");
  geo->add_option("--direction", c.direction, "sector test axis angle")->capture_default_str();
  geo->add_option("--rho", c.rho, "sector test radius")->capture_default_str();
  geo->add_option("--gamma", c.gamma, "annulus ratio")->capture_default_str();
  geo->add_option("--k-max", c.k_max, "number of annuli")->capture_default_str();
  geo->add_option("--u0", c.u0, "subdivision start")->capture_default_str();
  geo->add_option("--u-max", c.u_max, "subdivision end")->capture_default_str();
  geo->add_option("--seed", c.seed, "sampling seed")->capture_default_str();
  geo->add_option("--out", c.out_path, "output path (default stdout)");
  geo->add_option("--format", c.format, "json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*flow) return cmd_flow(c);
    if (*cls) return cmd_classify(c);
    if (*con) return cmd_contact(c);
    return cmd_geometry(c);
  } catch (const DomainError& e) {
    std::cerr << "holoflow: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "holoflow: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "holoflow: " << e.what() << "\n";
    return 3;
  }
}
