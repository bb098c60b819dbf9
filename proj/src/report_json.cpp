#include "holoflow/report_json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace holoflow::report {

namespace {

void put_string(std::string& out, const std::string& s) {
  // serialize through nlohmann for escaping
  out += Json(s).dump();
}

void put(std::string& out, const Json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' '), close_pad(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        put_string(out, it.key());
        out += ": ";
        put(out, it.value(), depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // short numeric arrays (points) stay on one line
      bool flat = j.size() <= 2 && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        put(out, e, depth + 1);
      }
      out += flat ? "]" : "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
      out += buf;
      return;
    }
    default: out += j.dump();
  }
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json points(const std::vector<cplx>& v) {
  Json a = Json::array();
  for (cplx z : v) a.push_back(point(z));
  return a;
}

template <class T>
Json optional_number(const std::optional<T>& v) {
  return v ? number(*v) : Json(nullptr);
}

Json optional_point(const std::optional<cplx>& v) { return v ? point(*v) : Json(nullptr); }

Json endpoint(const EndpointValue& e) {
  Json j;
  j["infinite"] = e.infinite;
  j["converged"] = e.converged;
  j["value"] = e.infinite ? Json(nullptr) : point(e.value);
  return j;
}

Json arc_interval(const ArcInterval& a) {
  Json j;
  j["start"] = number(a.start);
  j["end"] = number(a.end());
  j["length"] = number(a.length);
  return j;
}

}  // namespace

std::string dump(const Json& j) {
  std::string out;
  put(out, j, 0);
  out += "\n";
  return out;
}

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json point(cplx z) { return Json::array({number(z.real()), number(z.imag())}); }

Json to_json(const LimitEstimate& e) {
  Json j;
  j["status"] = to_string(e.status);
  j["value"] = point(e.value);
  j["error"] = number(e.error);
  j["gamma"] = number(e.gamma);
  j["modulus_drift"] = number(e.modulus_drift);
  j["phase_drift"] = number(e.phase_drift);
  j["noise_limited"] = e.noise_limited;
  return j;
}

Json to_json(const SeriesReport& s) {
  Json j;
  j["verdict"] = to_string(s.verdict);
  j["tail_exponent"] = number(s.tail_exponent);
  j["terms"] = s.partial_sums.size();
  j["sum"] = number(s.partial_sums.empty() ? 0.0 : s.partial_sums.back());
  // decimated partial sums keep reports small for long series
  Json ps = Json::array();
  const std::size_t n = s.partial_sums.size(), stride = n > 64 ? n / 64 : 1;
  for (std::size_t i = 0; i < n; i += stride) ps.push_back(number(s.partial_sums[i]));
  if (n > 0 && (n - 1) % stride != 0) ps.push_back(number(s.partial_sums.back()));
  j["partial_sums"] = ps;
  return j;
}

Json to_json(const ValidationReport& v) {
  Json j;
  j["valid"] = v.valid;
  j["min_re"] = number(v.min_re);
  j["worst_point"] = point(v.worst_point);
  j["points"] = v.points;
  return j;
}

Json to_json(const DwEstimate& d) {
  Json j;
  j["value"] = point(d.value);
  j["converged"] = d.converged;
  j["method"] = d.method;
  j["seed_spread"] = number(d.seed_spread);
  j["distance_to_tau"] = optional_number(d.distance_to_tau);
  j["seed_limits"] = points(d.seed_limits);
  return j;
}

Json to_json(const Thm11Report& r) {
  Json j;
  j["M"] = point(r.M.M);
  j["M_regular"] = r.M.regular;
  Json ls = Json::array();
  for (const auto& L : r.L) {
    Json e;
    e["t"] = number(L.t);
    e["finite"] = L.finite;
    e["L"] = point(L.L.value);
    e["L_status"] = to_string(L.L.status);
    e["phi_x"] = point(L.phi_x);
    ls.push_back(e);
  }
  j["L"] = ls;
  j["H_prime"] = optional_point(r.H_prime);
  j["H"] = optional_point(r.H);
  Json cs = Json::array();
  for (const auto& c : r.checks) {
    Json e;
    e["name"] = c.name;
    e["available"] = c.available;
    e["relative_error"] = number(c.relative_error);
    e["passed"] = c.passed;
    cs.push_back(e);
  }
  j["checks"] = cs;
  j["partial"] = r.partial;
  return j;
}

Json to_json(const SingularityReport& r) {
  Json j;
  j["point"] = point(r.point.value());
  j["theta"] = number(r.point.theta());
  j["alpha_plus"] = number(r.alpha_plus);
  j["alpha_minus"] = number(r.alpha_minus);
  j["alpha"] = optional_number(r.alpha);
  j["classification"] = to_string(r.classification);
  j["M"] = point(r.M);
  j["pole_mass"] = number(r.pole_mass);
  j["dilation"] = number(r.dilation);
  j["within_order_bounds"] = r.within_order_bounds;
  j["checks"] = r.crosscheck ? to_json(*r.crosscheck)["checks"] : Json::array();
  j["diagnostics"] = r.diagnostics;
  j["crosscheck"] = r.crosscheck ? to_json(*r.crosscheck) : Json(nullptr);
  return j;
}

Json to_json(const TangencyReport& r) {
  Json j;
  j["theta"] = number(r.theta);
  j["status"] = to_string(r.status);
  j["re_limit"] = number(r.re_limit);
  j["im_magnitude"] = number(r.im_magnitude);
  j["contact"] = r.contact;
  return j;
}

Json to_json(const ContactArcReport& r) {
  Json j;
  j["interval"] = arc_interval(r.interval);
  j["full_circle"] = r.full_circle;
  j["orientation"] = r.orientation;
  j["theta0"] = number(r.theta0);
  j["theta1"] = number(r.theta1);
  j["x0"] = point(r.x0.value());
  j["x1"] = point(r.x1.value());
  j["x0_class"] = to_string(r.x0_class);
  j["x1_class"] = to_string(r.x1_class);
  j["G_x0"] = endpoint(r.G_x0);
  j["G_x1"] = endpoint(r.G_x1);
  Json lt = Json::array();
  for (const auto& l : r.life_times) {
    Json e;
    e["theta_start"] = number(l.theta_start);
    e["finite"] = l.finite;
    e["t1"] = l.finite ? number(l.t1) : Json("inf");
    e["final_theta"] = number(l.final_theta);
    lt.push_back(e);
  }
  j["life_times"] = lt;
  j["notes"] = r.notes;
  return j;
}

Json to_json(const std::vector<ContactArcReport>& arcs) {
  Json j;
  j["count"] = arcs.size();
  Json a = Json::array();
  for (const auto& r : arcs) a.push_back(to_json(r));
  j["arcs"] = a;
  return j;
}

Json to_json(const HerglotzMassReport& r) {
  Json j;
  j["interval"] = arc_interval(r.interval);
  j["radii"] = numbers(r.radii);
  j["masses"] = numbers(r.masses);
  j["decreasing"] = r.decreasing;
  return j;
}

Json to_json(const CornerReport& r) {
  Json j;
  j["vertex"] = point(r.vertex);
  j["opening"] = number(r.opening);
  j["target_opening"] = number(r.target_opening);
  j["opening_error"] = number(r.opening_error);
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  j["proxy"] = to_json(r.proxy);
  j["radii"] = numbers(r.radii);
  j["gamma_minus"] = numbers(r.gamma_minus);
  j["gamma_plus"] = numbers(r.gamma_plus);
  j["oscillation"] = numbers(r.oscillation);
  return j;
}

Json to_json(const LocalDensityReport& r) {
  Json j;
  j["locally_dense"] = r.locally_dense;
  j["reason"] = r.reason;
  Json sides = Json::array();
  for (const auto& s : r.side) {
    Json e;
    e["dense"] = s.dense;
    e["points"] = s.distances.size();
    e["sums"] = to_json(s.sums);
    sides.push_back(e);
  }
  j["sides"] = sides;
  return j;
}

Json to_json(const SectorTestReport& r) {
  Json j;
  j["contained"] = r.contained;
  j["witness"] = optional_point(r.witness);
  j["samples"] = r.samples;
  return j;
}

Json to_json(const BertilssonReport& r) {
  Json j;
  j["gamma"] = number(r.gamma);
  j["alphas"] = numbers(r.alphas);
  j["partial_sums"] = numbers(r.partial_sums);
  j["tail_exponent"] = number(r.tail_exponent);
  j["verdict"] = to_string(r.verdict);
  return j;
}

Json to_json(const SubdivisionReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["note"] = r.note;
  j["terms"] = r.delta.size();
  j["u_last"] = number(r.u.empty() ? 0.0 : r.u.back());
  j["delta_squared"] = to_json(r.delta_sums);
  j["theta1_squared"] = to_json(r.theta1_sums);
  j["theta2_squared"] = to_json(r.theta2_sums);
  return j;
}

namespace {

cplx parse_pair(const Json& j, const char* key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw DomainError(std::string("generator file: '") + key + "' must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

GeneratorSpec generator_from_json_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DomainError(std::string("generator file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("generator file must hold a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "tau" && it.key() != "p_expr" && it.key() != "g_expr" && it.key() != "gallery" &&
        it.key() != "name")
      throw DomainError("generator file: unknown key '" + it.key() + "'");
  const int styles = int(j.contains("p_expr")) + int(j.contains("g_expr")) + int(j.contains("gallery"));
  if (styles != 1) throw DomainError("generator file needs exactly one of p_expr, g_expr, gallery");
  std::string name = j.value("name", std::string{});
  auto text_of = [&](const char* key) {
    if (!j[key].is_string()) throw DomainError(std::string("generator file: '") + key + "' must be a string");
    return j[key].get<std::string>();
  };
  if (j.contains("gallery")) {
    const Json& g = j["gallery"];
    if (!g.is_object() || !g.contains("name") || !g["name"].is_string())
      throw DomainError("generator file: gallery needs a name");
    if (j.contains("tau")) throw DomainError("generator file: tau is fixed by the gallery entry");
    GalleryParams params;
    if (g.contains("params")) {
      if (!g["params"].is_object()) throw DomainError("generator file: gallery params must be an object");
      for (auto it = g["params"].begin(); it != g["params"].end(); ++it) {
        if (!it.value().is_number()) throw DomainError("generator file: parameter '" + it.key() + "' must be a number");
        params[it.key()] = it.value().get<double>();
      }
    }
    return gallery(g["name"].get<std::string>(), params);
  }
  if (j.contains("p_expr")) {
    if (!j.contains("tau")) throw DomainError("generator file: p_expr needs tau");
    return make_generator(parse_pair(j["tau"], "tau"), HerglotzSpec::expression(expr::parse(text_of("p_expr"))), name);
  }
  std::optional<cplx> tau;
  if (j.contains("tau")) tau = parse_pair(j["tau"], "tau");
  return make_generator(expr::parse(text_of("g_expr")), tau, name);
}

}  // namespace holoflow::report
