#include "holoflow/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace holoflow {

namespace {

constexpr int kCurveSamples = 4096;
constexpr int kArcPolyline = 256;

// Parameters where |a + t d - c| = r, from the foot of the perpendicular so
// that small r near a stays accurate.
std::optional<std::pair<double, double>> line_circle(cplx a, cplx d, cplx c, double r) {
  const double A = std::norm(d);
  const double tf = (std::conj(d) * (c - a)).real() / A;
  const double h = std::abs(a + tf * d - c);
  if (h > r) return std::nullopt;
  double half = std::sqrt((r - h) * (r + h) / A);
  return std::make_pair(tf - half, tf + half);
}

// Parameter intervals of a line a + t d with r_in^2 <= |a + t d - c|^2 <= r_out^2.
std::vector<std::pair<double, double>> line_annulus(cplx a, cplx d, cplx c, double r_in, double r_out, double t_lo,
                                                    double t_hi) {
  std::vector<std::pair<double, double>> out;
  auto outer = line_circle(a, d, c, r_out);
  if (!outer) return out;
  double lo = std::max(outer->first, t_lo), hi = std::min(outer->second, t_hi);
  if (!(lo < hi)) return out;
  auto inner = r_in > 0.0 ? line_circle(a, d, c, r_in) : std::nullopt;
  if (!inner) {
    out.emplace_back(lo, hi);
    return out;
  }
  if (inner->first > lo) out.emplace_back(lo, std::min(hi, inner->first));
  if (inner->second < hi) out.emplace_back(std::max(lo, inner->second), hi);
  return out;
}

// Base point and direction of a straight piece, based at the end nearer to c.
struct LineFrame {
  cplx base, dir;
  double hi;
};

LineFrame line_frame(const ChainPiece& p, cplx c) {
  if (p.type == PieceType::ray) return {p.a, unit_at(p.direction), std::numeric_limits<double>::infinity()};
  if (std::abs(p.b - c) < std::abs(p.a - c)) return {p.b, p.a - p.b, 1.0};
  return {p.a, p.b - p.a, 1.0};
}

std::vector<double> spread(const std::vector<std::pair<double, double>>& iv, int n) {
  double total = 0.0;
  for (auto [a, b] : iv) total += b - a;
  std::vector<double> ts;
  if (total <= 0.0 || n <= 0) return ts;
  for (int k = 0; k < n; ++k) {
    double s = (k + 0.5) / n * total;
    for (auto [a, b] : iv) {
      if (s <= b - a) {
        ts.push_back(a + s);
        break;
      }
      s -= b - a;
    }
  }
  return ts;
}

cplx parse_point(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw DomainError(std::string("domain: ") + what + " must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

double parse_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw DomainError(std::string("domain: missing number '") + key + "'");
  return j[key].get<double>();
}

PieceRole parse_role(const nlohmann::json& j) {
  if (!j.contains("role")) return PieceRole::wall;
  std::string r = j["role"].get<std::string>();
  if (r == "wall") return PieceRole::wall;
  if (r == "slit") return PieceRole::slit;
  throw DomainError("domain: role must be wall or slit");
}

}  // namespace

ChainPiece ChainPiece::segment(cplx from, cplx to, PieceRole role) {
  if (from == to) throw DomainError("degenerate segment");
  ChainPiece p;
  p.type = PieceType::segment;
  p.a = from;
  p.b = to;
  p.role = role;
  return p;
}

ChainPiece ChainPiece::ray(cplx origin, double direction, PieceRole role) {
  ChainPiece p;
  p.type = PieceType::ray;
  p.a = origin;
  p.direction = direction;
  p.role = role;
  return p;
}

ChainPiece ChainPiece::arc(cplx center, double radius, double angle0, double angle1, PieceRole role) {
  if (!(radius > 0.0)) throw DomainError("arc radius must be positive");
  if (!(std::abs(angle1 - angle0) > 0.0 && std::abs(angle1 - angle0) <= kTwoPi))
    throw DomainError("arc sweep must lie in (0, 2pi]");
  ChainPiece p;
  p.type = PieceType::arc;
  p.a = center;
  p.radius = radius;
  p.angle0 = angle0;
  p.angle1 = angle1;
  p.role = role;
  return p;
}

ChainPiece ChainPiece::curve_piece(expr::Ast z_of_t, double t0, double t1, PieceRole role) {
  if (!(t1 > t0)) throw DomainError("curve parameter range must be increasing");
  ChainPiece p;
  p.type = PieceType::curve;
  p.curve = std::move(z_of_t);
  p.t0 = t0;
  p.t1 = t1;
  p.role = role;
  cplx s = p.start(), e = p.end();
  if (!std::isfinite(std::abs(s)) || !std::isfinite(std::abs(e))) throw DomainError("curve endpoints are not finite");
  return p;
}

namespace {

cplx curve_at(const ChainPiece& p, double t) { return expr::eval(*p.curve, cplx(t, 0.0)) + p.shift; }

// Parameters spread geometrically when the range spans many decades from a positive start,
// so curves meeting a vertex at t -> 0 stay resolved there.
double curve_param(const ChainPiece& p, int k, int n) {
  if (p.t0 > 0.0 && p.t1 / p.t0 > 1e3) return p.t0 * std::pow(p.t1 / p.t0, double(k) / n);
  return p.t0 + (p.t1 - p.t0) * k / n;
}

std::vector<cplx> curve_points(const ChainPiece& p, int n) {
  std::vector<cplx> pts(n + 1);
  for (int k = 0; k <= n; ++k) pts[k] = curve_at(p, curve_param(p, k, n));
  return pts;
}

cplx arc_at(const ChainPiece& p, double s) { return p.a + p.radius * unit_at(p.angle0 + s * (p.angle1 - p.angle0)); }

bool arc_contains_angle(const ChainPiece& p, double phi) {
  double sweep = p.angle1 - p.angle0;
  double off = canonical_angle(sweep > 0 ? phi - p.angle0 : p.angle0 - phi);
  return off <= std::abs(sweep) + 1e-14 || off >= kTwoPi - 1e-14;
}

double segment_distance(cplx w, cplx a, cplx b) {
  cplx d = b - a;
  double t = std::clamp((std::conj(d) * (w - a)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(w - (a + t * d));
}

}  // namespace

ChainPiece ChainPiece::translated(cplx v) const {
  ChainPiece p = *this;
  p.a -= v;
  p.b -= v;
  p.shift -= v;
  return p;
}

cplx ChainPiece::start() const {
  switch (type) {
    case PieceType::arc: return arc_at(*this, 0.0);
    case PieceType::curve: return curve_at(*this, t0);
    default: return a;
  }
}

cplx ChainPiece::end() const {
  switch (type) {
    case PieceType::segment: return b;
    case PieceType::arc: return arc_at(*this, 1.0);
    case PieceType::curve: return curve_at(*this, t1);
    default: throw DomainError("a ray has no end point");
  }
}

double ChainPiece::distance(cplx w) const {
  switch (type) {
    case PieceType::segment: return segment_distance(w, a, b);
    case PieceType::ray: {
      cplx d = unit_at(direction);
      double t = std::max(0.0, (std::conj(d) * (w - a)).real());
      return std::abs(w - (a + t * d));
    }
    case PieceType::arc: {
      double phi = std::arg(w - a);
      if (w != a && arc_contains_angle(*this, phi)) return std::abs(std::abs(w - a) - radius);
      return std::min(std::abs(w - start()), std::abs(w - end()));
    }
    default: {
      auto pts = curve_points(*this, kCurveSamples);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k < pts.size(); ++k) best = std::min(best, segment_distance(w, pts[k - 1], pts[k]));
      return best;
    }
  }
}

std::vector<cplx> ChainPiece::circle_intersections(cplx c, double rho) const {
  std::vector<cplx> out;
  if (type == PieceType::segment || type == PieceType::ray) {
    LineFrame f = line_frame(*this, c);
    auto roots = line_circle(f.base, f.dir, c, rho);
    if (!roots) return out;
    for (double t : {roots->first, roots->second}) {
      if (t >= 0.0 && t <= f.hi) out.push_back(f.base + t * f.dir);
      if (roots->first == roots->second) break;
    }
    return out;
  }
  if (type == PieceType::arc) {
    double d = std::abs(c - a);
    if (d == 0.0 || d > radius + rho || d < std::abs(radius - rho)) return out;
    double x = (d * d + radius * radius - rho * rho) / (2.0 * d);
    double y2 = radius * radius - x * x;
    double y = y2 > 0.0 ? std::sqrt(y2) : 0.0;
    cplx u = (c - a) / d;
    for (double sgn : {-1.0, 1.0}) {
      cplx p = a + u * cplx(x, sgn * y);
      if (arc_contains_angle(*this, std::arg(p - a))) out.push_back(p);
      if (y == 0.0) break;
    }
    return out;
  }
  // curve: sign changes of |z(t) - c| - rho, refined by bisection
  auto f = [&](double t) { return std::abs(curve_at(*this, t) - c) - rho; };
  const int n = kCurveSamples;
  double prev_t = t0, prev_f = f(t0);
  if (prev_f == 0.0) out.push_back(curve_at(*this, t0));
  for (int k = 1; k <= n; ++k) {
    double t = curve_param(*this, k, n), ft = f(t);
    if (ft == 0.0) {
      out.push_back(curve_at(*this, t));
    } else if (prev_f != 0.0 && (ft > 0) != (prev_f > 0)) {
      double lo = prev_t, hi = t, flo = prev_f;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi), fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(curve_at(*this, 0.5 * (lo + hi)));
    }
    prev_t = t;
    prev_f = ft;
  }
  return out;
}

std::vector<cplx> ChainPiece::annulus_samples(cplx c, double r_in, double r_out, int n) const {
  std::vector<cplx> out;
  if (type == PieceType::segment || type == PieceType::ray) {
    LineFrame f = line_frame(*this, c);
    for (double t : spread(line_annulus(f.base, f.dir, c, r_in, r_out, 0.0, f.hi), n)) out.push_back(f.base + t * f.dir);
    return out;
  }
  std::vector<cplx> cand;
  const int m = 64 * n;
  if (type == PieceType::arc) {
    for (int k = 0; k <= m; ++k) cand.push_back(arc_at(*this, double(k) / m));
  } else {
    cand = curve_points(*this, m);
  }
  for (cplx p : cand) {
    double r = std::abs(p - c);
    if (r >= r_in && r <= r_out) out.push_back(p);
  }
  if (static_cast<int>(out.size()) > n) {
    std::vector<cplx> thin;
    for (int k = 0; k < n; ++k) thin.push_back(out[k * out.size() / n]);
    out = std::move(thin);
  }
  return out;
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::inside: return "inside";
    case Membership::outside: return "outside";
    default: return "boundary-band";
  }
}

std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::sector: return "sector";
    case DomainKind::slit_plane: return "slit_plane";
    case DomainKind::strip: return "strip";
    case DomainKind::comb: return "comb";
    default: return "chain";
  }
}

PlanarDomain PlanarDomain::from_chain(std::vector<ChainPiece> pieces, bool closed, double epsilon) {
  PlanarDomain d;
  d.kind_ = DomainKind::chain;
  d.pieces_ = std::move(pieces);
  d.closed_ = closed;
  d.epsilon_ = epsilon;
  d.validate();
  if (closed) {
    for (const auto& p : d.pieces_) {
      if (p.role == PieceRole::slit) continue;
      std::vector<cplx> pts;
      if (p.type == PieceType::segment) {
        pts = {p.a};
      } else if (p.type == PieceType::arc) {
        for (int k = 0; k < kArcPolyline; ++k) pts.push_back(arc_at(p, double(k) / kArcPolyline));
      } else {
        pts = curve_points(p, kCurveSamples);
        pts.pop_back();
      }
      d.polyline_.insert(d.polyline_.end(), pts.begin(), pts.end());
    }
  }
  return d;
}

PlanarDomain PlanarDomain::sector(cplx vertex, double direction, double opening, double epsilon) {
  if (!(opening > 0.0 && opening <= kTwoPi)) throw DomainError("sector opening must lie in (0, 2pi]");
  PlanarDomain d;
  d.kind_ = DomainKind::sector;
  d.vertex_ = vertex;
  d.direction_ = direction;
  d.opening_ = opening;
  d.epsilon_ = epsilon;
  if (opening == kTwoPi) {
    d.pieces_ = {ChainPiece::ray(vertex, direction + kPi, PieceRole::slit)};
  } else {
    d.pieces_ = {ChainPiece::ray(vertex, direction - 0.5 * opening), ChainPiece::ray(vertex, direction + 0.5 * opening)};
  }
  d.escape_directions_ = {direction};
  d.validate();
  return d;
}

PlanarDomain PlanarDomain::slit_plane(cplx tip, double direction, double epsilon) {
  PlanarDomain d;
  d.kind_ = DomainKind::slit_plane;
  d.vertex_ = tip;
  d.direction_ = direction;
  d.opening_ = kTwoPi;
  d.epsilon_ = epsilon;
  d.pieces_ = {ChainPiece::ray(tip, direction, PieceRole::slit)};
  d.validate();
  return d;
}

PlanarDomain PlanarDomain::strip(double center, double height, double epsilon) {
  if (!(height > 0.0)) throw DomainError("strip height must be positive");
  PlanarDomain d;
  d.kind_ = DomainKind::strip;
  d.center_ = center;
  d.height_ = height;
  d.epsilon_ = epsilon;
  d.translation_invariant_ = true;
  for (double s : {-0.5, 0.5}) {
    cplx o(0.0, center + s * height);
    d.pieces_.push_back(ChainPiece::ray(o, 0.0));
    d.pieces_.push_back(ChainPiece::ray(o, kPi));
  }
  d.escape_directions_ = {0.0, kPi};
  d.validate();
  return d;
}

PlanarDomain PlanarDomain::comb(std::vector<double> deltas, double epsilon) {
  for (double v : deltas)
    if (!(v > 0.0 && v < 1.0)) throw DomainError("comb tooth heights must lie in (0,1)");
  PlanarDomain d;
  d.kind_ = DomainKind::comb;
  d.center_ = 0.0;
  d.height_ = 2.0;
  d.epsilon_ = epsilon;
  for (double s : {-1.0, 1.0}) {
    d.pieces_.push_back(ChainPiece::ray(cplx(0.0, s), 0.0));
    d.pieces_.push_back(ChainPiece::ray(cplx(0.0, s), kPi));
  }
  for (std::size_t n = 1; n <= deltas.size(); ++n)
    for (double s : {-1.0, 1.0})
      d.pieces_.push_back(ChainPiece::ray(cplx(-2.0 * n, s * deltas[n - 1]), kPi, PieceRole::slit));
  d.deltas_ = std::move(deltas);
  d.escape_directions_ = {0.0, kPi};
  d.validate();
  return d;
}

void PlanarDomain::validate() const {
  if (pieces_.empty()) throw DomainError("domain boundary chain is empty");
  if (!(epsilon_ > 0.0)) throw DomainError("membership epsilon must be positive");
  if (kind_ != DomainKind::chain || !closed_) return;
  double scale = 1.0;
  for (const auto& p : pieces_) {
    if (!p.bounded()) throw DomainError("a closed chain cannot contain rays");
    scale = std::max(scale, std::abs(p.start()));
  }
  std::vector<const ChainPiece*> walls;
  for (const auto& p : pieces_)
    if (p.role == PieceRole::wall) walls.push_back(&p);
  if (walls.size() < 2 && !(walls.size() == 1 && walls[0]->type != PieceType::segment))
    throw DomainError("a closed chain needs at least two wall pieces");
  for (std::size_t i = 0; i < walls.size(); ++i) {
    cplx e = walls[i]->end(), s = walls[(i + 1) % walls.size()]->start();
    if (std::abs(e - s) > 1e-9 * scale) throw DomainError("boundary chain does not close: consecutive walls do not meet");
  }
}

double PlanarDomain::boundary_distance(cplx w) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces_) best = std::min(best, p.distance(w));
  return best;
}

bool PlanarDomain::inside_shape(cplx w) const {
  switch (kind_) {
    case DomainKind::sector:
      return w != vertex_ && std::abs(angle_difference(direction_, std::arg(w - vertex_))) < 0.5 * opening_;
    case DomainKind::slit_plane: return true;
    case DomainKind::strip:
    case DomainKind::comb: return std::abs(w.imag() - center_) < 0.5 * height_;
    default: {
      if (!closed_) throw DomainError("membership needs a closed boundary chain");
      bool in = false;
      const std::size_t n = polyline_.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        cplx a = polyline_[i], b = polyline_[j];
        if ((a.imag() > w.imag()) != (b.imag() > w.imag())) {
          double x = a.real() + (w.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
          if (w.real() < x) in = !in;
        }
      }
      return in;
    }
  }
}

Membership PlanarDomain::membership(cplx w) const {
  if (!has_membership()) throw DomainError("membership needs a closed boundary chain");
  if (boundary_distance(w) <= epsilon_) return Membership::boundary_band;
  return inside_shape(w) ? Membership::inside : Membership::outside;
}

bool PlanarDomain::contains(cplx w) const {
  if (!has_membership()) throw DomainError("membership needs a closed boundary chain");
  return inside_shape(w);
}

PlanarDomain PlanarDomain::translated(cplx v) const {
  PlanarDomain d = *this;
  for (auto& p : d.pieces_) p = p.translated(v);
  for (auto& q : d.polyline_) q -= v;
  d.vertex_ -= v;
  d.center_ -= v.imag();
  return d;
}

Membership membership(const PlanarDomain& dom, cplx w) { return dom.membership(w); }

PlanarDomain PlanarDomain::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("domain file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("kind")) throw DomainError("domain file needs a 'kind'");
    std::string kind = j["kind"].get<std::string>();
    double eps = j.value("epsilon", 1e-9);
    PlanarDomain d = [&]() {
      if (kind == "sector")
        return sector(parse_point(j.at("vertex"), "vertex"), parse_number(j, "direction"), parse_number(j, "opening"), eps);
      if (kind == "slit_plane") return slit_plane(parse_point(j.at("tip"), "tip"), parse_number(j, "direction"), eps);
      if (kind == "strip") return strip(j.value("center", 0.0), j.value("height", 1.0), eps);
      if (kind == "comb") return comb(j.at("deltas").get<std::vector<double>>(), eps);
      if (kind == "polygon") {
        const auto& v = j.at("vertices");
        if (!v.is_array() || v.size() < 3) throw DomainError("polygon needs at least three vertices");
        std::vector<ChainPiece> ps;
        for (std::size_t i = 0; i < v.size(); ++i)
          ps.push_back(ChainPiece::segment(parse_point(v[i], "vertex"), parse_point(v[(i + 1) % v.size()], "vertex")));
        return from_chain(std::move(ps), true, eps);
      }
      if (kind == "chain") {
        std::vector<ChainPiece> ps;
        for (const auto& pj : j.at("pieces")) {
          std::string type = pj.at("type").get<std::string>();
          PieceRole role = parse_role(pj);
          if (type == "segment")
            ps.push_back(ChainPiece::segment(parse_point(pj.at("from"), "from"), parse_point(pj.at("to"), "to"), role));
          else if (type == "ray")
            ps.push_back(ChainPiece::ray(parse_point(pj.at("from"), "from"), parse_number(pj, "direction"), role));
          else if (type == "arc")
            ps.push_back(ChainPiece::arc(parse_point(pj.at("center"), "center"), parse_number(pj, "radius"),
                                         parse_number(pj, "angle0"), parse_number(pj, "angle1"), role));
          else if (type == "curve")
            ps.push_back(ChainPiece::curve_piece(expr::parse(pj.at("expr").get<std::string>()), parse_number(pj, "t0"),
                                                 parse_number(pj, "t1"), role));
          else
            throw DomainError("unknown chain piece type '" + type + "'");
        }
        return from_chain(std::move(ps), j.value("closed", false), eps);
      }
      throw DomainError("unknown domain kind '" + kind + "'");
    }();
    if (j.contains("translation_invariant")) d.translation_invariant_ = j["translation_invariant"].get<bool>();
    if (j.contains("escape_directions")) d.escape_directions_ = j["escape_directions"].get<std::vector<double>>();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed domain file: ") + e.what());
  }
}

}  // namespace holoflow
