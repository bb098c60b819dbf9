#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holoflow/disc.hpp"
#include "holoflow/expr.hpp"

namespace holoflow {

// Walls separate inside from outside; slits are boundary with the domain on both sides.
enum class PieceRole { wall, slit };

enum class PieceType { segment, ray, arc, curve };

// One boundary piece. Fields unused by a type stay at their defaults.
struct ChainPiece {
  PieceType type = PieceType::segment;
  PieceRole role = PieceRole::wall;
  cplx a{0.0, 0.0};    // segment start, ray origin, arc center
  cplx b{0.0, 0.0};    // segment end
  double direction = 0.0;  // ray direction angle
  double radius = 0.0;     // arc
  double angle0 = 0.0, angle1 = 0.0;  // arc from angle0 to angle1 (counterclockwise when angle1 > angle0)
  std::optional<expr::Ast> curve;    // curve: z(t) = curve evaluated at real t
  double t0 = 0.0, t1 = 1.0;
  cplx shift{0.0, 0.0};  // added to curve values

  static ChainPiece segment(cplx from, cplx to, PieceRole role = PieceRole::wall);
  static ChainPiece ray(cplx origin, double direction, PieceRole role = PieceRole::wall);
  static ChainPiece arc(cplx center, double radius, double angle0, double angle1, PieceRole role = PieceRole::wall);
  static ChainPiece curve_piece(expr::Ast z_of_t, double t0, double t1, PieceRole role = PieceRole::wall);

  // Same piece in coordinates w - v.
  ChainPiece translated(cplx v) const;

  bool bounded() const { return type != PieceType::ray; }
  cplx start() const;
  cplx end() const;  // only for bounded pieces
  double distance(cplx w) const;
  // Points of the piece on the circle |w - c| = rho.
  std::vector<cplx> circle_intersections(cplx c, double rho) const;
  // n points of the piece inside the annulus r_in <= |w - c| <= r_out.
  std::vector<cplx> annulus_samples(cplx c, double r_in, double r_out, int n) const;
};

enum class Membership { inside, outside, boundary_band };
std::string to_string(Membership m);

enum class DomainKind { chain, sector, slit_plane, strip, comb };
std::string to_string(DomainKind k);

class PlanarDomain {
 public:
  // Generic chain. A closed chain of wall pieces answers membership by ray
  // casting; an open chain only supports the boundary operations.
  static PlanarDomain from_chain(std::vector<ChainPiece> pieces, bool closed, double epsilon = 1e-9);
  // {vertex + s e^{i phi}: s > 0, |phi - direction| < opening/2}
  static PlanarDomain sector(cplx vertex, double direction, double opening, double epsilon = 1e-9);
  // C minus the ray from tip in the given direction
  static PlanarDomain slit_plane(cplx tip, double direction, double epsilon = 1e-9);
  // {|Im w - center| < height/2}
  static PlanarDomain strip(double center, double height, double epsilon = 1e-9);
  // {|Im w| < 1} minus the teeth {|Im w| = deltas[n-1], Re w <= -2n}, n = 1, 2, ...
  static PlanarDomain comb(std::vector<double> deltas, double epsilon = 1e-9);
  // Parses the JSON domain description.
  static PlanarDomain from_json_text(const std::string& text);

  DomainKind kind() const { return kind_; }
  const std::vector<ChainPiece>& pieces() const { return pieces_; }
  bool closed() const { return closed_; }
  double epsilon() const { return epsilon_; }
  bool translation_invariant() const { return translation_invariant_; }
  const std::vector<double>& escape_directions() const { return escape_directions_; }
  bool has_membership() const { return kind_ != DomainKind::chain || closed_; }

  double boundary_distance(cplx w) const;
  Membership membership(cplx w) const;
  // Side test without the boundary band. Exact for the closed-form kinds;
  // closed chains ray-cast against the discretized walls.
  bool contains(cplx w) const;

  // Same domain in coordinates w - v.
  PlanarDomain translated(cplx v) const;

  // Shape parameters of the closed-form kinds.
  cplx vertex() const { return vertex_; }
  double direction() const { return direction_; }
  double opening() const { return opening_; }

 private:
  PlanarDomain() = default;
  void validate() const;
  bool inside_shape(cplx w) const;

  DomainKind kind_ = DomainKind::chain;
  std::vector<ChainPiece> pieces_;
  bool closed_ = false;
  double epsilon_ = 1e-9;
  bool translation_invariant_ = false;
  std::vector<double> escape_directions_;
  cplx vertex_{0.0, 0.0};
  double direction_ = 0.0;
  double opening_ = 0.0;
  double center_ = 0.0, height_ = 0.0;
  std::vector<double> deltas_;
  std::vector<cplx> polyline_;  // closed chains: discretized walls for ray casting
};

Membership membership(const PlanarDomain& dom, cplx w);

}  // namespace holoflow
