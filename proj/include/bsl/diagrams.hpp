#pragma once

// Star diagrams M <-pi- P -pi'-> M': one total space carrying two commuting
// free actions of the same group, together with both quotient maps.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bsl/algebra.hpp"

namespace bsl::diagrams {

using algebra::GroupElement;
using algebra::GroupId;
using algebra::Rng;

/// Coordinates of a point of P, M or M'.  The layout is entry specific:
///   trivial-s2  P: (x0, x1, x2, theta)   M, M': (x0, x1, x2) on the unit sphere
///   hopf        P: (w, x, y, z)          M, M': (x, y, z) on the unit sphere
///   gm          P: 16 reals (a, b, c, d) M: 8 reals (a, b)  M': 16 reals
/// Points of the gm quotient M' are stored as star-orbit representatives.
using Point = std::vector<double>;
using BasePoint = std::vector<double>;

enum class CatalogId { TrivialS2, Hopf, GromollMeyer };
enum class Which { Bullet, Star };
enum class Side { P, M, MPrime };
enum class Direction { ToPrime, FromPrime };

std::string_view to_string(CatalogId id);
std::string_view to_string(Which which);
std::string_view to_string(Side side);
CatalogId parse_catalog_id(std::string_view name);
Side parse_side(std::string_view name);

using Action = std::function<Point(const GroupElement&, const Point&)>;
using Projection = std::function<BasePoint(const Point&)>;
using Section = std::function<Point(const BasePoint&)>;
using PointMetric = std::function<double(const Point&, const Point&)>;
using BaseMetric = std::function<double(const BasePoint&, const BasePoint&)>;
using InvariantFunction = std::function<double(const BasePoint&)>;

struct StarDiagram {
  CatalogId id;
  std::string description;
  GroupId group;
  bool cohomogeneity_one = false;

  std::function<double(const Point&)> membership;  // distance of p from P
  std::function<Point(Rng&)> random_point;
  PointMetric distance;

  Action bullet;
  Action star;
  Projection proj_bullet;  // pi : P -> M
  Projection proj_star;    // pi': P -> M'
  Section lift_bullet;     // right inverse of pi
  Section lift_star;       // right inverse of pi'
  BaseMetric base_distance;
  BaseMetric base_distance_prime;

  /// Residual action of G on M induced by star, and on M' induced by bullet.
  BasePoint act_base(const GroupElement& g, const BasePoint& x) const;
  BasePoint act_base_prime(const GroupElement& g, const BasePoint& y) const;
};

struct CatalogEntry {
  std::string id;
  std::string description;
  std::string group;
  bool cohomogeneity_one;
};

const std::vector<CatalogEntry>& catalog_entries();
StarDiagram catalog(CatalogId id);
StarDiagram catalog(std::string_view name);

/// Max over samples of the distance between star(g, bullet(h, p)) and
/// bullet(h, star(g, p)).
double check_commute(const StarDiagram& d, int samples, Rng& rng);

/// Max deviation from P of bullet(g, p) and star(g, p) over samples.
struct MembershipResidual {
  double bullet = 0.0;
  double star = 0.0;
};
MembershipResidual check_membership(const StarDiagram& d, int samples, Rng& rng);

/// Max of |pi(bullet(g,p)) - pi(p)| and |pi'(star(g,p)) - pi'(p)| over samples.
double check_projection_invariance(const StarDiagram& d, int samples, Rng& rng);

/// Net elements g with action(g, p) within 1e-9 of p.
std::vector<GroupElement> isotropy_probe(const StarDiagram& d, Which which, const Point& p,
                                         int grid);

struct IsotropyDimensions {
  int base = 0;        // isotropy of the residual action at pi(p)
  int base_prime = 0;  // isotropy of the residual action at pi'(p)
};
IsotropyDimensions isotropy_compare(const StarDiagram& d, const Point& p, int grid);

/// Pulls f back to P through one projection and pushes it down through the
/// other.  ToPrime takes a function on M to one on M'; FromPrime goes back.
/// The input is checked for invariance on sampled points before the closure
/// is returned.
InvariantFunction transport_invariant(const StarDiagram& d, InvariantFunction f,
                                      Direction direction = Direction::ToPrime);

struct NamedFunction {
  std::string name;
  InvariantFunction f;
};

/// A small family of G-invariant functions on M (or M' with `prime`).
std::vector<NamedFunction> invariant_samples(CatalogId id, bool prime = false);

struct TransportCheck {
  int samples = 0;
  double additive = 0.0;        // |T(f+h) - T f - T h|
  double multiplicative = 0.0;  // |T(f h) - T f T h|
  double unit = 0.0;            // |T 1 - 1|
  double involution = 0.0;      // |T' T f - f|
};

/// Ring-homomorphism and round-trip defects of transport_invariant over
/// every pair of invariant_samples at `samples` random points.
TransportCheck check_transport(const StarDiagram& d, int samples, Rng& rng);

}  // namespace bsl::diagrams
