#include "bsl/diagrams.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "bsl/error.hpp"

namespace bsl::diagrams {

using algebra::conj;
using algebra::kI;
using algebra::kOne;
using algebra::kPi;
using algebra::kTwoPi;
using algebra::QuatMatrix;
using algebra::Quaternion;

namespace {

constexpr double kFixedTol = 1e-9;

Quaternion quat_at(const std::vector<double>& v, std::size_t k) {
  return {v[k], v[k + 1], v[k + 2], v[k + 3]};
}

void put_quat(std::vector<double>& v, std::size_t k, const Quaternion& q) {
  v[k] = q.w;
  v[k + 1] = q.x;
  v[k + 2] = q.y;
  v[k + 3] = q.z;
}

Quaternion imag_quat(const BasePoint& y) { return {0.0, y[0], y[1], y[2]}; }
BasePoint imag_part(const Quaternion& q) { return {q.x, q.y, q.z}; }

QuatMatrix to_matrix(const Point& p) {
  return {quat_at(p, 0), quat_at(p, 4), quat_at(p, 8), quat_at(p, 12)};
}

Point from_matrix(const QuatMatrix& m) {
  Point p(16);
  put_quat(p, 0, m.a);
  put_quat(p, 4, m.b);
  put_quat(p, 8, m.c);
  put_quat(p, 12, m.d);
  return p;
}

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

double norm3(const std::vector<double>& x) {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

std::vector<double> random_unit3(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    std::vector<double> v{gauss(rng), gauss(rng), gauss(rng)};
    const double n = norm3(v);
    if (n > 1e-8) {
      for (double& c : v) c /= n;
      return v;
    }
  }
}

// Rotation about the z axis.
std::vector<double> rotate_z(double angle, const std::vector<double>& x) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * x[0] - s * x[1], s * x[0] + c * x[1], x[2]};
}

StarDiagram make_trivial_s2() {
  StarDiagram d;
  d.id = CatalogId::TrivialS2;
  d.description = "S^2 x S^1 with S^1 rotating S^2 about the z axis; M = M' = S^2";
  d.group = GroupId::Circle;
  d.cohomogeneity_one = true;
  d.membership = [](const Point& p) { return std::abs(norm3(p) - 1.0); };
  d.random_point = [](Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    Point p = random_unit3(rng);
    p.push_back(u(rng));
    return p;
  };
  d.distance = [](const Point& p, const Point& q) {
    const double dx = euclid({p[0], p[1], p[2]}, {q[0], q[1], q[2]});
    const double dt = 2.0 * std::sin(0.5 * (p[3] - q[3]));
    return std::sqrt(dx * dx + dt * dt);
  };
  d.star = [](const GroupElement& g, const Point& p) {
    Point r = rotate_z(g.angle(), p);
    r.push_back(p[3] + g.angle());
    return r;
  };
  d.bullet = [](const GroupElement& g, const Point& p) {
    return Point{p[0], p[1], p[2], p[3] - g.angle()};
  };
  d.proj_bullet = [](const Point& p) { return BasePoint{p[0], p[1], p[2]}; };
  d.proj_star = [](const Point& p) { return rotate_z(-p[3], p); };
  d.lift_bullet = [](const BasePoint& x) { return Point{x[0], x[1], x[2], 0.0}; };
  d.lift_star = d.lift_bullet;
  d.base_distance = [](const BasePoint& a, const BasePoint& b) { return euclid(a, b); };
  d.base_distance_prime = d.base_distance;
  return d;
}

// Unit quaternion p with p i conj(p) = y; the cut locus y = -i uses j.
Quaternion hopf_lift(const BasePoint& y) {
  const Quaternion q = kOne - imag_quat(y) * kI;
  if (algebra::norm(q) < 1e-8) return algebra::kJ;
  return algebra::normalized(q);
}

StarDiagram make_hopf() {
  StarDiagram d;
  d.id = CatalogId::Hopf;
  d.description = "S^3 with the circle acting on the right (bullet) and on the left (star); "
                  "both quotients are S^2";
  d.group = GroupId::Circle;
  d.cohomogeneity_one = true;
  d.membership = [](const Point& p) { return std::abs(algebra::norm(quat_at(p, 0)) - 1.0); };
  d.random_point = [](Rng& rng) {
    const Quaternion q = algebra::random_unit_quaternion(rng);
    return Point{q.w, q.x, q.y, q.z};
  };
  d.distance = [](const Point& p, const Point& q) { return euclid(p, q); };
  d.bullet = [](const GroupElement& g, const Point& p) {
    const Quaternion r = quat_at(p, 0) * conj(g.as_quaternion());
    return Point{r.w, r.x, r.y, r.z};
  };
  d.star = [](const GroupElement& g, const Point& p) {
    const Quaternion r = g.as_quaternion() * quat_at(p, 0);
    return Point{r.w, r.x, r.y, r.z};
  };
  d.proj_bullet = [](const Point& p) {
    const Quaternion q = quat_at(p, 0);
    return imag_part(q * kI * conj(q));
  };
  d.proj_star = [](const Point& p) {
    const Quaternion q = quat_at(p, 0);
    return imag_part(conj(q) * kI * q);
  };
  d.lift_bullet = [](const BasePoint& y) {
    const Quaternion q = hopf_lift(y);
    return Point{q.w, q.x, q.y, q.z};
  };
  d.lift_star = [](const BasePoint& y) {
    const Quaternion q = conj(hopf_lift(y));
    return Point{q.w, q.x, q.y, q.z};
  };
  d.base_distance = [](const BasePoint& a, const BasePoint& b) { return euclid(a, b); };
  d.base_distance_prime = d.base_distance;
  return d;
}

// Distance in the gm quotient M' between the star orbits of two
// representatives: solve B = star(r, A) for r from the second column, then
// measure what is left.
double gm_orbit_distance(const BasePoint& pa, const BasePoint& pb) {
  const QuatMatrix A = to_matrix(pa);
  const QuatMatrix B = to_matrix(pb);
  Quaternion r = (algebra::norm(A.c) >= algebra::norm(A.d)) ? B.c * algebra::inverse(A.c)
                                                            : B.d * algebra::inverse(A.d);
  if (algebra::norm(r) < 1e-300) return algebra::distance(A, B);
  r = algebra::normalized(r);
  const QuatMatrix rA{r * A.a * conj(r), r * A.b * conj(r), r * A.c, r * A.d};
  return algebra::distance(rA, B);
}

StarDiagram make_gm() {
  StarDiagram d;
  d.id = CatalogId::GromollMeyer;
  d.description = "Sp(2) with S^3 acting on the second column (bullet) and by "
                  "q(a,c;b,d) = (q a qbar, q c; q b qbar, q d) (star); M = S^7, M' exotic";
  d.group = GroupId::S3;
  d.cohomogeneity_one = false;
  d.membership = [](const Point& p) { return algebra::sp2_residual(to_matrix(p)); };
  d.random_point = [](Rng& rng) { return from_matrix(algebra::random_sp2(rng)); };
  d.distance = [](const Point& p, const Point& q) { return euclid(p, q); };
  d.bullet = [](const GroupElement& g, const Point& p) {
    const Quaternion qb = conj(g.quaternion());
    QuatMatrix m = to_matrix(p);
    m.c = m.c * qb;
    m.d = m.d * qb;
    return from_matrix(m);
  };
  d.star = [](const GroupElement& g, const Point& p) {
    const Quaternion& q = g.quaternion();
    const Quaternion qb = conj(q);
    QuatMatrix m = to_matrix(p);
    m = {q * m.a * qb, q * m.b * qb, q * m.c, q * m.d};
    return from_matrix(m);
  };
  d.proj_bullet = [](const Point& p) { return BasePoint(p.begin(), p.begin() + 8); };
  d.proj_star = [](const Point& p) { return p; };
  d.lift_bullet = [](const BasePoint& x) {
    return from_matrix(algebra::sp2_complete_column(quat_at(x, 0), quat_at(x, 4)));
  };
  d.lift_star = [](const BasePoint& y) { return y; };
  d.base_distance = [](const BasePoint& a, const BasePoint& b) { return euclid(a, b); };
  d.base_distance_prime = gm_orbit_distance;
  return d;
}

// Net fixed-point counts -> isotropy dimension.  All of G fixes the point:
// dim G; a full coordinate circle or more (but not everything): 1;
// otherwise a finite isotropy group: 0.
int dimension_from_count(GroupId g, std::size_t fixed, std::size_t net_size, int grid) {
  if (fixed == net_size) return algebra::dimension(g);
  if (fixed >= static_cast<std::size_t>(grid)) return 1;
  return 0;
}

}  // namespace

std::string_view to_string(CatalogId id) {
  switch (id) {
    case CatalogId::TrivialS2: return "trivial-s2";
    case CatalogId::Hopf: return "hopf";
    case CatalogId::GromollMeyer: return "gm";
  }
  return "?";
}

std::string_view to_string(Which which) { return which == Which::Bullet ? "bullet" : "star"; }

std::string_view to_string(Side side) {
  switch (side) {
    case Side::P: return "P";
    case Side::M: return "M";
    case Side::MPrime: return "Mprime";
  }
  return "?";
}

CatalogId parse_catalog_id(std::string_view name) {
  if (name == "trivial-s2") return CatalogId::TrivialS2;
  if (name == "hopf") return CatalogId::Hopf;
  if (name == "gm") return CatalogId::GromollMeyer;
  throw Error(ErrorCode::UnknownId, "unknown diagram '" + std::string(name) + "'");
}

Side parse_side(std::string_view name) {
  if (name == "P") return Side::P;
  if (name == "M") return Side::M;
  if (name == "Mprime" || name == "M'" || name == "Mp") return Side::MPrime;
  throw Error(ErrorCode::InvalidArgument, "unknown side '" + std::string(name) + "'");
}

BasePoint StarDiagram::act_base(const GroupElement& g, const BasePoint& x) const {
  return proj_bullet(star(g, lift_bullet(x)));
}

BasePoint StarDiagram::act_base_prime(const GroupElement& g, const BasePoint& y) const {
  return proj_star(bullet(g, lift_star(y)));
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (CatalogId id : {CatalogId::TrivialS2, CatalogId::Hopf, CatalogId::GromollMeyer}) {
      const StarDiagram d = catalog(id);
      out.push_back({std::string(to_string(id)), d.description,
                     std::string(algebra::to_string(d.group)), d.cohomogeneity_one});
    }
    return out;
  }();
  return entries;
}

StarDiagram catalog(CatalogId id) {
  switch (id) {
    case CatalogId::TrivialS2: return make_trivial_s2();
    case CatalogId::Hopf: return make_hopf();
    case CatalogId::GromollMeyer: return make_gm();
  }
  throw Error(ErrorCode::UnknownId, "unknown catalog id");
}

StarDiagram catalog(std::string_view name) { return catalog(parse_catalog_id(name)); }

double check_commute(const StarDiagram& d, int samples, Rng& rng) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Point p = d.random_point(rng);
    const GroupElement g = algebra::random_element(d.group, rng);
    const GroupElement h = algebra::random_element(d.group, rng);
    worst = std::max(worst, d.distance(d.star(g, d.bullet(h, p)), d.bullet(h, d.star(g, p))));
  }
  return worst;
}

MembershipResidual check_membership(const StarDiagram& d, int samples, Rng& rng) {
  MembershipResidual r;
  for (int s = 0; s < samples; ++s) {
    const Point p = d.random_point(rng);
    const GroupElement g = algebra::random_element(d.group, rng);
    r.bullet = std::max(r.bullet, d.membership(d.bullet(g, p)));
    r.star = std::max(r.star, d.membership(d.star(g, p)));
  }
  return r;
}

double check_projection_invariance(const StarDiagram& d, int samples, Rng& rng) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Point p = d.random_point(rng);
    const GroupElement g = algebra::random_element(d.group, rng);
    worst = std::max(worst, d.base_distance(d.proj_bullet(d.bullet(g, p)), d.proj_bullet(p)));
    worst = std::max(worst,
                     d.base_distance_prime(d.proj_star(d.star(g, p)), d.proj_star(p)));
  }
  return worst;
}

std::vector<GroupElement> isotropy_probe(const StarDiagram& d, Which which, const Point& p,
                                         int grid) {
  const Action& act = (which == Which::Bullet) ? d.bullet : d.star;
  std::vector<GroupElement> fixed;
  for (const GroupElement& g : algebra::group_net(d.group, grid)) {
    if (d.distance(act(g, p), p) <= kFixedTol) fixed.push_back(g);
  }
  return fixed;
}

IsotropyDimensions isotropy_compare(const StarDiagram& d, const Point& p, int grid) {
  const auto net = algebra::group_net(d.group, grid);
  const BasePoint x = d.proj_bullet(p);
  const BasePoint y = d.proj_star(p);
  std::size_t fixed_x = 0;
  std::size_t fixed_y = 0;
  for (const GroupElement& g : net) {
    if (d.base_distance(d.act_base(g, x), x) <= kFixedTol) ++fixed_x;
    if (d.base_distance_prime(d.act_base_prime(g, y), y) <= kFixedTol) ++fixed_y;
  }
  return {dimension_from_count(d.group, fixed_x, net.size(), grid),
          dimension_from_count(d.group, fixed_y, net.size(), grid)};
}

InvariantFunction transport_invariant(const StarDiagram& d, InvariantFunction f,
                                      Direction direction) {
  const bool to_prime = direction == Direction::ToPrime;
  // Source side: the projection f lives on and the action that moves it.
  const Projection& src_proj = to_prime ? d.proj_bullet : d.proj_star;
  const Projection& dst_proj = to_prime ? d.proj_star : d.proj_bullet;
  const Section& dst_lift = to_prime ? d.lift_star : d.lift_bullet;

  Rng rng(0x5eed);
  constexpr int kChecks = 32;
  for (int s = 0; s < kChecks; ++s) {
    const Point p = d.random_point(rng);
    const GroupElement g = algebra::random_element(d.group, rng);
    const BasePoint x = src_proj(p);
    const BasePoint gx = to_prime ? d.act_base(g, x) : d.act_base_prime(g, x);
    const double fx = f(x);
    if (std::abs(f(gx) - fx) > kFixedTol * std::max(1.0, std::abs(fx))) {
      throw Error(ErrorCode::NotInvariant, "function is not invariant under the residual action");
    }
    // Two preimages of the same target point: p itself and the canonical lift.
    const double via_lift = f(src_proj(dst_lift(dst_proj(p))));
    if (std::abs(via_lift - fx) > kFixedTol * std::max(1.0, std::abs(fx))) {
      throw Error(ErrorCode::IllDefined, "preimages of one orbit give different values");
    }
  }
  return [src_proj, dst_lift, f = std::move(f)](const BasePoint& y) {
    return f(src_proj(dst_lift(y)));
  };
}

std::vector<NamedFunction> invariant_samples(CatalogId id, bool prime) {
  std::vector<NamedFunction> out;
  out.push_back({"one", [](const BasePoint&) { return 1.0; }});
  switch (id) {
    case CatalogId::TrivialS2:
      out.push_back({"z", [](const BasePoint& x) { return x[2]; }});
      out.push_back({"z^2", [](const BasePoint& x) { return x[2] * x[2]; }});
      out.push_back({"exp(z)", [](const BasePoint& x) { return std::exp(x[2]); }});
      break;
    case CatalogId::Hopf:
      out.push_back({"x", [](const BasePoint& y) { return y[0]; }});
      out.push_back({"x^3-x", [](const BasePoint& y) { return y[0] * y[0] * y[0] - y[0]; }});
      out.push_back({"cos(2x)", [](const BasePoint& y) { return std::cos(2.0 * y[0]); }});
      break;
    case CatalogId::GromollMeyer:
      if (!prime) {
        out.push_back({"Re a", [](const BasePoint& x) { return x[0]; }});
        out.push_back({"|a|^2", [](const BasePoint& x) {
                         return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
                       }});
        out.push_back({"Re(a conj b)", [](const BasePoint& x) {
                         return x[0] * x[4] + x[1] * x[5] + x[2] * x[6] + x[3] * x[7];
                       }});
      } else {
        // Functions of a star-orbit representative that are bullet and star
        // invariant: entries of the first column built from real parts.
        out.push_back({"Re a", [](const BasePoint& y) { return y[0]; }});
        out.push_back({"|b|^2", [](const BasePoint& y) {
                         return y[4] * y[4] + y[5] * y[5] + y[6] * y[6] + y[7] * y[7];
                       }});
        out.push_back({"Re b", [](const BasePoint& y) { return y[4]; }});
      }
      break;
  }
  return out;
}

TransportCheck check_transport(const StarDiagram& d, int samples, Rng& rng) {
  TransportCheck r;
  r.samples = samples;
  const auto fs = invariant_samples(d.id, false);
  std::vector<InvariantFunction> tf;
  for (const auto& nf : fs) tf.push_back(transport_invariant(d, nf.f, Direction::ToPrime));
  std::vector<InvariantFunction> back;
  for (const auto& t : tf) back.push_back(transport_invariant(d, t, Direction::FromPrime));

  const std::size_t m = fs.size();
  std::vector<std::vector<InvariantFunction>> sums(m), prods(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const auto fa = fs[a].f;
      const auto fb = fs[b].f;
      sums[a].push_back(transport_invariant(
          d, [fa, fb](const BasePoint& x) { return fa(x) + fb(x); }, Direction::ToPrime));
      prods[a].push_back(transport_invariant(
          d, [fa, fb](const BasePoint& x) { return fa(x) * fb(x); }, Direction::ToPrime));
    }
  }

  for (int s = 0; s < samples; ++s) {
    const Point p = d.random_point(rng);
    const BasePoint x = d.proj_bullet(p);
    const BasePoint y = d.proj_star(p);
    r.unit = std::max(r.unit, std::abs(tf[0](y) - 1.0));
    for (std::size_t a = 0; a < m; ++a) {
      const double fx = fs[a].f(x);
      r.involution = std::max(r.involution,
                              std::abs(back[a](x) - fx) / std::max(1.0, std::abs(fx)));
      for (std::size_t b = 0; b < m; ++b) {
        const double ta = tf[a](y);
        const double tb = tf[b](y);
        r.additive = std::max(r.additive, std::abs(sums[a][b](y) - (ta + tb)));
        r.multiplicative = std::max(r.multiplicative, std::abs(prods[a][b](y) - ta * tb));
      }
    }
  }
  return r;
}

}  // namespace bsl::diagrams
