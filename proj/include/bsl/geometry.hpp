#pragma once

// Invariant metrics on the catalog diagrams and their one-dimensional
// orbit-space reductions.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bsl/diagrams.hpp"

namespace bsl::geometry {

using diagrams::BasePoint;
using diagrams::CatalogId;
using diagrams::Point;
using diagrams::Side;
using diagrams::Which;

enum class Endpoint { Collapsing, Reflecting };

std::string_view to_string(Endpoint e);

/// Samples on a uniform grid over [0, length] with piecewise-cubic
/// interpolation.  Evaluation at (or within 1e-6 spacings of) a node returns
/// the stored sample unchanged.
class GridFunction {
 public:
  GridFunction(std::vector<double> values, double length);

  double operator()(double t) const;
  const std::vector<double>& values() const { return values_; }
  double length() const { return length_; }
  int intervals() const { return static_cast<int>(values_.size()) - 1; }

 private:
  struct Spline;
  std::vector<double> values_;
  double length_;
  double step_;
  std::shared_ptr<const Spline> spline_;
};

/// Kaluza-Klein metric g = pi^* g_M + Q omega (x) omega on P, optionally with
/// the fiber term rescaled by exp(2 c u) for an invariant u.
struct MetricSpec {
  CatalogId diagram = CatalogId::Hopf;
  double base_radius = 0.5;  // radius of the round base sphere
  double fiber_scale = 1.0;  // Q
  std::optional<GridFunction> warp_u;
  double warp_scale = 1.0;  // c

  bool warped() const { return warp_u.has_value(); }
};

MetricSpec default_metric(CatalogId id);
MetricSpec kaluza_klein(const diagrams::StarDiagram& d, double base_radius, double fiber_scale);
MetricSpec warp(const MetricSpec& m, const GridFunction& u, double c);

/// FNV-1a over every field that influences a profile.
std::uint64_t fingerprint(const MetricSpec& m);
std::string fingerprint_hex(std::uint64_t f);

/// Length of the orbit space; throws NotCohomogeneityOne for gm.
double orbit_length(const MetricSpec& m);

/// Horizontal unit-speed curve through all orbits, t in [0, L].
Point slice_point(const MetricSpec& m, double t);

/// Orbit-space coordinate of a point of M or M'.
double base_orbit_coordinate(const MetricSpec& m, Side side, const BasePoint& x);

struct OrbitProfile {
  Side side = Side::M;
  CatalogId diagram = CatalogId::Hopf;
  double length = 0.0;
  std::vector<double> t;
  std::vector<double> w;
  Endpoint left = Endpoint::Collapsing;
  Endpoint right = Endpoint::Collapsing;
  std::uint64_t fingerprint = 0;
  double fiber_scale = 0.0;
  double warp_scale = 0.0;
  bool warped = false;

  int n() const { return static_cast<int>(w.size()) - 1; }
  double dt() const { return length / n(); }
};

/// Builds a profile directly from weights on a uniform grid over [0, length].
OrbitProfile make_profile(Side side, double length, std::vector<double> w, Endpoint left,
                          Endpoint right);

/// Orbit volumes along the slice, by Haar quadrature of the Gram
/// determinant of the orbit generators.  n >= 16.
OrbitProfile orbit_profile(const MetricSpec& m, Side side, int n);

/// Volumes of single bullet (pi) or star (pi') fibers along the slice.
std::vector<double> fiber_volume(const MetricSpec& m, Which which, int n);

/// h = -d/dt log w: centered differences inside, one-sided at the ends
/// (-inf / +inf at a collapsing left / right end).
std::vector<double> mean_curvature(const OrbitProfile& p);

/// Max over interior nodes of the defect in
///   -Lap_P phi = -Lap_M phi + dphi(H)
/// with both Laplacians taken from the finite-volume reductions and H the
/// mean curvature of the bullet fibers.  phi has n + 1 samples.
double laplacian_identity_residual(const MetricSpec& m, const std::vector<double>& phi, int n);

/// Largest relative defect | |d pi v|^2 - |v|^2 | / |v|^2 over random
/// horizontal v, for both projections, with the round metrics on M and M'.
/// Unwarped metrics only.
double submersion_defect(const MetricSpec& m, int samples, algebra::Rng& rng);

nlohmann::json metric_to_json(const MetricSpec& m);

void write_profile_csv(std::ostream& out, const OrbitProfile& p);
nlohmann::json profile_sidecar(const OrbitProfile& p);

struct ProfileTable {
  std::vector<double> t;
  std::vector<double> w;
  std::vector<double> h;
};
/// Parses a `t,w,h` CSV; throws MalformedInput.
ProfileTable read_profile_csv(std::istream& in);

}  // namespace bsl::geometry
