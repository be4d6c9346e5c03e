#include "bsl/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "bsl/error.hpp"
#include "bsl/sturm.hpp"

namespace bsl::geometry {

using algebra::kI;
using algebra::kPi;
using algebra::Quaternion;

struct GridFunction::Spline {
  boost::math::interpolators::cardinal_cubic_b_spline<double> impl;
};

GridFunction::GridFunction(std::vector<double> values, double length)
    : values_(std::move(values)), length_(length) {
  if (values_.size() < 4) {
    throw Error(ErrorCode::GridMismatch, "grid function needs at least 4 samples");
  }
  if (!(length_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid length must be positive");
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "grid function is not finite");
  }
  step_ = length_ / static_cast<double>(values_.size() - 1);
  spline_ = std::make_shared<const Spline>(
      Spline{{values_.begin(), values_.end(), 0.0, step_}});
}

double GridFunction::operator()(double t) const {
  const double s = t / step_;
  const double k = std::round(s);
  if (std::abs(s - k) <= 1e-6 && k >= 0.0 && k < static_cast<double>(values_.size())) {
    return values_[static_cast<std::size_t>(k)];
  }
  return spline_->impl(std::clamp(t, 0.0, length_));
}

std::string_view to_string(Endpoint e) {
  return e == Endpoint::Collapsing ? "collapsing" : "reflecting";
}

namespace {

using Vec = std::vector<double>;

constexpr int kCircleOrder = 8;

Quaternion as_quat(const Vec& v) { return {v[0], v[1], v[2], v[3]}; }
Vec as_vec(const Quaternion& q) { return {q.w, q.x, q.y, q.z}; }

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Per-entry data of a cohomogeneity-one Kaluza-Klein metric.  `E` is the
// vertical warp factor exp(2 c u) at the orbit of p.
struct Model {
  virtual ~Model() = default;
  virtual double length() const = 0;
  virtual Vec slice(double t) const = 0;
  virtual Vec gen_bullet(const Vec& p) const = 0;
  virtual Vec gen_star(const Vec& p) const = 0;
  virtual double metric(const Vec& p, const Vec& X, const Vec& Y, double E) const = 0;
  // Orders of the ineffective kernels of the G x G action on P and of the
  // residual actions on M and M'.
  virtual int kernel_p() const = 0;
  virtual int kernel_m() const = 0;
  virtual int kernel_mprime() const = 0;
  virtual double base_coordinate(const Vec& x) const = 0;
  virtual Vec random_tangent(const Vec& p, algebra::Rng& rng) const = 0;
  // Differentials of pi and pi' into R^3 and the round metrics there.
  virtual Vec d_pi(const Vec& p, const Vec& X) const = 0;
  virtual Vec d_pi_prime(const Vec& p, const Vec& X) const = 0;
  virtual double base_metric(const Vec& v) const = 0;
};

class TrivialModel final : public Model {
 public:
  TrivialModel(double R, double Q) : R_(R), Q_(Q) {}

  double length() const override { return kPi * R_; }

  Vec slice(double t) const override {
    return {std::sin(t / R_), 0.0, std::cos(t / R_), 0.0};
  }

  Vec gen_bullet(const Vec&) const override { return {0.0, 0.0, 0.0, -1.0}; }
  Vec gen_star(const Vec& p) const override { return {-p[1], p[0], 0.0, 1.0}; }

  // omega(X, a) = a + alpha(X) with alpha chosen so that every star orbit
  // has length 2 pi sqrt(Q).
  double omega(const Vec& p, const Vec& X) const {
    const double k0 = -p[1];
    const double k1 = p[0];
    const double k2 = k0 * k0 + k1 * k1;
    const double s = std::sqrt(std::max(0.0, 1.0 - R_ * R_ * k2 / Q_));
    const double alpha = -R_ * R_ * (k0 * X[0] + k1 * X[1]) / (Q_ * (1.0 + s));
    return X[3] + alpha;
  }

  double metric(const Vec& p, const Vec& X, const Vec& Y, double E) const override {
    const double h = X[0] * Y[0] + X[1] * Y[1] + X[2] * Y[2];
    return R_ * R_ * h + Q_ * E * omega(p, X) * omega(p, Y);
  }

  int kernel_p() const override { return 1; }
  int kernel_m() const override { return 1; }
  int kernel_mprime() const override { return 1; }

  double base_coordinate(const Vec& x) const override {
    return R_ * std::atan2(std::hypot(x[0], x[1]), x[2]);
  }

  Vec random_tangent(const Vec& p, algebra::Rng& rng) const override {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v{g(rng), g(rng), g(rng), g(rng)};
    const double r = v[0] * p[0] + v[1] * p[1] + v[2] * p[2];
    for (int k = 0; k < 3; ++k) v[k] -= r * p[k];
    return v;
  }

  Vec d_pi(const Vec&, const Vec& X) const override { return {X[0], X[1], X[2]}; }

  Vec d_pi_prime(const Vec& p, const Vec& X) const override {
    // pi'(x, theta) = R_{-theta} x.
    const double c = std::cos(-p[3]);
    const double s = std::sin(-p[3]);
    const Vec rx{c * p[0] - s * p[1], s * p[0] + c * p[1], p[2]};
    const Vec rX{c * X[0] - s * X[1], s * X[0] + c * X[1], X[2]};
    // d/dtheta R_{-theta} x = -e_z x R_{-theta} x
    return {rX[0] + X[3] * rx[1], rX[1] - X[3] * rx[0], rX[2]};
  }

  double base_metric(const Vec& v) const override { return R_ * R_ * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

 private:
  double R_;
  double Q_;
};

class HopfModel final : public Model {
 public:
  HopfModel(double R, double Q) : R_(R), Q_(Q) {}

  double length() const override { return kPi * R_; }

  Vec slice(double t) const override {
    const double a = 0.5 * t / R_;
    return {std::cos(a), 0.0, std::sin(a), 0.0};
  }

  Vec gen_bullet(const Vec& p) const override { return as_vec(-(as_quat(p) * kI)); }
  Vec gen_star(const Vec& p) const override { return as_vec(kI * as_quat(p)); }

  double metric(const Vec& p, const Vec& X, const Vec& Y, double E) const override {
    const Vec pi = as_vec(as_quat(p) * kI);
    const double ex = dot(X, pi);
    const double ey = dot(Y, pi);
    return 4.0 * R_ * R_ * (dot(X, Y) - ex * ey) + Q_ * E * ex * ey;
  }

  int kernel_p() const override { return 2; }
  int kernel_m() const override { return 2; }
  int kernel_mprime() const override { return 2; }

  double base_coordinate(const Vec& y) const override {
    return R_ * std::atan2(std::hypot(y[1], y[2]), y[0]);
  }

  Vec random_tangent(const Vec& p, algebra::Rng& rng) const override {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v{g(rng), g(rng), g(rng), g(rng)};
    const double r = dot(v, p);
    for (int k = 0; k < 4; ++k) v[k] -= r * p[k];
    return v;
  }

  Vec d_pi(const Vec& p, const Vec& X) const override {
    const Quaternion q = as_quat(p);
    const Quaternion x = as_quat(X);
    const Quaternion r = x * kI * algebra::conj(q) + q * kI * algebra::conj(x);
    return {r.x, r.y, r.z};
  }

  Vec d_pi_prime(const Vec& p, const Vec& X) const override {
    const Quaternion q = as_quat(p);
    const Quaternion x = as_quat(X);
    const Quaternion r = algebra::conj(x) * kI * q + algebra::conj(q) * kI * x;
    return {r.x, r.y, r.z};
  }

  double base_metric(const Vec& v) const override { return R_ * R_ * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

 private:
  double R_;
  double Q_;
};

std::unique_ptr<Model> model_for(const MetricSpec& m) {
  switch (m.diagram) {
    case CatalogId::TrivialS2: return std::make_unique<TrivialModel>(m.base_radius, m.fiber_scale);
    case CatalogId::Hopf: return std::make_unique<HopfModel>(m.base_radius, m.fiber_scale);
    case CatalogId::GromollMeyer: break;
  }
  throw Error(ErrorCode::NotCohomogeneityOne,
              "diagram '" + std::string(diagrams::to_string(m.diagram)) +
                  "' is not cohomogeneity one; orbit-space reductions are unavailable");
}

double warp_factor(const MetricSpec& m, double t) {
  if (!m.warp_u) return 1.0;
  return std::exp(2.0 * m.warp_scale * (*m.warp_u)(t));
}

// Orbit-volume densities from the two generators.  Each is the length of
// one generator after projecting out the other, computed on the projected
// vector itself: the Gram-determinant formula bb ss - bs^2 cancels badly
// once the fiber term dominates.
struct Densities {
  double p;       // sqrt(det Gram)
  double m;       // sqrt(det / bb): pi-horizontal part of the star generator
  double mprime;  // sqrt(det / ss): pi'-horizontal part of the bullet generator
};

Vec combine(const Vec& x, double c, const Vec& y) {
  Vec r(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) r[k] = x[k] - c * y[k];
  return r;
}

Densities densities_at(const Model& model, const Vec& p, double E) {
  const Vec xb = model.gen_bullet(p);
  const Vec xs = model.gen_star(p);
  const double bb = model.metric(p, xb, xb, E);
  const double ss = model.metric(p, xs, xs, E);
  const double bs = model.metric(p, xb, xs, E);
  const Vec hs = combine(xs, bs / bb, xb);
  const Vec hb = combine(xb, bs / ss, xs);
  const double m2 = std::max(0.0, model.metric(p, hs, hs, E));
  const double mp2 = std::max(0.0, model.metric(p, hb, hb, E));
  return {std::sqrt(bb * m2), std::sqrt(m2), std::sqrt(mp2)};
}

void check_grid(int n) {
  if (n < 16) throw Error(ErrorCode::InvalidArgument, "grid must have n >= 16 cells");
}

}  // namespace

MetricSpec default_metric(CatalogId id) {
  MetricSpec m;
  m.diagram = id;
  switch (id) {
    case CatalogId::TrivialS2:
      m.base_radius = 1.0;
      m.fiber_scale = 2.0;
      break;
    case CatalogId::Hopf:
      m.base_radius = 0.5;
      m.fiber_scale = 1.0;
      break;
    case CatalogId::GromollMeyer:
      m.base_radius = 1.0;
      m.fiber_scale = 1.0;
      break;
  }
  return m;
}

MetricSpec kaluza_klein(const diagrams::StarDiagram& d, double base_radius, double fiber_scale) {
  if (!(base_radius > 0.0) || !(fiber_scale > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "base radius and fiber scale must be positive");
  }
  if (d.id == CatalogId::TrivialS2 && !(fiber_scale > base_radius * base_radius)) {
    throw Error(ErrorCode::InvalidArgument,
                "trivial-s2 connection needs fiber scale Q > R^2 (got Q = " +
                    std::to_string(fiber_scale) + ", R = " + std::to_string(base_radius) + ")");
  }
  MetricSpec m;
  m.diagram = d.id;
  m.base_radius = base_radius;
  m.fiber_scale = fiber_scale;
  return m;
}

MetricSpec warp(const MetricSpec& m, const GridFunction& u, double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, "warp scale must be finite and >= 0");
  }
  const double L = orbit_length(m);
  if (std::abs(u.length() - L) > 1e-12 * L) {
    throw Error(ErrorCode::GridMismatch, "warp function covers [0, " + std::to_string(u.length()) +
                                             "], orbit space is [0, " + std::to_string(L) + "]");
  }
  MetricSpec r = m;
  r.warp_u = u;
  r.warp_scale = c;
  return r;
}

std::uint64_t fingerprint(const MetricSpec& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix_bytes = [&h](const void* data, std::size_t len) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < len; ++k) {
      h ^= b[k];
      h *= 1099511628211ULL;
    }
  };
  auto mix_double = [&](double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    mix_bytes(&bits, sizeof bits);
  };
  const auto id = static_cast<std::int32_t>(m.diagram);
  mix_bytes(&id, sizeof id);
  mix_double(m.base_radius);
  mix_double(m.fiber_scale);
  if (m.warp_u) {
    mix_double(m.warp_scale);
    mix_double(m.warp_u->length());
    for (double v : m.warp_u->values()) mix_double(v);
  }
  return h;
}

std::string fingerprint_hex(std::uint64_t f) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << f;
  return os.str();
}

double orbit_length(const MetricSpec& m) { return model_for(m)->length(); }

Point slice_point(const MetricSpec& m, double t) { return model_for(m)->slice(t); }

double base_orbit_coordinate(const MetricSpec& m, Side side, const BasePoint& x) {
  if (side == Side::P) throw Error(ErrorCode::InvalidArgument, "side must be M or Mprime");
  return model_for(m)->base_coordinate(x);
}

OrbitProfile make_profile(Side side, double length, std::vector<double> w, Endpoint left,
                          Endpoint right) {
  if (w.size() < 3) throw Error(ErrorCode::InvalidArgument, "profile needs at least 3 nodes");
  OrbitProfile p;
  p.side = side;
  p.length = length;
  p.w = std::move(w);
  p.left = left;
  p.right = right;
  const int n = p.n();
  p.t.resize(n + 1);
  for (int i = 0; i <= n; ++i) p.t[i] = length * i / n;
  return p;
}

OrbitProfile orbit_profile(const MetricSpec& m, Side side, int n) {
  check_grid(n);
  const auto model = model_for(m);
  const auto d = diagrams::catalog(m.diagram);
  const auto rule = algebra::haar_rule(d.group, kCircleOrder);
  const double L = model->length();

  OrbitProfile prof = make_profile(side, L, std::vector<double>(n + 1, 0.0),
                                   Endpoint::Collapsing, Endpoint::Collapsing);
  prof.diagram = m.diagram;
  prof.fingerprint = fingerprint(m);
  prof.fiber_scale = m.fiber_scale;
  prof.warp_scale = m.warped() ? m.warp_scale : 0.0;
  prof.warped = m.warped();

  for (int i = 1; i < n; ++i) {
    const double t = prof.t[i];
    const double E = warp_factor(m, t);
    const Point p = model->slice(t);
    double acc = 0.0;
    switch (side) {
      case Side::P:
        for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
          const Point pa = d.star(rule.nodes[a], p);
          for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
            const Point q = d.bullet(rule.nodes[b], pa);
            acc += rule.weights[a] * rule.weights[b] * densities_at(*model, q, E).p;
          }
        }
        acc /= model->kernel_p();
        break;
      case Side::M:
        // Each star orbit maps onto a G-orbit of M; the length element is the
        // pi-horizontal part of the star generator.
        for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
          acc += rule.weights[a] * densities_at(*model, d.star(rule.nodes[a], p), E).m;
        }
        acc /= model->kernel_m();
        break;
      case Side::MPrime:
        for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
          acc += rule.weights[a] * densities_at(*model, d.bullet(rule.nodes[a], p), E).mprime;
        }
        acc /= model->kernel_mprime();
        break;
    }
    prof.w[i] = acc;
  }
  // Both ends of the catalog orbit spaces are fixed points of the residual
  // rotation, where the principal orbits collapse.
  prof.w[0] = 0.0;
  prof.w[n] = 0.0;
  return prof;
}

std::vector<double> fiber_volume(const MetricSpec& m, Which which, int n) {
  check_grid(n);
  const auto model = model_for(m);
  const auto d = diagrams::catalog(m.diagram);
  const auto rule = algebra::haar_rule(d.group, kCircleOrder);
  const double L = model->length();
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = L * i / n;
    const double E = warp_factor(m, t);
    const Point p = model->slice(t);
    double acc = 0.0;
    for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
      if (which == Which::Bullet) {
        const Point q = d.bullet(rule.nodes[a], p);
        const Vec x = model->gen_bullet(q);
        acc += rule.weights[a] * std::sqrt(model->metric(q, x, x, E));
      } else {
        const Point q = d.star(rule.nodes[a], p);
        const Vec x = model->gen_star(q);
        acc += rule.weights[a] * std::sqrt(model->metric(q, x, x, E));
      }
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> mean_curvature(const OrbitProfile& p) {
  const int n = p.n();
  const double dt = p.dt();
  const auto& w = p.w;
  std::vector<double> h(n + 1);
  for (int i = 1; i < n; ++i) h[i] = -(w[i + 1] - w[i - 1]) / (2.0 * dt * w[i]);
  constexpr double inf = std::numeric_limits<double>::infinity();
  h[0] = (w[0] == 0.0) ? -inf : -(-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * dt * w[0]);
  h[n] = (w[n] == 0.0) ? inf : -(3.0 * w[n] - 4.0 * w[n - 1] + w[n - 2]) / (2.0 * dt * w[n]);
  return h;
}

double laplacian_identity_residual(const MetricSpec& m, const std::vector<double>& phi, int n) {
  if (static_cast<int>(phi.size()) != n + 1) {
    throw Error(ErrorCode::GridMismatch, "phi must have n + 1 samples");
  }
  const auto op_p = sturm::assemble(orbit_profile(m, Side::P, n));
  const auto op_m = sturm::assemble(orbit_profile(m, Side::M, n));
  const auto fiber = fiber_volume(m, Which::Bullet, n);
  const auto ap = sturm::apply(op_p, phi);
  const auto am = sturm::apply(op_m, phi);
  const double dt = op_p.dt;
  double worst = 0.0;
  for (int i = 1; i < n; ++i) {
    const double lap_p = ap[i] / op_p.mass[i];
    const double lap_m = am[i] / op_m.mass[i];
    const double h = -(fiber[i + 1] - fiber[i - 1]) / (2.0 * dt * fiber[i]);
    const double dphi = (phi[i + 1] - phi[i - 1]) / (2.0 * dt);
    worst = std::max(worst, std::abs(lap_p - lap_m - h * dphi));
  }
  return worst;
}

double submersion_defect(const MetricSpec& m, int samples, algebra::Rng& rng) {
  if (m.warped()) throw Error(ErrorCode::InvalidArgument, "submersion check needs an unwarped metric");
  const auto model = model_for(m);
  const auto d = diagrams::catalog(m.diagram);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Point p = d.random_point(rng);
    const Vec v = model->random_tangent(p, rng);
    const Vec xb = model->gen_bullet(p);
    const Vec xs = model->gen_star(p);
    for (int side = 0; side < 2; ++side) {
      const Vec& gen = side == 0 ? xb : xs;
      const double c = model->metric(p, v, gen, 1.0) / model->metric(p, gen, gen, 1.0);
      Vec h = v;
      for (std::size_t k = 0; k < h.size(); ++k) h[k] -= c * gen[k];
      const double len2 = model->metric(p, h, h, 1.0);
      const Vec img = side == 0 ? model->d_pi(p, h) : model->d_pi_prime(p, h);
      worst = std::max(worst, std::abs(model->base_metric(img) - len2) / len2);
    }
  }
  return worst;
}

nlohmann::json metric_to_json(const MetricSpec& m) {
  nlohmann::json j;
  j["diagram"] = diagrams::to_string(m.diagram);
  j["base_radius"] = m.base_radius;
  j["fiber_scale"] = m.fiber_scale;
  j["warped"] = m.warped();
  if (m.warp_u) {
    j["warp_scale"] = m.warp_scale;
    j["warp_samples"] = m.warp_u->values().size();
  }
  j["fingerprint"] = fingerprint_hex(fingerprint(m));
  return j;
}

void write_profile_csv(std::ostream& out, const OrbitProfile& p) {
  const auto h = mean_curvature(p);
  out << "t,w,h\n";
  out << std::setprecision(17);
  for (int i = 0; i <= p.n(); ++i) out << p.t[i] << ',' << p.w[i] << ',' << h[i] << '\n';
}

nlohmann::json profile_sidecar(const OrbitProfile& p) {
  nlohmann::json j;
  j["entry"] = diagrams::to_string(p.diagram);
  j["side"] = diagrams::to_string(p.side);
  j["n"] = p.n();
  j["L"] = p.length;
  j["endpoints"] = {to_string(p.left), to_string(p.right)};
  j["Q"] = p.fiber_scale;
  j["warp_scale"] = p.warp_scale;
  j["warped"] = p.warped;
  j["fingerprint"] = fingerprint_hex(p.fingerprint);
  return j;
}

ProfileTable read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedInput, "empty profile file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,w,h") throw Error(ErrorCode::MalformedInput, "expected header 't,w,h'");
  ProfileTable table;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double vals[3];
    std::stringstream ss(line);
    std::string cell;
    int k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= 3) throw Error(ErrorCode::MalformedInput, "too many columns on row " + std::to_string(row));
      try {
        std::size_t used = 0;
        vals[k] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedInput, "bad number '" + cell + "' on row " + std::to_string(row));
      }
      ++k;
    }
    if (k != 3) throw Error(ErrorCode::MalformedInput, "expected 3 columns on row " + std::to_string(row));
    table.t.push_back(vals[0]);
    table.w.push_back(vals[1]);
    table.h.push_back(vals[2]);
  }
  if (table.t.size() < 2) throw Error(ErrorCode::MalformedInput, "profile has fewer than 2 rows");
  return table;
}

}  // namespace bsl::geometry
