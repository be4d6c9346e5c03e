#include "bsl/algebra.hpp"

#include <algorithm>
#include <cassert>

#include "bsl/error.hpp"

namespace bsl {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GroupMismatch: return "GroupMismatch";
    case ErrorCode::UnsupportedGroup: return "UnsupportedGroup";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::IllDefined: return "IllDefined";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NotCohomogeneityOne: return "NotCohomogeneityOne";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

}  // namespace bsl

namespace bsl::algebra {

Quaternion normalized(const Quaternion& q) {
  const double n = norm(q);
  if (n == 0.0) throw Error(ErrorCode::ZeroVector, "cannot normalize the zero quaternion");
  return (1.0 / n) * q;
}

Quaternion inverse(const Quaternion& q) {
  const double n2 = norm2(q);
  if (n2 == 0.0) throw Error(ErrorCode::ZeroVector, "zero quaternion has no inverse");
  return (1.0 / n2) * conj(q);
}

Quaternion random_unit_quaternion(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Quaternion q{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    if (norm2(q) > 1e-12) return normalized(q);
  }
}

QuatMatrix operator*(const QuatMatrix& m, const QuatMatrix& n) {
  return {m.a * n.a + m.c * n.b, m.b * n.a + m.d * n.b, m.a * n.c + m.c * n.d,
          m.b * n.c + m.d * n.d};
}

QuatMatrix identity_matrix() { return {kOne, Quaternion{}, Quaternion{}, kOne}; }

double distance(const QuatMatrix& m, const QuatMatrix& n) {
  return std::sqrt(norm2(m.a - n.a) + norm2(m.b - n.b) + norm2(m.c - n.c) + norm2(m.d - n.d));
}

double sp2_residual(const QuatMatrix& m) {
  const double row1 = std::abs(std::sqrt(norm2(m.a) + norm2(m.c)) - 1.0);
  const double row2 = std::abs(std::sqrt(norm2(m.b) + norm2(m.d)) - 1.0);
  const double cross = norm(m.a * conj(m.b) + m.c * conj(m.d));
  return std::max({row1, row2, cross});
}

QuatMatrix sp2_reorthonormalize(const QuatMatrix& m) {
  QuatMatrix r = m;
  const double n1 = std::sqrt(norm2(r.a) + norm2(r.c));
  r.a = (1.0 / n1) * r.a;
  r.c = (1.0 / n1) * r.c;
  // Remove the component of row (b, d) along row (a, c): mu = b conj(a) + d conj(c).
  const Quaternion mu = r.b * conj(r.a) + r.d * conj(r.c);
  r.b = r.b - mu * r.a;
  r.d = r.d - mu * r.c;
  const double n2 = std::sqrt(norm2(r.b) + norm2(r.d));
  r.b = (1.0 / n2) * r.b;
  r.d = (1.0 / n2) * r.d;
  return r;
}

QuatMatrix sp2_complete_column(const Quaternion& a, const Quaternion& b) {
  // Second column orthogonal to (a, b); pick the branch that avoids a
  // division by the smaller entry.
  const double na = norm(a);
  const double nb = norm(b);
  QuatMatrix m{a, b, {}, {}};
  if (na >= nb) {
    m.c = (-1.0 / na) * (a * conj(b));
    m.d = Quaternion{na, 0.0, 0.0, 0.0};
  } else {
    m.c = Quaternion{nb, 0.0, 0.0, 0.0};
    m.d = (-1.0 / nb) * (b * conj(a));
  }
  return m;
}

QuatMatrix random_sp2(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Quaternion a{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
  Quaternion b{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
  const double n = std::sqrt(norm2(a) + norm2(b));
  QuatMatrix m = sp2_complete_column((1.0 / n) * a, (1.0 / n) * b);
  const Quaternion q = random_unit_quaternion(rng);
  m.c = m.c * q;
  m.d = m.d * q;
  return m;
}

std::string_view to_string(GroupId g) {
  switch (g) {
    case GroupId::Circle: return "S1";
    case GroupId::S3: return "S3";
    case GroupId::Sp2: return "Sp2";
  }
  return "?";
}

int dimension(GroupId g) {
  switch (g) {
    case GroupId::Circle: return 1;
    case GroupId::S3: return 3;
    case GroupId::Sp2: return 10;
  }
  return 0;
}

namespace {

double wrap_angle(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace

GroupElement GroupElement::circle(double angle) { return GroupElement(Value{wrap_angle(angle)}); }
GroupElement GroupElement::unit(const Quaternion& q) { return GroupElement(Value{normalized(q)}); }
GroupElement GroupElement::sp2(const QuatMatrix& m) { return GroupElement(Value{m}); }

GroupElement GroupElement::identity(GroupId g) {
  switch (g) {
    case GroupId::Circle: return circle(0.0);
    case GroupId::S3: return unit(kOne);
    case GroupId::Sp2: return sp2(identity_matrix());
  }
  throw Error(ErrorCode::UnsupportedGroup, "unknown group");
}

GroupId GroupElement::group() const {
  switch (value_.index()) {
    case 0: return GroupId::Circle;
    case 1: return GroupId::S3;
    default: return GroupId::Sp2;
  }
}

double GroupElement::angle() const {
  if (const auto* a = std::get_if<double>(&value_)) return *a;
  throw Error(ErrorCode::GroupMismatch, "angle() on a non-circle element");
}

const Quaternion& GroupElement::quaternion() const {
  if (const auto* q = std::get_if<Quaternion>(&value_)) return *q;
  throw Error(ErrorCode::GroupMismatch, "quaternion() on a non-S3 element");
}

const QuatMatrix& GroupElement::matrix() const {
  if (const auto* m = std::get_if<QuatMatrix>(&value_)) return *m;
  throw Error(ErrorCode::GroupMismatch, "matrix() on a non-Sp2 element");
}

Quaternion GroupElement::as_quaternion() const {
  if (const auto* a = std::get_if<double>(&value_)) return exp_i(*a);
  return quaternion();
}

GroupElement group_mul(const GroupElement& a, const GroupElement& b) {
  if (a.group() != b.group()) {
    throw Error(ErrorCode::GroupMismatch, std::string("cannot multiply ") +
                                              std::string(to_string(a.group())) + " by " +
                                              std::string(to_string(b.group())));
  }
  switch (a.group()) {
    case GroupId::Circle: return GroupElement::circle(a.angle() + b.angle());
    case GroupId::S3: return GroupElement::unit(a.quaternion() * b.quaternion());
    case GroupId::Sp2: return GroupElement::sp2(a.matrix() * b.matrix());
  }
  throw Error(ErrorCode::UnsupportedGroup, "unknown group");
}

GroupElement group_inverse(const GroupElement& a) {
  switch (a.group()) {
    case GroupId::Circle: return GroupElement::circle(-a.angle());
    case GroupId::S3: return GroupElement::unit(conj(a.quaternion()));
    case GroupId::Sp2: {
      const QuatMatrix& m = a.matrix();
      return GroupElement::sp2({conj(m.a), conj(m.c), conj(m.b), conj(m.d)});
    }
  }
  throw Error(ErrorCode::UnsupportedGroup, "unknown group");
}

double membership_residual(const GroupElement& g) {
  switch (g.group()) {
    case GroupId::Circle: {
      const double t = g.angle();
      return (t >= 0.0 && t < kTwoPi) ? 0.0 : std::abs(t);
    }
    case GroupId::S3: return std::abs(norm(g.quaternion()) - 1.0);
    case GroupId::Sp2: return sp2_residual(g.matrix());
  }
  return 0.0;
}

double distance(const GroupElement& a, const GroupElement& b) {
  if (a.group() != b.group()) throw Error(ErrorCode::GroupMismatch, "distance across groups");
  switch (a.group()) {
    case GroupId::Circle: return std::abs(2.0 * std::sin(0.5 * (a.angle() - b.angle())));
    case GroupId::S3: return distance(a.quaternion(), b.quaternion());
    case GroupId::Sp2: return distance(a.matrix(), b.matrix());
  }
  return 0.0;
}

GroupElement random_element(GroupId g, Rng& rng) {
  switch (g) {
    case GroupId::Circle: {
      std::uniform_real_distribution<double> u(0.0, kTwoPi);
      return GroupElement::circle(u(rng));
    }
    case GroupId::S3: return GroupElement::unit(random_unit_quaternion(rng));
    case GroupId::Sp2: return GroupElement::sp2(random_sp2(rng));
  }
  throw Error(ErrorCode::UnsupportedGroup, "unknown group");
}

double HaarRule::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void gauss_legendre_unit(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre order must be >= 1");
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    // Newton on P_m starting from the Chebyshev-like guess.
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pm = (m == 1) ? x : p1;
      const double pm1 = (m == 1) ? 1.0 : p0;
      dp = m * (x * pm - pm1) / (x * x - 1.0);
      const double dx = pm / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map [-1, 1] -> [0, 1].
    nodes[m - 1 - i] = 0.5 * (x + 1.0);
    weights[m - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

HaarRule haar_rule(GroupId group, int order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "Haar rule order must be >= 1");
  HaarRule rule{group, {}, {}};
  switch (group) {
    case GroupId::Circle: {
      const double w = kTwoPi / order;
      for (int k = 0; k < order; ++k) {
        rule.nodes.push_back(GroupElement::circle(kTwoPi * k / order));
        rule.weights.push_back(w);
      }
      return rule;
    }
    case GroupId::S3: {
      std::vector<double> s;
      std::vector<double> ws;
      gauss_legendre_unit(std::max(1, (order + 1) / 2), s, ws);
      const double dxi = kTwoPi / order;
      // dvol = (1/2) ds dξ1 dξ2 in these coordinates.
      for (std::size_t a = 0; a < s.size(); ++a) {
        const double r1 = std::sqrt(1.0 - s[a]);
        const double r2 = std::sqrt(s[a]);
        for (int k1 = 0; k1 < order; ++k1) {
          for (int k2 = 0; k2 < order; ++k2) {
            const double x1 = dxi * k1;
            const double x2 = dxi * k2;
            rule.nodes.push_back(GroupElement::unit(
                {r1 * std::cos(x1), r1 * std::sin(x1), r2 * std::cos(x2), r2 * std::sin(x2)}));
            rule.weights.push_back(0.5 * ws[a] * dxi * dxi);
          }
        }
      }
      return rule;
    }
    case GroupId::Sp2: break;
  }
  throw Error(ErrorCode::UnsupportedGroup, "no Haar rule for " + std::string(to_string(group)));
}

std::vector<GroupElement> group_net(GroupId group, int grid) {
  if (grid < 1) throw Error(ErrorCode::InvalidArgument, "net size must be >= 1");
  std::vector<GroupElement> net;
  switch (group) {
    case GroupId::Circle:
      for (int k = 0; k < grid; ++k) net.push_back(GroupElement::circle(kTwoPi * k / grid));
      return net;
    case GroupId::S3: {
      const int na = 2 * grid;
      for (int e = 0; e <= grid; ++e) {
        const double eta = 0.5 * kPi * e / grid;
        const double r1 = (e == grid) ? 0.0 : std::cos(eta);
        const double r2 = (e == 0) ? 0.0 : std::sin(eta);
        const int n1 = (e == grid) ? 1 : na;
        const int n2 = (e == 0) ? 1 : na;
        for (int k1 = 0; k1 < n1; ++k1) {
          for (int k2 = 0; k2 < n2; ++k2) {
            const double x1 = kTwoPi * k1 / na;
            const double x2 = kTwoPi * k2 / na;
            net.push_back(GroupElement::unit(
                {r1 * std::cos(x1), r1 * std::sin(x1), r2 * std::cos(x2), r2 * std::sin(x2)}));
          }
        }
      }
      return net;
    }
    case GroupId::Sp2: break;
  }
  throw Error(ErrorCode::UnsupportedGroup, "no net for " + std::string(to_string(group)));
}

}  // namespace bsl::algebra
