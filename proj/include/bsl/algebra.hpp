#pragma once

// Quaternions, the three compact groups used by the catalog (S^1, S^3, Sp(2))
// and Haar quadrature on them.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

namespace bsl::algebra {

using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

inline constexpr Quaternion kOne{1.0, 0.0, 0.0, 0.0};
inline constexpr Quaternion kI{0.0, 1.0, 0.0, 0.0};
inline constexpr Quaternion kJ{0.0, 0.0, 1.0, 0.0};
inline constexpr Quaternion kK{0.0, 0.0, 0.0, 1.0};

constexpr Quaternion operator+(const Quaternion& p, const Quaternion& q) {
  return {p.w + q.w, p.x + q.x, p.y + q.y, p.z + q.z};
}
constexpr Quaternion operator-(const Quaternion& p, const Quaternion& q) {
  return {p.w - q.w, p.x - q.x, p.y - q.y, p.z - q.z};
}
constexpr Quaternion operator-(const Quaternion& q) { return {-q.w, -q.x, -q.y, -q.z}; }
constexpr Quaternion operator*(double s, const Quaternion& q) {
  return {s * q.w, s * q.x, s * q.y, s * q.z};
}
constexpr Quaternion operator*(const Quaternion& q, double s) { return s * q; }

/// Hamilton product.
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

/// Euclidean inner product on H = R^4.
constexpr double dot(const Quaternion& p, const Quaternion& q) {
  return p.w * q.w + p.x * q.x + p.y * q.y + p.z * q.z;
}
constexpr double norm2(const Quaternion& q) { return dot(q, q); }
inline double norm(const Quaternion& q) { return std::sqrt(norm2(q)); }
inline double distance(const Quaternion& p, const Quaternion& q) { return norm(p - q); }

Quaternion normalized(const Quaternion& q);
Quaternion inverse(const Quaternion& q);

/// Unit quaternion cos(angle) + i sin(angle): the circle subgroup of S^3.
inline Quaternion exp_i(double angle) { return {std::cos(angle), std::sin(angle), 0.0, 0.0}; }

Quaternion random_unit_quaternion(Rng& rng);

/// 2x2 quaternionic matrix laid out as [[a, c], [b, d]]; rows are (a, c) and
/// (b, d).
struct QuatMatrix {
  Quaternion a, b, c, d;
};

QuatMatrix operator*(const QuatMatrix& m, const QuatMatrix& n);
QuatMatrix identity_matrix();
double distance(const QuatMatrix& m, const QuatMatrix& n);

/// max of |row norm - 1| for both rows and |a conj(b) + c conj(d)|.
double sp2_residual(const QuatMatrix& m);

/// Gram-Schmidt on the rows; restores Sp(2) membership after round-off.
QuatMatrix sp2_reorthonormalize(const QuatMatrix& m);

/// Completes a unit vector (a, b) in H^2 to an Sp(2) matrix with first
/// column (a, b).
QuatMatrix sp2_complete_column(const Quaternion& a, const Quaternion& b);

QuatMatrix random_sp2(Rng& rng);

enum class GroupId { Circle, S3, Sp2 };

std::string_view to_string(GroupId g);
int dimension(GroupId g);

/// An element of S^1 (angle in [0, 2π)), S^3 (unit quaternion) or Sp(2).
class GroupElement {
 public:
  static GroupElement circle(double angle);
  static GroupElement unit(const Quaternion& q);
  static GroupElement sp2(const QuatMatrix& m);
  static GroupElement identity(GroupId g);

  GroupId group() const;
  double angle() const;               // Circle only
  const Quaternion& quaternion() const;  // S3 only
  const QuatMatrix& matrix() const;   // Sp2 only

  /// Circle elements embed as exp_i(angle); S^3 elements are returned as is.
  Quaternion as_quaternion() const;

 private:
  using Value = std::variant<double, Quaternion, QuatMatrix>;
  explicit GroupElement(Value v) : value_(std::move(v)) {}
  Value value_;
};

GroupElement group_mul(const GroupElement& a, const GroupElement& b);
GroupElement group_inverse(const GroupElement& a);
double membership_residual(const GroupElement& g);
double distance(const GroupElement& a, const GroupElement& b);
GroupElement random_element(GroupId g, Rng& rng);

struct HaarRule {
  GroupId group;
  std::vector<GroupElement> nodes;
  std::vector<double> weights;

  double total_weight() const;
};

/// Circle: `order` uniform nodes, exact for trigonometric polynomials of
/// degree < order.  S^3: product rule in Hopf coordinates
/// q = sqrt(1-s) e^{iξ1} + sqrt(s) e^{iξ2} j with uniform ξ nodes and
/// Gauss-Legendre in s; exact for polynomials of degree < order in the
/// coordinates of q.  Weights sum to the volume of the unit group (2π, 2π^2).
HaarRule haar_rule(GroupId group, int order);

/// A finite net containing the identity: uniform angles for the circle, a
/// Hopf-coordinate grid (including the coordinate circles) for S^3.
std::vector<GroupElement> group_net(GroupId group, int grid);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int m, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace bsl::algebra
