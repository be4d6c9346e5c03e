#include "doctest.h"

#include <cmath>

#include "bsl/algebra.hpp"
#include "bsl/error.hpp"

using namespace bsl::algebra;

namespace {
bool near(const Quaternion& p, const Quaternion& q, double tol) { return distance(p, q) <= tol; }
}  // namespace

TEST_CASE("Hamilton product on basis elements") {
  const Quaternion q{0.3, -1.2, 2.5, 0.7};
  CHECK(kOne * q == q);
  CHECK(kI * kJ == kK);
  CHECK(kJ * kK == kI);
  CHECK(kK * kI == kJ);
  CHECK(kI * kI == Quaternion{-1, 0, 0, 0});
  CHECK(Quaternion{1, 1, 0, 0} * Quaternion{1, 0, 1, 0} == Quaternion{1, 1, 1, 1});
}

TEST_CASE("conjugation") {
  CHECK(conj(kOne) == kOne);
  CHECK(conj(Quaternion{0, 1, 2, 3}) == Quaternion{0, -1, -2, -3});
  Rng rng(11);
  for (int s = 0; s < 100; ++s) {
    const auto p = random_unit_quaternion(rng);
    const auto q = 2.5 * random_unit_quaternion(rng);
    CHECK(near(conj(p * q), conj(q) * conj(p), 1e-14));
  }
}

TEST_CASE("inverse and normalization") {
  const Quaternion q{1, 2, -2, 4};
  CHECK(near(q * inverse(q), kOne, 1e-15));
  CHECK(std::abs(norm(normalized(q)) - 1.0) < 1e-15);
  CHECK_THROWS_AS(inverse(Quaternion{}), bsl::Error);
}

TEST_CASE("circle group wraps angles") {
  const auto a = GroupElement::circle(5.0);
  const auto b = GroupElement::circle(4.0);
  const auto ab = group_mul(a, b);
  CHECK(ab.angle() == doctest::Approx(9.0 - kTwoPi).epsilon(1e-15));
  CHECK(ab.angle() >= 0.0);
  CHECK(ab.angle() < kTwoPi);
  CHECK(distance(group_mul(a, group_inverse(a)), GroupElement::identity(GroupId::Circle)) < 1e-15);
}

TEST_CASE("Sp(2) products stay in the group") {
  Rng rng(5);
  const auto id = GroupElement::identity(GroupId::Sp2);
  const auto a = random_element(GroupId::Sp2, rng);
  CHECK(distance(group_mul(id, a), a) == 0.0);
  for (int s = 0; s < 50; ++s) {
    const auto x = random_element(GroupId::Sp2, rng);
    const auto y = random_element(GroupId::Sp2, rng);
    CHECK(membership_residual(x) <= 1e-12);
    CHECK(membership_residual(group_mul(x, y)) <= 1e-12);
    CHECK(membership_residual(group_mul(x, group_inverse(x))) <= 1e-12);
    CHECK(distance(group_mul(x, group_inverse(x)), id) <= 1e-12);
  }
}

TEST_CASE("completing a column to Sp(2)") {
  Rng rng(9);
  for (int s = 0; s < 50; ++s) {
    auto a = random_unit_quaternion(rng);
    auto b = random_unit_quaternion(rng);
    const double r = std::sqrt(0.5);
    a = (s % 2 ? 0.1 : r) * a;
    b = std::sqrt(1.0 - norm2(a)) * b;
    const auto m = sp2_complete_column(a, b);
    CHECK(sp2_residual(m) <= 1e-14);
    CHECK(m.a == a);
    CHECK(m.b == b);
  }
}

TEST_CASE("Haar rule on the circle") {
  const auto rule = haar_rule(GroupId::Circle, 8);
  CHECK(rule.total_weight() == doctest::Approx(kTwoPi).epsilon(1e-15));
  double c3 = 0.0;
  double c2sq = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    c3 += rule.weights[i] * std::cos(3.0 * rule.nodes[i].angle());
    c2sq += rule.weights[i] * std::pow(std::cos(2.0 * rule.nodes[i].angle()), 2);
  }
  CHECK(std::abs(c3) <= 1e-14);
  CHECK(c2sq == doctest::Approx(kPi).epsilon(1e-14));
}

TEST_CASE("Haar rule on S^3") {
  const auto rule = haar_rule(GroupId::S3, 16);
  CHECK(std::abs(rule.total_weight() - 2.0 * kPi * kPi) <= 1e-10);
  // Second moments of the coordinates: each equals vol/4.
  double w2 = 0.0;
  double wz = 0.0;
  double z4 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const auto& q = rule.nodes[i].quaternion();
    w2 += rule.weights[i] * q.w * q.w;
    wz += rule.weights[i] * q.w * q.z;
    z4 += rule.weights[i] * std::pow(q.z, 4);
  }
  CHECK(w2 == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-12));
  CHECK(std::abs(wz) <= 1e-12);
  // E[z^4] on S^3 is 1/8.
  CHECK(z4 == doctest::Approx(2.0 * kPi * kPi / 8.0).epsilon(1e-12));
}

TEST_CASE("group nets contain the identity") {
  for (auto g : {GroupId::Circle, GroupId::S3}) {
    const auto net = group_net(g, 8);
    double best = 1.0;
    for (const auto& e : net) best = std::min(best, distance(e, GroupElement::identity(g)));
    CHECK(best == 0.0);
  }
  CHECK(group_net(GroupId::Circle, 64).size() == 64);
}

TEST_CASE("Gauss-Legendre on [0,1]") {
  std::vector<double> x, w;
  gauss_legendre_unit(5, x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 9);
  CHECK(s == doctest::Approx(0.1).epsilon(1e-14));
}
