#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>

#include "bsl/eigen.hpp"
#include "bsl/error.hpp"

using namespace bsl;
using namespace bsl::sturm;
using algebra::kPi;
using geometry::Endpoint;
using geometry::make_profile;

namespace {

geometry::OrbitProfile sine_profile(int n) {
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = 2 * kPi * std::sin(kPi * i / n);
  w[0] = w[n] = 0.0;
  return make_profile(diagrams::Side::M, kPi, w, Endpoint::Collapsing, Endpoint::Collapsing);
}

geometry::OrbitProfile flat_profile(int n) {
  return make_profile(diagrams::Side::M, kPi, std::vector<double>(n + 1, 1.0), Endpoint::Reflecting,
                      Endpoint::Reflecting);
}

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  algebra::Rng rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST_CASE("assembly of the unweighted Neumann operator") {
  const auto op = assemble(flat_profile(8));
  const double dt = kPi / 8;
  CHECK(op.diag[0] == doctest::Approx(1.0 / dt));
  CHECK(op.diag[4] == doctest::Approx(2.0 / dt));
  CHECK(op.off[3] == doctest::Approx(-1.0 / dt));
  CHECK(op.mass[0] == doctest::Approx(dt / 2));
  CHECK(op.mass[4] == doctest::Approx(dt));
}

TEST_CASE("constants are in the kernel") {
  for (const auto& p : {sine_profile(128), flat_profile(100)}) {
    const auto op = assemble(p);
    for (double v : sturm::apply(op, std::vector<double>(op.size(), 3.7))) CHECK(v == 0.0);
  }
}

TEST_CASE("nonpositive weights are rejected") {
  std::vector<double> w(17, 1.0);
  w[5] = 0.0;
  CHECK_THROWS_AS(assemble(make_profile(diagrams::Side::M, 1.0, w, Endpoint::Reflecting, Endpoint::Reflecting)),
                  Error);
  w[5] = std::nan("");
  CHECK_THROWS_AS(assemble(make_profile(diagrams::Side::M, 1.0, w, Endpoint::Reflecting, Endpoint::Reflecting)),
                  Error);
}

TEST_CASE("green identity") {
  const auto op = assemble(sine_profile(200));
  const auto u = random_vector(op.size(), 1);
  const auto v = random_vector(op.size(), 2);
  const auto au = sturm::apply(op, u);
  double utav = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) utav += v[i] * au[i];
  CHECK(utav == doctest::Approx(green_form(op, u, v)).epsilon(1e-12));
  CHECK(green_form(op, u, u) > 0.0);
}

TEST_CASE("zero-mean projection") {
  const auto op = assemble(sine_profile(128));
  for (double x : zero_mean_project(op, std::vector<double>(op.size(), 5.0))) CHECK(std::abs(x) <= 1e-14);
  const auto u = random_vector(op.size(), 3);
  const auto p = zero_mean_project(op, u);
  double norm = 0.0;
  for (double x : u) norm += x * x;
  CHECK(std::abs(integrate(op, p)) <= 1e-14 * std::sqrt(norm));
  const auto pp = zero_mean_project(op, p);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(pp[i] - p[i]) <= 1e-15);
}

TEST_CASE("eigenvalues match an independent dense reference") {
  // Reference values from tests/oracles/weighted_fv.py (scipy generalized eigh).
  const std::vector<double> sine64{1.9983952225071104, 5.99037624704125, 11.966339055085031, 19.91191352774885};
  const std::vector<double> sine256{1.9998996074598714, 5.999397663990021, 11.99789191090935, 19.994479101194237};
  const std::vector<double> flat64{0.9997992185117512, 3.996788270157063, 8.983747145805438, 15.94866182471941};
  const std::vector<double> flat256{0.9999874502176738, 3.9997992064223693, 8.998983508000705, 15.996787496187945};
  auto check = [](const geometry::OrbitProfile& p, const std::vector<double>& ref) {
    const auto ev = eigen::eigenvalues(assemble(p), 4);
    for (int i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(ref[i]).epsilon(1e-11));
  };
  check(sine_profile(64), sine64);
  check(sine_profile(256), sine256);
  check(flat_profile(64), flat64);
  check(flat_profile(256), flat256);
}

TEST_CASE("eigenvalues match a dense symmetric eigensolve") {
  const auto op = assemble(sine_profile(256));
  const int n = static_cast<int>(op.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = op.diag[i] / op.mass[i];
    if (i + 1 < n) {
      t(i, i + 1) = t(i + 1, i) = op.off[i] / std::sqrt(op.mass[i] * op.mass[i + 1]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
  const auto ev = eigen::eigenvalues(op, 6);
  CHECK(std::abs(es.eigenvalues()(0)) <= 1e-10);
  for (int i = 0; i < 6; ++i) CHECK(ev[i] == doctest::Approx(es.eigenvalues()(i + 1)).epsilon(1e-11));
}

TEST_CASE("eigenpairs") {
  for (int n : {256, 1024}) {
    const auto op = assemble(sine_profile(n));
    const auto pairs = eigen::solve_pairs(op, 5, true);
    REQUIRE(pairs.size() == 6);
    CHECK(pairs[0].lambda == 0.0);
    for (const auto& p : pairs) {
      CHECK(p.residual <= 1e-9);
      CHECK(mass_inner(op, p.vector, p.vector) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(p.vector[0] > 0.0);
    }
    for (int i = 1; i < 6; ++i) {
      for (int j = 0; j < i; ++j) CHECK(std::abs(mass_inner(op, pairs[i].vector, pairs[j].vector)) <= 1e-10);
    }
    // Legendre polynomials in cos t, up to sign and scale.
    const auto& u1 = pairs[1].vector;
    for (int i = 0; i <= n; i += n / 8) CHECK(u1[i] / u1[0] == doctest::Approx(std::cos(kPi * i / n)).epsilon(1e-3).scale(1));
  }
  CHECK_THROWS_AS(eigen::solve_pairs(assemble(sine_profile(64)), 64), Error);
  CHECK_THROWS_AS(eigen::solve_pairs(assemble(sine_profile(64)), 0), Error);
}

TEST_CASE("rayleigh quotient") {
  const auto op = assemble(sine_profile(512));
  const auto pairs = eigen::solve_pairs(op, 2);
  CHECK(eigen::rayleigh(op, pairs[0].vector) == doctest::Approx(pairs[0].lambda).epsilon(1e-12));
  CHECK(eigen::rayleigh(op, pairs[1].vector) == doctest::Approx(pairs[1].lambda).epsilon(1e-12));
  for (unsigned s = 0; s < 20; ++s) {
    CHECK(eigen::rayleigh(op, random_vector(op.size(), 100 + s)) >= pairs[0].lambda - 1e-10);
  }
  CHECK_THROWS_AS(eigen::rayleigh(op, std::vector<double>(op.size(), 1.0)), Error);
}

TEST_CASE("grouping merges close eigenvalues") {
  const auto s = eigen::group({2.0, 2.0 + 1e-9, 6.0, 6.0 + 5e-6, 6.0 + 5e-3}, {});
  REQUIRE(s.entries.size() == 3);
  CHECK(s.entries[0].multiplicity == 2);
  CHECK(s.entries[1].multiplicity == 2);
  CHECK(s.entries[2].multiplicity == 1);
}

TEST_CASE("richardson extrapolation") {
  const auto coarse = eigen::solve(assemble(sine_profile(512)), 4);
  const auto fine = eigen::solve(assemble(sine_profile(1024)), 4);
  const auto ex = eigen::extrapolate(coarse, fine);
  CHECK(ex.extrapolated);
  CHECK(std::abs(ex.entries[0].lambda - 2.0) <= 1e-8);
  const std::vector<double> legendre{2, 6, 12, 20};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(ex.entries[i].lambda - legendre[i]) <= 1e-6 * legendre[i]);

  const auto same = eigen::extrapolate(fine, fine);
  for (std::size_t i = 0; i < same.entries.size(); ++i) {
    CHECK(same.entries[i].lambda == doctest::Approx(fine.entries[i].lambda).epsilon(1e-15));
    CHECK(same.entries[i].error == 0.0);
  }

  const auto fc = eigen::solve(assemble(flat_profile(512)), 4);
  const auto ff = eigen::solve(assemble(flat_profile(1024)), 4);
  const auto fe = eigen::extrapolate(fc, ff);
  for (int i = 0; i < 4; ++i) {
    const double exact = (i + 1) * (i + 1);
    CHECK(std::abs(fe.entries[i].lambda - exact) * 10 <= std::abs(fc.entries[i].lambda - exact));
  }

  auto other = fine;
  other.fingerprint ^= 1;
  CHECK_THROWS_AS(eigen::extrapolate(coarse, other), Error);
}

TEST_CASE("spectrum JSON") {
  const auto s = eigen::solve(assemble(sine_profile(64)), 2);
  const auto j = eigen::to_json(s);
  REQUIRE(j.at("spectrum").size() == 2);
  CHECK(j["spectrum"][0].contains("lambda"));
  CHECK(j["spectrum"][0].contains("mult"));
  CHECK(j["spectrum"][0].contains("err"));
}
