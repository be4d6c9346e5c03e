#include "doctest.h"

#include <cmath>

#include "bsl/diagrams.hpp"
#include "bsl/error.hpp"

using namespace bsl;
using namespace bsl::diagrams;
using algebra::GroupElement;
using algebra::GroupId;

TEST_CASE("catalog lists three diagrams") {
  const auto& e = catalog_entries();
  REQUIRE(e.size() == 3);
  CHECK(e[0].id == "trivial-s2");
  CHECK(e[1].id == "hopf");
  CHECK(e[2].id == "gm");
  CHECK(e[0].cohomogeneity_one);
  CHECK(e[1].cohomogeneity_one);
  CHECK_FALSE(e[2].cohomogeneity_one);
  CHECK_THROWS_AS(catalog("lens"), Error);
  CHECK(parse_side("Mprime") == Side::MPrime);
}

TEST_CASE("identity acts trivially") {
  algebra::Rng rng(1);
  for (auto id : {CatalogId::TrivialS2, CatalogId::Hopf, CatalogId::GromollMeyer}) {
    const auto d = catalog(id);
    const auto e = GroupElement::identity(d.group);
    for (int s = 0; s < 20; ++s) {
      const auto p = d.random_point(rng);
      CHECK(d.distance(d.bullet(e, p), p) == 0.0);
      CHECK(d.distance(d.star(e, p), p) == 0.0);
    }
  }
}

TEST_CASE("actions commute") {
  algebra::Rng rng(2);
  CHECK(check_commute(catalog(CatalogId::TrivialS2), 1000, rng) <= 4e-15);
  CHECK(check_commute(catalog(CatalogId::Hopf), 1000, rng) <= 1e-13);
  CHECK(check_commute(catalog(CatalogId::GromollMeyer), 1000, rng) <= 1e-12);
}

TEST_CASE("actions preserve P and projections are invariant") {
  algebra::Rng rng(3);
  for (auto id : {CatalogId::TrivialS2, CatalogId::Hopf, CatalogId::GromollMeyer}) {
    const auto d = catalog(id);
    const auto m = check_membership(d, 300, rng);
    CHECK(m.bullet <= 1e-12);
    CHECK(m.star <= 1e-12);
    CHECK(check_projection_invariance(d, 300, rng) <= 1e-12);
  }
}

TEST_CASE("lifts are right inverses") {
  algebra::Rng rng(4);
  for (auto id : {CatalogId::TrivialS2, CatalogId::Hopf}) {
    const auto d = catalog(id);
    for (int s = 0; s < 50; ++s) {
      const auto p = d.random_point(rng);
      const auto x = d.proj_bullet(p);
      const auto y = d.proj_star(p);
      CHECK(d.base_distance(d.proj_bullet(d.lift_bullet(x)), x) <= 1e-13);
      CHECK(d.base_distance_prime(d.proj_star(d.lift_star(y)), y) <= 1e-13);
    }
  }
}

TEST_CASE("isotropy probes") {
  SUBCASE("hopf bullet at 1 fixes only the identity") {
    const auto d = catalog(CatalogId::Hopf);
    const auto fixed = isotropy_probe(d, Which::Bullet, {1, 0, 0, 0}, 64);
    REQUIRE(fixed.size() == 1);
    CHECK(fixed[0].angle() == 0.0);
  }
  SUBCASE("trivial-s2 bullet is free") {
    const auto d = catalog(CatalogId::TrivialS2);
    for (const Point& p : {Point{0, 0, 1, 0.3}, Point{0.6, 0, 0.8, 2.0}}) {
      CHECK(isotropy_probe(d, Which::Bullet, p, 64).size() == 1);
    }
  }
  SUBCASE("gm star at the identity matrix") {
    const auto d = catalog(CatalogId::GromollMeyer);
    Point eye(16, 0.0);
    eye[0] = 1.0;   // a
    eye[12] = 1.0;  // d
    const auto fixed = isotropy_probe(d, Which::Star, eye, 8);
    REQUIRE(fixed.size() == 1);
    CHECK(algebra::distance(fixed[0], GroupElement::identity(GroupId::S3)) == 0.0);
  }
}

TEST_CASE("isotropy of the residual actions") {
  const auto t = catalog(CatalogId::TrivialS2);
  auto pole = isotropy_compare(t, {0, 0, 1, 0.4}, 64);
  CHECK(pole.base == 1);
  CHECK(pole.base_prime == 1);
  auto generic = isotropy_compare(t, {0.6, 0, 0.8, 0.4}, 64);
  CHECK(generic.base == 0);
  CHECK(generic.base_prime == 0);

  const auto h = catalog(CatalogId::Hopf);
  const double c = std::cos(0.4), s = std::sin(0.4);
  auto hg = isotropy_compare(h, {c, 0, s * 0.6, s * 0.8}, 64);
  CHECK(hg.base == 0);
  CHECK(hg.base_prime == 0);
  auto hp = isotropy_compare(h, {1, 0, 0, 0}, 64);
  CHECK(hp.base == 1);
  CHECK(hp.base_prime == 1);
}

TEST_CASE("transport of invariant functions") {
  const auto t = catalog(CatalogId::TrivialS2);
  auto one = transport_invariant(t, [](const BasePoint&) { return 1.0; });
  auto lat2 = [](const BasePoint& x) { return x[2] * x[2]; };
  auto moved = transport_invariant(t, lat2);
  algebra::Rng rng(6);
  for (int s = 0; s < 50; ++s) {
    const auto y = t.proj_star(t.random_point(rng));
    CHECK(one(y) == 1.0);
    CHECK(moved(y) == doctest::Approx(lat2(y)).epsilon(1e-14));
  }
  auto not_invariant = [](const BasePoint& x) { return x[0]; };
  CHECK_THROWS_AS(transport_invariant(t, not_invariant), Error);
}

TEST_CASE("transport is a ring homomorphism and an involution") {
  algebra::Rng rng(7);
  for (auto id : {CatalogId::TrivialS2, CatalogId::Hopf, CatalogId::GromollMeyer}) {
    const auto r = check_transport(catalog(id), 1000, rng);
    CHECK(r.samples == 1000);
    CHECK(r.additive == 0.0);
    CHECK(r.multiplicative == 0.0);
    CHECK(r.unit == 0.0);
    CHECK(r.involution <= 1e-12);
  }
}
