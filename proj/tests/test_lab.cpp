#include "doctest.h"

#include <cmath>

#include "bsl/error.hpp"
#include "bsl/lab.hpp"

using namespace bsl;
using namespace bsl::lab;
using diagrams::CatalogId;

TEST_CASE("side spectra of the round quotients") {
  const auto s = side_spectra(geometry::default_metric(CatalogId::Hopf), Side::MPrime, 4, 512);
  const std::vector<double> zonal{8, 24, 48, 80};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(s.extrapolated.entries[i].lambda - zonal[i]) <= 1e-6 * zonal[i]);
  CHECK(s.coarse.n == 512);
  CHECK(s.fine.n == 1024);
  const auto z = side_spectra(geometry::default_metric(CatalogId::TrivialS2), Side::M, 2, 256, true);
  CHECK(z.extrapolated.includes_zero);
  CHECK(z.extrapolated.entries[0].lambda == 0.0);
}

TEST_CASE("compare on unwarped diagrams") {
  const auto t = compare_basic_spectra(geometry::default_metric(CatalogId::TrivialS2), 4, 512);
  CHECK(t.isospectral);
  CHECK(t.max_relative_gap <= 1e-12);

  const auto h = compare_basic_spectra(geometry::default_metric(CatalogId::Hopf), 5, 1024);
  CHECK(h.isospectral);
  CHECK(h.max_relative_gap <= 1e-8);
  CHECK(h.tolerance_from_errors);
  CHECK(h.tolerance == doctest::Approx(std::max(1e-8, 3 * h.combined_relative_error)));
  const std::vector<double> zonal{8, 24, 48, 80, 120};
  REQUIRE(h.pairs.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(h.pairs[i].lambda_m - zonal[i]) <= 1e-6 * zonal[i]);

  const auto j = to_json(h);
  CHECK(j.at("isospectral").get<bool>());
  CHECK(j.at("pairs").size() == 5);
}

TEST_CASE("compare detects a warped quotient") {
  const auto m = geometry::default_metric(CatalogId::Hopf);
  const double L = geometry::orbit_length(m);
  const auto op = sturm::assemble(geometry::orbit_profile(m, Side::MPrime, 2048));
  const geometry::GridFunction u(eigen::solve_pairs(op, 1)[0].vector, L);
  const auto r = compare_basic_spectra(geometry::warp(m, u, 1.0), 3, 1024);
  CHECK_FALSE(r.isospectral);
}

TEST_CASE("berger fiber scales are not isospectral on hopf") {
  const auto d = diagrams::catalog(CatalogId::Hopf);
  CHECK_FALSE(compare_basic_spectra(geometry::kaluza_klein(d, 0.5, 2.0), 3, 512).isospectral);
}

TEST_CASE("transported eigenfunctions") {
  for (auto id : {CatalogId::Hopf, CatalogId::TrivialS2}) {
    const auto m = geometry::default_metric(id);
    for (int index = 1; index <= 5; ++index) {
      const auto c = joint_eigenfunction_check(m, index, 512);
      CHECK(c.joint_residual <= 10 * c.native_residual);
      CHECK(c.joint_residual <= 1e-8);
    }
    const auto zero = joint_eigenfunction_check(m, 0, 512);
    CHECK(zero.lambda == 0.0);
    CHECK(zero.joint_residual == 0.0);
  }
}

TEST_CASE("warp break") {
  const auto m = geometry::default_metric(CatalogId::Hopf);
  const auto reports = warp_break(m, {0.0, 0.25, 0.5, 1.0, 2.0}, 1, 512, 2);
  REQUIRE(reports.size() == 5);
  const auto& control = reports[0];
  CHECK(control.scale == 0.0);
  CHECK(control.lambda1_warped == control.lambda1_unwarped);
  CHECK_FALSE(control.broke_isospectrality);
  CHECK(control.lhs == doctest::Approx(1.0).epsilon(1e-12));
  bool any = false;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    any = any || reports[i].broke_isospectrality;
    CHECK(reports[i].scale > reports[i - 1].scale);
    CHECK(reports[i].lambda1_base == doctest::Approx(control.lambda1_base).epsilon(1e-12));
    CHECK(reports[i].threshold == doctest::Approx(10 * (reports[i].err_unwarped + reports[i].err_warped)));
  }
  CHECK(any);
  for (const auto& r : reports) {
    // The warped eigenfunction has zero mean in its own measure.
    CHECK_FALSE(r.rhs.has_value());
    const auto a = inequality_audit(r);
    CHECK_FALSE(a.consistent.has_value());
    CHECK(a.lhs == r.lhs);
    CHECK(to_json(a).at("consistent") == "undefined");
  }
  CHECK(reports[2].rhs_total_space.has_value());
}

TEST_CASE("warp break on the product diagram") {
  const auto reports = warp_break(geometry::default_metric(CatalogId::TrivialS2), {0.0, 0.5, 1.0}, 1, 512, 1);
  CHECK_FALSE(reports[0].broke_isospectrality);
  CHECK((reports[1].broke_isospectrality || reports[2].broke_isospectrality));
}

TEST_CASE("warp break is independent of the worker count") {
  const auto m = geometry::default_metric(CatalogId::Hopf);
  const auto a = warp_break(m, {0.5, 1.0, 2.0}, 1, 256, 1);
  const auto b = warp_break(m, {0.5, 1.0, 2.0}, 1, 256, 3);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_json(a[i]).dump() == to_json(b[i]).dump());
}

TEST_CASE("fubini") {
  algebra::Rng rng(17);
  CHECK(fubini_check(geometry::default_metric(CatalogId::Hopf), 20, 512, rng) <= 1e-9);
  CHECK(fubini_check(geometry::default_metric(CatalogId::TrivialS2), 20, 512, rng) <= 1e-9);
}
