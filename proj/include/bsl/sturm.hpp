#pragma once

// Finite-volume discretization of -(w u')' = lambda w u on a uniform grid.
//
// Stiffness and mass are scaled so that u^T A v is exactly the discrete
// Dirichlet form sum_i w_{i+1/2} (u_{i+1} - u_i)(v_{i+1} - v_i) / dt and
// u^T B v approximates the integral of u v against w dt.

#include <cstdint>
#include <vector>

#include "bsl/geometry.hpp"

namespace bsl::sturm {

using geometry::Endpoint;
using geometry::OrbitProfile;

struct DiscreteOperator {
  int n = 0;  // number of cells; vectors have n + 1 entries
  double dt = 0.0;
  std::vector<double> half_weight;  // w_{i+1/2}, size n
  std::vector<double> diag;         // size n + 1
  std::vector<double> off;          // A_{i,i+1}, size n
  std::vector<double> mass;         // diagonal of B, size n + 1
  Endpoint left = Endpoint::Collapsing;
  Endpoint right = Endpoint::Collapsing;
  diagrams::Side side = diagrams::Side::M;
  std::uint64_t fingerprint = 0;

  std::size_t size() const { return mass.size(); }
};

/// Throws NonpositiveWeight if an interior weight is <= 0 or an end weight
/// is negative or any weight is not finite.
DiscreteOperator assemble(const OrbitProfile& p);

std::vector<double> apply(const DiscreteOperator& op, const std::vector<double>& u);
std::vector<double> apply_mass(const DiscreteOperator& op, const std::vector<double>& u);

/// sum_i w_{i+1/2} (du)_i (dv)_i / dt
double green_form(const DiscreteOperator& op, const std::vector<double>& u,
                  const std::vector<double>& v);

/// u^T B v
double mass_inner(const DiscreteOperator& op, const std::vector<double>& u,
                  const std::vector<double>& v);

/// sum_i B_ii f_i
double integrate(const DiscreteOperator& op, const std::vector<double>& f);

/// u minus its B-weighted mean.
std::vector<double> zero_mean_project(const DiscreteOperator& op, const std::vector<double>& u);

}  // namespace bsl::sturm
