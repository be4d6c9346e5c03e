#pragma once

// Generalized symmetric tridiagonal eigenproblem A u = lambda B u with B
// diagonal: Sturm-sequence bisection for eigenvalues, inverse iteration for
// eigenvectors, Richardson extrapolation across grids.

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "bsl/sturm.hpp"

namespace bsl::eigen {

using sturm::DiscreteOperator;

struct SpectrumEntry {
  double lambda = 0.0;
  int multiplicity = 1;
  double error = 0.0;
};

struct BasicSpectrum {
  std::vector<SpectrumEntry> entries;
  int n = 0;
  diagrams::Side side = diagrams::Side::M;
  std::uint64_t fingerprint = 0;
  bool extrapolated = false;
  bool includes_zero = false;

  std::vector<double> values() const;
};

struct EigenPair {
  double lambda = 0.0;
  std::vector<double> vector;  // B-orthonormal, positive at t_0
  double residual = 0.0;       // |A u - lambda B u| / |B u|
};

/// Eigenvalues closer than max(1e-8, 1e-6 lambda) are reported as one entry.
inline constexpr double kMergeAbsolute = 1e-8;
inline constexpr double kMergeRelative = 1e-6;

/// The k smallest positive eigenpairs (index 1..k).  With include_zero the
/// constant mode is prepended as index 0.  1 <= k < n.
std::vector<EigenPair> solve_pairs(const DiscreteOperator& op, int k, bool include_zero = false);

/// Eigenvalues only (bisection), index 1..k.
std::vector<double> eigenvalues(const DiscreteOperator& op, int k);

BasicSpectrum solve(const DiscreteOperator& op, int k, bool include_zero = false);

/// Groups sorted eigenvalues into entries; `errors` may be empty.
BasicSpectrum group(const std::vector<double>& values, const std::vector<double>& errors);

/// (u^T A u) / (u^T B u) after zero-mean projection; throws ZeroVector.
double rayleigh(const DiscreteOperator& op, const std::vector<double>& u);

double residual(const DiscreteOperator& op, double lambda, const std::vector<double>& u);

/// (4 lambda_2n - lambda_n) / 3 with error |lambda_2n - lambda_n| / 3.
/// Throws FingerprintMismatch when metric or side differ.
BasicSpectrum extrapolate(const BasicSpectrum& coarse, const BasicSpectrum& fine);

nlohmann::json to_json(const BasicSpectrum& s);

}  // namespace bsl::eigen
