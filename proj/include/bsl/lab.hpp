#pragma once

// Experiments across a star diagram: spectra of both quotients, transported
// eigenfunctions, vertical warping and integration checks.

#include <optional>
#include <vector>

#include "json.hpp"

#include "bsl/eigen.hpp"
#include "bsl/geometry.hpp"

namespace bsl::lab {

using diagrams::CatalogId;
using diagrams::Side;
using eigen::BasicSpectrum;
using geometry::MetricSpec;

/// Spectra on the n and 2n grids and their extrapolation.
struct SideSpectra {
  BasicSpectrum coarse;
  BasicSpectrum fine;
  BasicSpectrum extrapolated;
};

SideSpectra side_spectra(const MetricSpec& m, Side side, int k, int n, bool include_zero = false);

struct ComparePair {
  int index = 0;
  double lambda_m = 0.0;
  double lambda_mprime = 0.0;
  double err_m = 0.0;
  double err_mprime = 0.0;
  double relgap = 0.0;
};

struct CompareReport {
  CatalogId diagram = CatalogId::Hopf;
  std::uint64_t fingerprint = 0;
  int n = 0;
  int k = 0;
  std::vector<ComparePair> pairs;
  double max_relative_gap = 0.0;
  double combined_relative_error = 0.0;  // max over pairs of (err_m + err_mprime) / lambda
  double tolerance = 0.0;
  bool tolerance_from_errors = false;
  bool isospectral = false;
};

/// Without an explicit tolerance the verdict uses
/// max(1e-8, 3 x combined_relative_error).
CompareReport compare_basic_spectra(const MetricSpec& m, int k, int n,
                                    std::optional<double> tolerance = std::nullopt);

struct JointCheck {
  int index = 0;
  double lambda = 0.0;
  double native_residual = 0.0;
  double joint_residual = 0.0;
};

/// Transports the index-th eigenfunction of M to M' through the diagram and
/// measures its eigen-residual for the M' operator with the M eigenvalue.
JointCheck joint_eigenfunction_check(const MetricSpec& m, int index, int n);

struct WarpReport {
  double scale = 0.0;
  double lambda1_unwarped = 0.0;
  double err_unwarped = 0.0;
  double lambda1_warped = 0.0;
  double err_warped = 0.0;
  double shift = 0.0;
  double threshold = 0.0;  // 10 x (err_unwarped + err_warped)
  bool broke_isospectrality = false;
  double lambda1_base = 0.0;  // M side after warping (unchanged by construction)

  int group_dim = 1;
  double int_u2 = 0.0;        // over M', unwarped measure
  double int_phi = 0.0;       // over M', warped measure (mean_of_phi)
  double int_phi2 = 0.0;      // over M', warped measure
  double int_abs_phi = 0.0;   // over M', warped measure
  double int_phi_total = 0.0; // over P, warped measure
  double mean_star_fiber_volume = 0.0;  // vol_u(P) / vol(M', g')
  double lhs = 0.0;
  std::optional<double> rhs;             // denominator: integral over M'
  std::optional<double> rhs_total_space; // denominator: integral over P / mean fiber
  double bullet_fiber_min = 0.0;
  double bullet_fiber_max = 0.0;
  double star_fiber_min = 0.0;
  double star_fiber_max = 0.0;
};

/// One report per scale, in input order.  Scales run concurrently on up to
/// `threads` workers (0: BSL_THREADS or hardware concurrency).
std::vector<WarpReport> warp_break(const MetricSpec& m, const std::vector<double>& scales, int k,
                                   int n, int threads = 0);

struct InequalityAudit {
  double lhs = 0.0;
  std::optional<double> rhs;
  std::optional<bool> consistent;
  std::optional<double> rhs_total_space;
  std::optional<bool> consistent_total_space;
};

InequalityAudit inequality_audit(const WarpReport& r);

/// Relative |int_P f - vol(fiber) int_M f| over `functions` random smooth
/// invariant f, normalized by int_P |f|.
double fubini_check(const MetricSpec& m, int functions, int n, algebra::Rng& rng);

/// Worker count from BSL_THREADS, falling back to hardware concurrency.
int default_threads();

nlohmann::json to_json(const CompareReport& r);
nlohmann::json to_json(const WarpReport& r);
nlohmann::json to_json(const InequalityAudit& a);

}  // namespace bsl::lab
