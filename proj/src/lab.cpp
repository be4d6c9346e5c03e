#include "bsl/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "bsl/error.hpp"

namespace bsl::lab {

using geometry::GridFunction;

namespace {

constexpr double kDegenerate = 1e-10;
constexpr double kMinTolerance = 1e-8;

nlohmann::json optional_number(const std::optional<double>& v) {
  if (v) return *v;
  return "undefined";
}

nlohmann::json optional_bool(const std::optional<bool>& v) {
  if (v) return *v;
  return "undefined";
}

double abs_integral(const sturm::DiscreteOperator& op, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += op.mass[i] * std::abs(f[i]);
  return s;
}

}  // namespace

int default_threads() {
  if (const char* env = std::getenv("BSL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SideSpectra side_spectra(const MetricSpec& m, Side side, int k, int n, bool include_zero) {
  SideSpectra s;
  s.coarse = eigen::solve(sturm::assemble(geometry::orbit_profile(m, side, n)), k, include_zero);
  s.fine = eigen::solve(sturm::assemble(geometry::orbit_profile(m, side, 2 * n)), k, include_zero);
  s.extrapolated = eigen::extrapolate(s.coarse, s.fine);
  return s;
}

CompareReport compare_basic_spectra(const MetricSpec& m, int k, int n,
                                    std::optional<double> tolerance) {
  const SideSpectra sm = side_spectra(m, Side::M, k, n);
  const SideSpectra smp = side_spectra(m, Side::MPrime, k, n);

  CompareReport r;
  r.diagram = m.diagram;
  r.fingerprint = geometry::fingerprint(m);
  r.n = n;
  r.k = k;
  const auto& a = sm.extrapolated.entries;
  const auto& b = smp.extrapolated.entries;
  const std::size_t count = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < count; ++i) {
    ComparePair p;
    p.index = static_cast<int>(i) + 1;
    if (i < a.size() && i < b.size()) {
      p.lambda_m = a[i].lambda;
      p.lambda_mprime = b[i].lambda;
      p.err_m = a[i].error;
      p.err_mprime = b[i].error;
      const double scale = std::max(std::abs(p.lambda_m), std::abs(p.lambda_mprime));
      p.relgap = std::abs(p.lambda_m - p.lambda_mprime) / scale;
      r.combined_relative_error =
          std::max(r.combined_relative_error, (p.err_m + p.err_mprime) / scale);
    } else {
      // Different multiplicity structure: the spectra cannot match index by index.
      p.lambda_m = i < a.size() ? a[i].lambda : std::numeric_limits<double>::quiet_NaN();
      p.lambda_mprime = i < b.size() ? b[i].lambda : std::numeric_limits<double>::quiet_NaN();
      p.relgap = std::numeric_limits<double>::infinity();
    }
    r.max_relative_gap = std::max(r.max_relative_gap, p.relgap);
    r.pairs.push_back(p);
  }
  if (tolerance) {
    r.tolerance = *tolerance;
  } else {
    r.tolerance = std::max(kMinTolerance, 3.0 * r.combined_relative_error);
    r.tolerance_from_errors = true;
  }
  r.isospectral = r.max_relative_gap <= r.tolerance;
  return r;
}

JointCheck joint_eigenfunction_check(const MetricSpec& m, int index, int n) {
  if (index < 0) throw Error(ErrorCode::InvalidArgument, "eigenfunction index must be >= 0");
  const auto d = diagrams::catalog(m.diagram);
  const auto op_m = sturm::assemble(geometry::orbit_profile(m, Side::M, n));
  const auto op_mp = sturm::assemble(geometry::orbit_profile(m, Side::MPrime, n));

  JointCheck r;
  r.index = index;
  std::vector<double> u;
  if (index == 0) {
    u.assign(op_m.size(), 1.0);
    r.lambda = 0.0;
  } else {
    auto pairs = eigen::solve_pairs(op_m, index);
    u = std::move(pairs.back().vector);
    r.lambda = pairs.back().lambda;
  }
  r.native_residual = eigen::residual(op_m, r.lambda, u);

  // Invariant function on M read off its orbit coordinate, carried to M'.
  const double L = geometry::orbit_length(m);
  const GridFunction table(u, L);
  const MetricSpec spec = m;
  const diagrams::InvariantFunction f = [table, spec](const diagrams::BasePoint& x) {
    return table(geometry::base_orbit_coordinate(spec, Side::M, x));
  };
  const auto f_prime = diagrams::transport_invariant(d, f, diagrams::Direction::ToPrime);

  std::vector<double> v(op_mp.size());
  for (int i = 0; i <= n; ++i) {
    const auto p = geometry::slice_point(m, L * i / n);
    v[i] = f_prime(d.proj_star(p));
  }
  r.joint_residual = eigen::residual(op_mp, r.lambda, v);
  return r;
}

std::vector<WarpReport> warp_break(const MetricSpec& m, const std::vector<double>& scales, int k,
                                   int n, int threads) {
  if (m.warped()) throw Error(ErrorCode::InvalidArgument, "warp_break expects an unwarped metric");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "need at least one mode");
  for (double c : scales) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::InvalidArgument, "warp scales must be finite and >= 0");
    }
  }
  const double L = geometry::orbit_length(m);
  const SideSpectra base = side_spectra(m, Side::MPrime, k, n);

  // First basic eigenfunction of the unwarped M' on the fine grid.
  const auto op_fine = sturm::assemble(geometry::orbit_profile(m, Side::MPrime, 2 * n));
  const auto first = eigen::solve_pairs(op_fine, 1).front();
  const GridFunction u(first.vector, L);
  const double int_u2 = sturm::mass_inner(op_fine, first.vector, first.vector);

  std::vector<WarpReport> reports(scales.size());
  auto run = [&](std::size_t idx) {
    const double c = scales[idx];
    const MetricSpec mw = geometry::warp(m, u, c);
    const SideSpectra warped = side_spectra(mw, Side::MPrime, k, n);
    const SideSpectra base_side = side_spectra(mw, Side::M, 1, n);

    WarpReport r;
    r.scale = c;
    r.lambda1_unwarped = base.extrapolated.entries.front().lambda;
    r.err_unwarped = base.extrapolated.entries.front().error;
    r.lambda1_warped = warped.extrapolated.entries.front().lambda;
    r.err_warped = warped.extrapolated.entries.front().error;
    r.shift = std::abs(r.lambda1_warped - r.lambda1_unwarped);
    r.threshold = 10.0 * (r.err_unwarped + r.err_warped);
    r.broke_isospectrality = r.shift > r.threshold;
    r.lambda1_base = base_side.extrapolated.entries.front().lambda;

    r.group_dim = algebra::dimension(diagrams::catalog(m.diagram).group);
    const auto op_w = sturm::assemble(geometry::orbit_profile(mw, Side::MPrime, 2 * n));
    const auto op_p = sturm::assemble(geometry::orbit_profile(mw, Side::P, 2 * n));
    const auto phi = eigen::solve_pairs(op_w, 1).front().vector;
    r.int_u2 = int_u2;
    r.int_phi = sturm::integrate(op_w, phi);
    r.int_phi2 = sturm::mass_inner(op_w, phi, phi);
    r.int_abs_phi = abs_integral(op_w, phi);
    r.int_phi_total = sturm::integrate(op_p, phi);
    double vol_p = 0.0;
    double vol_mp = 0.0;
    for (double b : op_p.mass) vol_p += b;
    for (double b : op_w.mass) vol_mp += b;
    r.mean_star_fiber_volume = vol_p / vol_mp;

    r.lhs = std::sqrt(r.lambda1_warped / r.lambda1_unwarped);
    const double numerator = r.group_dim * std::sqrt(r.int_u2) * std::sqrt(r.int_phi2);
    if (std::abs(r.int_phi) >= kDegenerate * r.int_abs_phi) r.rhs = numerator / r.int_phi;
    const double denom_total = r.int_phi_total / r.mean_star_fiber_volume;
    if (std::abs(r.int_phi_total) >= kDegenerate * abs_integral(op_p, phi)) {
      r.rhs_total_space = numerator / denom_total;
    }

    const auto fb = geometry::fiber_volume(mw, diagrams::Which::Bullet, 2 * n);
    const auto fs = geometry::fiber_volume(mw, diagrams::Which::Star, 2 * n);
    r.bullet_fiber_min = *std::min_element(fb.begin(), fb.end());
    r.bullet_fiber_max = *std::max_element(fb.begin(), fb.end());
    r.star_fiber_min = *std::min_element(fs.begin(), fs.end());
    r.star_fiber_max = *std::max_element(fs.begin(), fs.end());
    reports[idx] = r;
  };

  const int workers = std::max(
      1, std::min<int>(threads > 0 ? threads : default_threads(), static_cast<int>(scales.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t idx = next++; idx < scales.size(); idx = next++) {
      try {
        run(idx);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return reports;
}

InequalityAudit inequality_audit(const WarpReport& r) {
  InequalityAudit a;
  a.lhs = r.lhs;
  a.rhs = r.rhs;
  if (r.rhs) a.consistent = r.lhs <= *r.rhs;
  a.rhs_total_space = r.rhs_total_space;
  if (r.rhs_total_space) a.consistent_total_space = r.lhs <= *r.rhs_total_space;
  return a;
}

double fubini_check(const MetricSpec& m, int functions, int n, algebra::Rng& rng) {
  if (m.warped()) throw Error(ErrorCode::InvalidArgument, "Fubini check expects an unwarped metric");
  const auto op_p = sturm::assemble(geometry::orbit_profile(m, Side::P, n));
  const auto op_m = sturm::assemble(geometry::orbit_profile(m, Side::M, n));
  const auto fiber = geometry::fiber_volume(m, diagrams::Which::Bullet, n);
  const double vol_fiber = fiber[n / 2];
  const double L = geometry::orbit_length(m);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < functions; ++s) {
    double coeff[6];
    for (double& a : coeff) a = gauss(rng);
    std::vector<double> f(n + 1);
    for (int i = 0; i <= n; ++i) {
      const double t = L * i / n;
      double v = 0.0;
      for (int j = 0; j < 6; ++j) v += coeff[j] * std::cos(j * algebra::kPi * t / L);
      f[i] = v;
    }
    const double ip = sturm::integrate(op_p, f);
    const double im = sturm::integrate(op_m, f);
    worst = std::max(worst, std::abs(ip - vol_fiber * im) / abs_integral(op_p, f));
  }
  return worst;
}

nlohmann::json to_json(const CompareReport& r) {
  nlohmann::json j;
  j["diagram"] = diagrams::to_string(r.diagram);
  j["fingerprint"] = geometry::fingerprint_hex(r.fingerprint);
  j["n"] = r.n;
  j["k"] = r.k;
  auto pairs = nlohmann::json::array();
  for (const auto& p : r.pairs) {
    nlohmann::json e;
    e["index"] = p.index;
    e["lambda_M"] = p.lambda_m;
    e["lambda_Mprime"] = p.lambda_mprime;
    e["err_M"] = p.err_m;
    e["err_Mprime"] = p.err_mprime;
    e["relgap"] = std::isfinite(p.relgap) ? nlohmann::json(p.relgap) : nlohmann::json("inf");
    pairs.push_back(e);
  }
  j["pairs"] = pairs;
  j["max_relative_gap"] =
      std::isfinite(r.max_relative_gap) ? nlohmann::json(r.max_relative_gap) : nlohmann::json("inf");
  j["combined_relative_error"] = r.combined_relative_error;
  j["tolerance"] = r.tolerance;
  j["tolerance_rule"] = r.tolerance_from_errors ? "max(1e-8, 3*combined_relative_error)" : "user";
  j["isospectral"] = r.isospectral;
  return j;
}

nlohmann::json to_json(const WarpReport& r) {
  nlohmann::json j;
  j["scale"] = r.scale;
  j["lambda1_unwarped"] = r.lambda1_unwarped;
  j["err_unwarped"] = r.err_unwarped;
  j["lambda1_warped"] = r.lambda1_warped;
  j["err_warped"] = r.err_warped;
  j["shift"] = r.shift;
  j["threshold"] = r.threshold;
  j["broke_isospectrality"] = r.broke_isospectrality;
  j["lambda1_base_after_warp"] = r.lambda1_base;
  j["group_dim"] = r.group_dim;
  j["int_u2"] = r.int_u2;
  j["mean_of_phi"] = r.int_phi;
  j["int_phi2"] = r.int_phi2;
  j["int_abs_phi"] = r.int_abs_phi;
  j["int_phi_total_space"] = r.int_phi_total;
  j["mean_star_fiber_volume"] = r.mean_star_fiber_volume;
  j["lhs"] = r.lhs;
  j["rhs"] = optional_number(r.rhs);
  j["rhs_total_space"] = optional_number(r.rhs_total_space);
  j["bullet_fiber_volume"] = {{"min", r.bullet_fiber_min}, {"max", r.bullet_fiber_max}};
  j["star_fiber_volume"] = {{"min", r.star_fiber_min}, {"max", r.star_fiber_max}};
  return j;
}

nlohmann::json to_json(const InequalityAudit& a) {
  nlohmann::json j;
  j["lhs"] = a.lhs;
  j["rhs"] = optional_number(a.rhs);
  j["consistent"] = optional_bool(a.consistent);
  j["rhs_total_space"] = optional_number(a.rhs_total_space);
  j["consistent_total_space"] = optional_bool(a.consistent_total_space);
  return j;
}

}  // namespace bsl::lab
