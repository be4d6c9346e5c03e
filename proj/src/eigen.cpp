#include "bsl/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bsl/error.hpp"
#include "bsl/geometry.hpp"

namespace bsl::eigen {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kBisectionCap = 400;
constexpr int kInverseSteps = 4;

// Symmetric tridiagonal T = B^{-1/2} A B^{-1/2}.
struct Tridiagonal {
  std::vector<double> d;
  std::vector<double> e;
  std::vector<double> sqrt_mass;
  double norm = 0.0;
};

Tridiagonal symmetrize(const DiscreteOperator& op) {
  const std::size_t m = op.size();
  Tridiagonal t;
  t.sqrt_mass.resize(m);
  for (std::size_t i = 0; i < m; ++i) t.sqrt_mass[i] = std::sqrt(op.mass[i]);
  t.d.resize(m);
  t.e.resize(m - 1);
  for (std::size_t i = 0; i < m; ++i) t.d[i] = op.diag[i] / op.mass[i];
  for (std::size_t i = 0; i + 1 < m; ++i) t.e[i] = op.off[i] / (t.sqrt_mass[i] * t.sqrt_mass[i + 1]);
  for (std::size_t i = 0; i < m; ++i) {
    double r = std::abs(t.d[i]);
    if (i > 0) r += std::abs(t.e[i - 1]);
    if (i + 1 < m) r += std::abs(t.e[i]);
    t.norm = std::max(t.norm, r);
  }
  return t;
}

// Number of eigenvalues of T strictly below x.
int sturm_count(const Tridiagonal& t, double x) {
  const double tiny = kEps * kEps * std::max(t.norm, 1.0);
  int count = 0;
  double q = t.d[0] - x;
  if (q == 0.0) q = -tiny;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < t.d.size(); ++i) {
    q = t.d[i] - x - t.e[i - 1] * t.e[i - 1] / q;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

// The eigenvalue with 0-based ascending index j.
double bisect(const Tridiagonal& t, int j) {
  double lo = -t.norm;
  double hi = t.norm;
  for (int it = 0; it < kBisectionCap; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + kEps * kEps * t.norm ||
        mid <= lo || mid >= hi) {
      return mid;
    }
    if (sturm_count(t, mid) > j) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw Error(ErrorCode::ConvergenceFailure,
              "bisection did not converge for eigenvalue index " + std::to_string(j));
}

// Solves (T - sigma I) y = x by Gaussian elimination with partial pivoting.
std::vector<double> shifted_solve(const Tridiagonal& t, double sigma, std::vector<double> x) {
  const std::size_t m = t.d.size();
  const double floor = kEps * std::max(t.norm, 1.0);
  std::vector<double> dl(t.e), dg(m), du(t.e), du2(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) dg[i] = t.d[i] - sigma;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::abs(dg[i]) >= std::abs(dl[i])) {
      if (dg[i] == 0.0) dg[i] = floor;
      const double f = dl[i] / dg[i];
      dg[i + 1] -= f * du[i];
      x[i + 1] -= f * x[i];
      dl[i] = f;
      du2[i] = 0.0;
    } else {
      const double f = dg[i] / dl[i];
      dg[i] = dl[i];
      const double tmp = dg[i + 1];
      dg[i + 1] = du[i] - f * tmp;
      if (i + 2 < m) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du2[i];
      }
      du[i] = tmp;
      std::swap(x[i], x[i + 1]);
      x[i + 1] -= f * x[i];
      dl[i] = f;
    }
  }
  if (dg[m - 1] == 0.0) dg[m - 1] = floor;
  std::vector<double> y(m);
  y[m - 1] = x[m - 1] / dg[m - 1];
  if (m >= 2) y[m - 2] = (x[m - 2] - du[m - 2] * y[m - 1]) / dg[m - 2];
  for (std::size_t ii = m - 2; ii-- > 0;) {
    y[ii] = (x[ii] - du[ii] * y[ii + 1] - du2[ii] * y[ii + 2]) / dg[ii];
  }
  return y;
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s == 0.0 || !std::isfinite(s)) {
    throw Error(ErrorCode::ConvergenceFailure, "inverse iteration produced a degenerate vector");
  }
  for (double& x : v) x /= s;
}

void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& b : basis) {
    double c = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) c += v[i] * b[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
  }
}

void check_k(const DiscreteOperator& op, int k) {
  if (k < 1 || k >= op.n) {
    throw Error(ErrorCode::InvalidArgument,
                "mode count k must satisfy 1 <= k < n (k = " + std::to_string(k) + ")");
  }
}

}  // namespace

std::vector<double> BasicSpectrum::values() const {
  std::vector<double> v;
  for (const auto& e : entries) v.push_back(e.lambda);
  return v;
}

std::vector<double> eigenvalues(const DiscreteOperator& op, int k) {
  check_k(op, k);
  const Tridiagonal t = symmetrize(op);
  std::vector<double> out;
  for (int j = 1; j <= k; ++j) out.push_back(bisect(t, j));
  return out;
}

double residual(const DiscreteOperator& op, double lambda, const std::vector<double>& u) {
  const auto au = sturm::apply(op, u);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double bu = op.mass[i] * u[i];
    num += (au[i] - lambda * bu) * (au[i] - lambda * bu);
    den += bu * bu;
  }
  if (den == 0.0) throw Error(ErrorCode::ZeroVector, "residual of the zero vector");
  return std::sqrt(num / den);
}

std::vector<EigenPair> solve_pairs(const DiscreteOperator& op, int k, bool include_zero) {
  check_k(op, k);
  const Tridiagonal t = symmetrize(op);
  const std::size_t m = t.d.size();

  // Null vector of T: B^{1/2} 1, normalized.
  std::vector<double> zero_mode(t.sqrt_mass);
  normalize(zero_mode);
  std::vector<std::vector<double>> basis{zero_mode};

  std::vector<EigenPair> pairs;
  if (include_zero) {
    double total = 0.0;
    for (double b : op.mass) total += b;
    pairs.push_back({0.0, std::vector<double>(m, 1.0 / std::sqrt(total)), 0.0});
    pairs.back().residual = residual(op, 0.0, pairs.back().vector);
  }

  for (int j = 1; j <= k; ++j) {
    const double lambda = bisect(t, j);
    // Deterministic, non-symmetric start vector.
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = 1.0 + 0.5 * std::sin(1.0 + 0.37 * static_cast<double>(i));
    orthogonalize(y, basis);
    normalize(y);
    const double shift = lambda + 8.0 * kEps * std::max(std::abs(lambda), 1.0);
    for (int step = 0; step < kInverseSteps; ++step) {
      y = shifted_solve(t, shift, y);
      orthogonalize(y, basis);
      normalize(y);
    }
    basis.push_back(y);

    EigenPair pair;
    pair.vector.resize(m);
    for (std::size_t i = 0; i < m; ++i) pair.vector[i] = y[i] / t.sqrt_mass[i];
    // Sign convention: positive at the first node (or first nonzero node).
    for (double v : pair.vector) {
      if (v != 0.0) {
        if (v < 0.0) {
          for (double& x : pair.vector) x = -x;
        }
        break;
      }
    }
    // The Rayleigh quotient of the converged vector is accurate to the square
    // of the vector error, well below the bisection bracket.
    const double rq = sturm::green_form(op, pair.vector, pair.vector) /
                      sturm::mass_inner(op, pair.vector, pair.vector);
    pair.lambda = std::abs(rq - lambda) <= 1e-6 * std::max(1.0, std::abs(lambda)) ? rq : lambda;
    pair.residual = residual(op, pair.lambda, pair.vector);
    if (!std::isfinite(pair.residual)) {
      throw Error(ErrorCode::ConvergenceFailure, "non-finite eigen-residual at index " + std::to_string(j));
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

BasicSpectrum group(const std::vector<double>& values, const std::vector<double>& errors) {
  BasicSpectrum s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double err = errors.empty() ? 0.0 : errors[i];
    if (!s.entries.empty()) {
      auto& last = s.entries.back();
      const double gap = values[i] - last.lambda;
      if (gap <= std::max(kMergeAbsolute, kMergeRelative * std::abs(last.lambda))) {
        ++last.multiplicity;
        last.error = std::max(last.error, err);
        continue;
      }
    }
    s.entries.push_back({values[i], 1, err});
  }
  return s;
}

BasicSpectrum solve(const DiscreteOperator& op, int k, bool include_zero) {
  auto values = eigenvalues(op, k);
  // Bisection brackets each eigenvalue to a few ulps of |T|.
  const double norm = symmetrize(op).norm;
  std::vector<double> errors(values.size(), 4.0 * kEps * norm);
  if (include_zero) {
    values.insert(values.begin(), 0.0);
    errors.insert(errors.begin(), 4.0 * kEps * norm);
  }
  BasicSpectrum s = group(values, errors);
  s.n = op.n;
  s.side = op.side;
  s.fingerprint = op.fingerprint;
  s.includes_zero = include_zero;
  return s;
}

double rayleigh(const DiscreteOperator& op, const std::vector<double>& u) {
  const auto v = sturm::zero_mean_project(op, u);
  const double den = sturm::mass_inner(op, v, v);
  if (!(den > 0.0)) throw Error(ErrorCode::ZeroVector, "Rayleigh quotient of a constant vector");
  return sturm::green_form(op, v, v) / den;
}

BasicSpectrum extrapolate(const BasicSpectrum& coarse, const BasicSpectrum& fine) {
  if (coarse.fingerprint != fine.fingerprint || coarse.side != fine.side) {
    throw Error(ErrorCode::FingerprintMismatch, "spectra come from different metrics or sides");
  }
  BasicSpectrum out;
  out.n = fine.n;
  out.side = fine.side;
  out.fingerprint = fine.fingerprint;
  out.extrapolated = true;
  out.includes_zero = fine.includes_zero;
  const std::size_t count = std::min(coarse.entries.size(), fine.entries.size());
  for (std::size_t i = 0; i < count; ++i) {
    const double ln = coarse.entries[i].lambda;
    const double l2n = fine.entries[i].lambda;
    out.entries.push_back({(4.0 * l2n - ln) / 3.0, fine.entries[i].multiplicity,
                           std::abs(l2n - ln) / 3.0});
  }
  return out;
}

nlohmann::json to_json(const BasicSpectrum& s) {
  nlohmann::json j;
  j["side"] = diagrams::to_string(s.side);
  j["n"] = s.n;
  j["fingerprint"] = geometry::fingerprint_hex(s.fingerprint);
  j["extrapolated"] = s.extrapolated;
  j["includes_zero"] = s.includes_zero;
  auto arr = nlohmann::json::array();
  for (const auto& e : s.entries) arr.push_back({{"lambda", e.lambda}, {"mult", e.multiplicity}, {"err", e.error}});
  j["spectrum"] = arr;
  return j;
}

}  // namespace bsl::eigen
