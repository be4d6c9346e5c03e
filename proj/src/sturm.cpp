#include "bsl/sturm.hpp"

#include <cmath>
#include <string>

#include "bsl/error.hpp"

namespace bsl::sturm {

namespace {

void check_size(const DiscreteOperator& op, const std::vector<double>& u) {
  if (u.size() != op.size()) {
    throw Error(ErrorCode::GridMismatch, "vector has " + std::to_string(u.size()) +
                                             " entries, operator expects " +
                                             std::to_string(op.size()));
  }
}

}  // namespace

DiscreteOperator assemble(const OrbitProfile& p) {
  const int n = p.n();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "profile needs at least two cells");
  for (int i = 0; i <= n; ++i) {
    const double w = p.w[i];
    const bool interior = i > 0 && i < n;
    if (!std::isfinite(w) || w < 0.0 || (interior && w <= 0.0)) {
      throw Error(ErrorCode::NonpositiveWeight,
                  "weight " + std::to_string(w) + " at node " + std::to_string(i));
    }
  }

  DiscreteOperator op;
  op.n = n;
  op.dt = p.dt();
  op.left = p.left;
  op.right = p.right;
  op.side = p.side;
  op.fingerprint = p.fingerprint;
  op.half_weight.resize(n);
  op.off.resize(n);
  op.diag.assign(n + 1, 0.0);
  op.mass.resize(n + 1);

  const double inv_dt = 1.0 / op.dt;
  for (int i = 0; i < n; ++i) {
    const double wh = 0.5 * (p.w[i] + p.w[i + 1]);
    op.half_weight[i] = wh;
    op.off[i] = -wh * inv_dt;
    op.diag[i] += wh * inv_dt;
    op.diag[i + 1] += wh * inv_dt;
  }
  for (int i = 1; i < n; ++i) op.mass[i] = p.w[i] * op.dt;
  // Half cells: trapezoid integral of the linear interpolant over [0, dt/2].
  op.mass[0] = 0.5 * op.dt * (3.0 * p.w[0] + p.w[1]) / 4.0;
  op.mass[n] = 0.5 * op.dt * (3.0 * p.w[n] + p.w[n - 1]) / 4.0;
  return op;
}

std::vector<double> apply(const DiscreteOperator& op, const std::vector<double>& u) {
  check_size(op, u);
  const double inv_dt = 1.0 / op.dt;
  std::vector<double> r(op.size(), 0.0);
  // Flux form: every cell contributes +f to its left node and -f to its right
  // node, so constants map to zero with no cancellation error.
  for (int i = 0; i < op.n; ++i) {
    const double flux = op.half_weight[i] * (u[i + 1] - u[i]) * inv_dt;
    r[i] -= flux;
    r[i + 1] += flux;
  }
  return r;
}

std::vector<double> apply_mass(const DiscreteOperator& op, const std::vector<double>& u) {
  check_size(op, u);
  std::vector<double> r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = op.mass[i] * u[i];
  return r;
}

double green_form(const DiscreteOperator& op, const std::vector<double>& u,
                  const std::vector<double>& v) {
  check_size(op, u);
  check_size(op, v);
  double s = 0.0;
  for (int i = 0; i < op.n; ++i) s += op.half_weight[i] * (u[i + 1] - u[i]) * (v[i + 1] - v[i]);
  return s / op.dt;
}

double mass_inner(const DiscreteOperator& op, const std::vector<double>& u,
                  const std::vector<double>& v) {
  check_size(op, u);
  check_size(op, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += op.mass[i] * u[i] * v[i];
  return s;
}

double integrate(const DiscreteOperator& op, const std::vector<double>& f) {
  check_size(op, f);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += op.mass[i] * f[i];
  return s;
}

std::vector<double> zero_mean_project(const DiscreteOperator& op, const std::vector<double>& u) {
  check_size(op, u);
  double total = 0.0;
  for (double b : op.mass) total += b;
  const double mean = integrate(op, u) / total;
  std::vector<double> r(u);
  for (double& x : r) x -= mean;
  return r;
}

}  // namespace bsl::sturm
