#include "coevo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coevo {

namespace {

std::size_t trailing_start(std::size_t count) {
  const auto window = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(kTrailingFraction * static_cast<double>(count))));
  return count - std::min(window, count);
}

std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

LambdaTrack lambda_coordinates(const Trajectory& traj, const SymmetricMatrix& c) {
  if (traj.samples.empty()) throw PreconditionFailed("lambda_coordinates: empty trajectory");
  const SystemState& first = traj.samples.front();
  if (first.m() != 1) throw DimensionMismatch("lambda_coordinates: scalar opinions required");
  if (first.n() != c.size()) throw DimensionMismatch("lambda_coordinates: C size differs from opinion count");

  const SpectralDecomposition d = eigh(c);
  LambdaTrack lt;
  lt.u = d.u;
  lt.eigvals_c = d.eigenvalues;
  lt.times.reserve(traj.samples.size());
  lt.lambda.reserve(traj.samples.size());
  for (const SystemState& s : traj.samples) {
    Vector lam = d.u.transpose() * s.v.col(0);
    const double v_sq = s.v.squaredNorm();
    const double err = std::abs(lam.squaredNorm() - v_sq) / std::max(v_sq, 1e-300);
    lt.parseval_residual = std::max(lt.parseval_residual, err);
    lt.times.push_back(s.t);
    lt.lambda.push_back(std::move(lam));
  }

  // Centred second differences on equally spaced interior samples.
  for (std::size_t s = 1; s + 1 < lt.lambda.size(); ++s) {
    const double h0 = lt.times[s] - lt.times[s - 1];
    const double h1 = lt.times[s + 1] - lt.times[s];
    if (!(h0 > 0.0) || std::abs(h1 - h0) > 1e-9 * h0) continue;
    const Vector fd = (lt.lambda[s + 1] - 2.0 * lt.lambda[s] + lt.lambda[s - 1]) / (h0 * h1);
    const double v_sq = lt.lambda[s].squaredNorm();
    const Vector model = (2.0 * v_sq - lt.eigvals_c.array()).matrix().cwiseProduct(lt.lambda[s]);
    const double scale = 1.0 + std::pow(std::sqrt(v_sq), 3);
    lt.ode_residual = std::max(lt.ode_residual, (fd - model).cwiseAbs().maxCoeff() / scale);
  }
  return lt;
}

DominantMode dominant_mode(const LambdaTrack& lt) {
  if (lt.lambda.size() < 10) throw PreconditionFailed("dominant_mode: need at least 10 samples");
  const std::size_t start = trailing_start(lt.lambda.size());
  Vector mean = Vector::Zero(lt.lambda.front().size());
  for (std::size_t s = start; s < lt.lambda.size(); ++s) mean += lt.lambda[s].cwiseAbs();
  mean /= static_cast<double>(lt.lambda.size() - start);

  DominantMode out;
  Index best = 0;
  mean.maxCoeff(&best);
  out.index = static_cast<std::size_t>(best);
  double runner_up = 0.0;
  for (Index k = 0; k < mean.size(); ++k) {
    if (k != best) runner_up = std::max(runner_up, mean(k));
  }
  out.margin = runner_up > 0.0 ? mean(best) / runner_up : std::numeric_limits<double>::infinity();
  out.generic = out.margin >= kGenericMargin;
  return out;
}

LimitDirection limit_direction(const Trajectory& traj) {
  if (traj.samples.empty()) throw PreconditionFailed("limit_direction: empty trajectory");
  const std::size_t start = trailing_start(traj.samples.size());
  std::vector<Vector> dirs;
  for (std::size_t s = start; s < traj.samples.size(); ++s) {
    const Vector x = traj.samples[s].stacked();
    const double norm = x.norm();
    if (norm < kCollapseFloor) throw ZeroOpinion("limit_direction: |V| vanishes on the trailing window");
    dirs.push_back(x / norm);
  }
  Vector mean = Vector::Zero(dirs.front().size());
  for (const Vector& d : dirs) mean += d;
  mean /= static_cast<double>(dirs.size());

  LimitDirection out;
  for (const Vector& d : dirs) out.residual = std::max(out.residual, (d - mean).cwiseAbs().maxCoeff());
  out.converged = out.residual < kDirectionTolerance;
  out.direction = mean / mean.norm();
  return out;
}

LimitEigenCheck limit_eigen_check(const Trajectory& traj, const SymmetricMatrix& c) {
  if (traj.samples.empty()) throw PreconditionFailed("limit_eigen_check: empty trajectory");
  const SystemState& s = traj.final_state();
  if (s.m() != 1) throw DimensionMismatch("limit_eigen_check: scalar opinions required");
  if (s.n() != c.size()) throw DimensionMismatch("limit_eigen_check: C size differs from opinion count");
  const Vector v = s.v.col(0);
  LimitEigenCheck out;
  out.norm_v = v.norm();
  if (out.norm_v < kCollapseFloor) throw ZeroOpinion("limit_eigen_check: |V| vanishes at the last sample");
  const Vector x = v / out.norm_v;
  const double v_sq = out.norm_v * out.norm_v;
  out.residual = ((s.w * (s.w * x)) / v_sq - x).norm();
  out.c_residual = (c.matrix() * x).norm() / v_sq;
  return out;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionMismatch("spearman: sample sizes differ");
  if (x.size() < 2) throw PreconditionFailed("spearman: need at least two samples");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace coevo
