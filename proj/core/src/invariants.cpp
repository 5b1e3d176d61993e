#include "coevo/invariants.hpp"

#include "coevo/analysis.hpp"
#include "coevo/riccati.hpp"
#include "coevo/rng.hpp"
#include "coevo/trajectory_io.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace coevo {

namespace {

constexpr double kRoundoff = std::numeric_limits<double>::epsilon();

SimConfig battery_sim(const BatteryConfig& cfg) {
  SimConfig sim;
  sim.mode = Mode::continuous;
  sim.dt = cfg.dt;
  sim.blowup_threshold = cfg.threshold;
  sim.t_end = cfg.t_end;
  sim.sample_every = 1;
  sim.diagnostics = false;
  return sim;
}

InvariantCheck skipped(std::string name, double tol, std::string note) {
  InvariantCheck c;
  c.name = std::move(name);
  c.tolerance = tol;
  c.skipped = true;
  c.note = std::move(note);
  return c;
}

InvariantCheck measured(std::string name, double residual, double tol) {
  InvariantCheck c;
  c.name = std::move(name);
  c.residual = residual;
  c.tolerance = tol;
  c.passed = residual <= tol;
  return c;
}

Matrix random_orthogonal(Index n, std::uint64_t seed) {
  Pcg32 rng(seed);
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
  const Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ();
}

InvariantCheck conjugation_check(const Trajectory& base, const Vector& v0, const Matrix& w0, bool symmetric,
                                 const BatteryConfig& cfg) {
  const Index n = v0.size();
  const Matrix q = random_orthogonal(n, cfg.seed);
  Matrix qw = q * w0 * q.transpose();
  if (symmetric) qw = 0.5 * (qw + qw.transpose());
  const Trajectory other = integrate(SystemState::scalar(q * v0, qw), GraphTopology::complete(static_cast<std::size_t>(n)),
                                     battery_sim(cfg));
  double worst = 0.0;
  std::size_t compared = 0;
  const std::size_t count = std::min(base.samples.size(), other.samples.size());
  for (std::size_t k = 0; k < count; ++k) {
    const SystemState& a = base.samples[k];
    const SystemState& b = other.samples[k];
    if (std::abs(a.t - b.t) > 1e-12 * (1.0 + std::abs(a.t))) break;
    const double ev = max_abs(q * a.v - b.v) / (1.0 + max_abs(a.v));
    const double ew = max_abs(q * a.w * q.transpose() - b.w) / (1.0 + max_abs(a.w));
    worst = std::max({worst, ev, ew});
    ++compared;
  }
  InvariantCheck c = measured("conjugation", worst, BatteryTolerances::conjugation);
  if (compared < 2) {
    c.passed = false;
    c.note = "rotated run diverged in step sequence before two samples matched";
  } else if (compared < count) {
    c.note = "compared " + std::to_string(compared) + " of " + std::to_string(count) + " samples";
  }
  return c;
}

}  // namespace

bool BatteryReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.skipped || c.passed; });
}

const InvariantCheck& BatteryReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw PreconditionFailed("BatteryReport: no check named " + name);
}

BatteryReport run_invariant_battery(const Vector& v0, const Matrix& w0, const BatteryConfig& cfg) {
  const Index n = v0.size();
  if (w0.rows() != n || w0.cols() != n) throw DimensionMismatch("run_invariant_battery: W(0) must be n×n");
  const GraphTopology g = GraphTopology::complete(static_cast<std::size_t>(n));
  const SimConfig sim = battery_sim(cfg);
  const bool symmetric = max_abs(w0 - w0.transpose()) <= 1e-12 * (1.0 + max_abs(w0));

  // Asymmetric ties keep their exact entries; SystemState never symmetrises.
  const Trajectory base = integrate(SystemState::scalar(v0, w0), g, sim);
  BatteryReport report;
  report.trajectory = base;
  if (cfg.perturb_midstream) {
    SimConfig first = sim;
    first.t_end = 0.5 * base.final_state().t;
    Trajectory head = integrate(SystemState::scalar(v0, w0), g, first);
    SystemState mid = head.final_state();
    mid.w(0, 1) += cfg.perturbation;
    if (n > 1) mid.w(1, 0) += cfg.perturbation;
    Trajectory tail = integrate(mid, g, sim);
    report.trajectory = std::move(head);
    Trajectory& t = report.trajectory;
    t.samples.insert(t.samples.end(), tail.samples.begin(), tail.samples.end());
    t.diagnostics.insert(t.diagnostics.end(), tail.diagnostics.begin(), tail.diagnostics.end());
    t.stop_reason = tail.stop_reason;
    t.stop_time = tail.stop_time;
    t.steps += tail.steps;
    t.forced_steps += tail.forced_steps;
  }
  const Trajectory& traj = report.trajectory;
  const std::string needs_symmetric = "skipped: W(0) is not symmetric";

  if (!symmetric) {
    report.checks.push_back(skipped("symmetry", BatteryTolerances::symmetry, needs_symmetric));
  } else {
    double worst = 0.0;
    for (const auto& s : traj.samples) worst = std::max(worst, max_abs(s.w - s.w.transpose()) / (1.0 + max_abs(s.w)));
    report.checks.push_back(measured("symmetry", worst, BatteryTolerances::symmetry));
  }

  report.checks.push_back(conjugation_check(base, v0, w0, symmetric, cfg));

  if (!symmetric) {
    for (const char* name : {"energy", "convexity", "riccati", "parseval"}) {
      report.checks.push_back(skipped(name, 0.0, needs_symmetric));
    }
    report.checks[2].tolerance = BatteryTolerances::energy;
    report.checks[3].tolerance = BatteryTolerances::convexity;
    report.checks[4].tolerance = BatteryTolerances::riccati;
    report.checks[5].tolerance = BatteryTolerances::parseval;
  } else {
    const SymmetricMatrix c = model_c(v0, SymmetricMatrix(w0)).c;

    double energy = 0.0;
    for (const auto& s : traj.samples) {
      const Vector v = s.v.col(0);
      const double lhs = (s.w * v).squaredNorm();
      const double v4 = std::pow(v.squaredNorm(), 2);
      const double vcv = v.dot(c.matrix() * v);
      const double scale = std::max({lhs, v4, std::abs(vcv), 1e-300});
      energy = std::max(energy, std::abs(lhs - (v4 - vcv)) / scale);
    }
    report.checks.push_back(measured("energy", energy, BatteryTolerances::energy));

    // φ'' against centred differences (equal spacing only, so step-size
    // changes are skipped); the allowance covers cancellation in the stencil.
    double convexity = 0.0;
    bool negative = false;
    std::size_t stencils = 0;
    for (std::size_t k = 1; k + 1 < traj.samples.size(); ++k) {
      const double t0 = traj.samples[k - 1].t, t1 = traj.samples[k].t, t2 = traj.samples[k + 1].t;
      const double h0 = t1 - t0, h1 = t2 - t1;
      if (!(h0 > 0.0) || std::abs(h1 - h0) > 1e-9 * h0) continue;
      const double p0 = traj.samples[k - 1].v.squaredNorm();
      const double p1 = traj.samples[k].v.squaredNorm();
      const double p2 = traj.samples[k + 1].v.squaredNorm();
      const double fd = (p2 - 2.0 * p1 + p0) / (h0 * h1);
      const Vector v = traj.samples[k].v.col(0);
      const double exact = 2.0 * (2.0 * (traj.samples[k].w * v).squaredNorm() + p1 * p1);
      if (exact < 0.0) negative = true;
      const double allowance = 64.0 * kRoundoff * std::max({p0, p1, p2}) / (h0 * h1);
      const double rel = std::max(0.0, std::abs(fd - exact) - allowance) / std::max(exact, 1e-300);
      convexity = std::max(convexity, rel);
      ++stencils;
    }
    InvariantCheck conv = measured("convexity", convexity, BatteryTolerances::convexity);
    if (negative) {
      conv.passed = false;
      conv.note = "second derivative of |V|² negative";
    } else if (stencils == 0) {
      conv.skipped = true;
      conv.note = "skipped: fewer than three samples";
    }
    report.checks.push_back(conv);

    double ric = 0.0;
    for (const auto& s : traj.samples) {
      const Vector v = s.v.col(0);
      const double scale = std::max({1.0, max_abs(v * v.transpose()), max_abs(s.w * s.w)});
      ric = std::max(ric, riccati_residual(s, c) / scale);
    }
    report.checks.push_back(measured("riccati", ric, BatteryTolerances::riccati));

    const LambdaTrack lt = lambda_coordinates(traj, c);
    report.checks.push_back(measured("parseval", lt.parseval_residual, BatteryTolerances::parseval));
  }

  const bool eigen_start = symmetric && v0.squaredNorm() > 0.0 &&
                           is_eigenvector(SymmetricMatrix(w0), v0, 1e-9 * (1.0 + max_abs(w0))).yes;
  if (!eigen_start) {
    report.checks.push_back(skipped("eigenvector", BatteryTolerances::eigenvector,
                                    symmetric ? "skipped: V(0) is not an eigenvector of W(0)" : needs_symmetric));
  } else {
    double worst = 0.0;
    for (const auto& s : traj.samples) {
      const Vector v = s.v.col(0);
      const double norm = v.norm();
      if (norm == 0.0) continue;
      const Vector av = s.w * v;
      const double alpha = v.dot(av) / (norm * norm);
      worst = std::max(worst, (av - alpha * v).norm() / norm);
    }
    report.checks.push_back(measured("eigenvector", worst, BatteryTolerances::eigenvector));
  }
  return report;
}

double dissonance_gradient_error(const SystemState& s, const GraphTopology& g, double h) {
  const StateDerivative rhs = coupled_rhs(s, g);
  const Index m = s.m();
  double worst = 0.0;
  double scale = 0.0;
  SystemState p = s;

  for (Index i = 0; i < s.v.rows(); ++i) {
    for (Index a = 0; a < m; ++a) {
      const double step = h * (1.0 + std::abs(s.v(i, a)));
      p.v(i, a) = s.v(i, a) + step;
      const double up = dissonance(p, g);
      p.v(i, a) = s.v(i, a) - step;
      const double down = dissonance(p, g);
      p.v(i, a) = s.v(i, a);
      const double fd = (up - down) / (2.0 * step);
      worst = std::max(worst, std::abs(fd - rhs.dv(i, a)));
      scale = std::max(scale, std::abs(rhs.dv(i, a)));
    }
  }
  for (const auto& [ii, jj] : g.edges()) {
    const auto i = static_cast<Index>(ii);
    const auto j = static_cast<Index>(jj);
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        const Index r = i * m + a, c = j * m + b;
        const double step = h * (1.0 + std::abs(s.w(r, c)));
        p.w(r, c) = s.w(r, c) + step;
        p.w(c, r) = s.w(c, r) + step;
        const double up = dissonance(p, g);
        p.w(r, c) = s.w(r, c) - step;
        p.w(c, r) = s.w(c, r) - step;
        const double down = dissonance(p, g);
        p.w(r, c) = s.w(r, c);
        p.w(c, r) = s.w(c, r);
        const double fd = (up - down) / (2.0 * step);
        worst = std::max(worst, std::abs(fd - rhs.dw(r, c)));
        scale = std::max(scale, std::abs(rhs.dw(r, c)));
      }
    }
  }
  return scale > 0.0 ? worst / scale : worst;
}

nlohmann::json to_json(const InvariantCheck& c) {
  nlohmann::json j = {{"name", c.name},
                      {"residual", number_json(c.residual)},
                      {"tolerance", number_json(c.tolerance)},
                      {"passed", c.skipped || c.passed},
                      {"skipped", c.skipped}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

nlohmann::json to_json(const BatteryReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"passed", r.passed()},
          {"stop_reason", std::string(to_string(r.trajectory.stop_reason))},
          {"stop_time", number_json(r.trajectory.stop_time)},
          {"samples", r.trajectory.samples.size()},
          {"checks", std::move(checks)}};
}

}  // namespace coevo
