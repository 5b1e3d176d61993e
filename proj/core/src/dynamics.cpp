#include "coevo/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace coevo {

namespace {

// ---------------------------------------------------------------------------
// Masked products on the stacked opinion vector x (length n·m).

void masked_apply(const Matrix& w, const Vector& x, const GraphTopology& g, Index m, Vector& y) {
  const auto n = static_cast<Index>(g.n());
  if (g.is_complete()) {
    y.noalias() = w * x;
    if (!g.self_loops()) {
      for (Index i = 0; i < n; ++i) {
        y.segment(i * m, m).noalias() -= w.block(i * m, i * m, m, m) * x.segment(i * m, m);
      }
    }
    return;
  }
  y.setZero(x.size());
  if (m == 1) {
    for (Index i = 0; i < n; ++i) {
      double acc = g.self_loops() ? w(i, i) * x(i) : 0.0;
      for (const std::size_t j : g.neighbors(static_cast<std::size_t>(i))) {
        acc += w(i, static_cast<Index>(j)) * x(static_cast<Index>(j));
      }
      y(i) = acc;
    }
    return;
  }
  for (Index i = 0; i < n; ++i) {
    auto yi = y.segment(i * m, m);
    if (g.self_loops()) yi.noalias() += w.block(i * m, i * m, m, m) * x.segment(i * m, m);
    for (const std::size_t jj : g.neighbors(static_cast<std::size_t>(i))) {
      const auto j = static_cast<Index>(jj);
      yi.noalias() += w.block(i * m, j * m, m, m) * x.segment(j * m, m);
    }
  }
}

void masked_outer(const Vector& x, const GraphTopology& g, Index m, Matrix& dw) {
  const auto n = static_cast<Index>(g.n());
  if (g.is_complete()) {
    dw.noalias() = x * x.transpose();
    if (!g.self_loops()) {
      for (Index i = 0; i < n; ++i) dw.block(i * m, i * m, m, m).setZero();
    }
    return;
  }
  dw.setZero(x.size(), x.size());
  if (g.self_loops()) {
    for (Index i = 0; i < n; ++i) {
      dw.block(i * m, i * m, m, m).noalias() = x.segment(i * m, m) * x.segment(i * m, m).transpose();
    }
  }
  for (const auto& [ii, jj] : g.edges()) {
    const auto i = static_cast<Index>(ii);
    const auto j = static_cast<Index>(jj);
    if (m == 1) {
      dw(i, j) = x(i) * x(j);
      dw(j, i) = dw(i, j);
    } else {
      dw.block(i * m, j * m, m, m).noalias() = x.segment(i * m, m) * x.segment(j * m, m).transpose();
      dw.block(j * m, i * m, m, m) = dw.block(i * m, j * m, m, m).transpose();
    }
  }
}

void check_shapes(const SystemState& s, const GraphTopology& g) {
  if (static_cast<std::size_t>(s.n()) != g.n()) {
    throw DimensionMismatch("state has " + std::to_string(s.n()) + " nodes, graph has " +
                            std::to_string(g.n()));
  }
  const Index nm = s.n() * s.m();
  if (s.w.rows() != nm || s.w.cols() != nm) {
    throw DimensionMismatch("tie matrix must be " + std::to_string(nm) + "x" + std::to_string(nm));
  }
}

double growth_norm(const Vector& x, const Matrix& w) { return x.squaredNorm() + w.squaredNorm(); }

bool all_finite(const Vector& x, const Matrix& w) { return x.allFinite() && w.allFinite(); }

double max_abs_of(const Vector& x, const Matrix& w) {
  double out = 0.0;
  if (x.size() > 0) out = x.cwiseAbs().maxCoeff();
  if (w.size() > 0) out = std::max(out, w.cwiseAbs().maxCoeff());
  return out;
}

double min_triangle_product(const Matrix& w, const GraphTopology& g) {
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  g.for_each_triangle([&](std::size_t i, std::size_t j, std::size_t k) {
    const auto a = static_cast<Index>(i);
    const auto b = static_cast<Index>(j);
    const auto c = static_cast<Index>(k);
    best = std::min(best, w(a, b) * w(b, c) * w(c, a));
    any = true;
    return true;
  });
  return any ? best : std::numeric_limits<double>::quiet_NaN();
}

// Shifted power iteration, warm-started across samples.
class LeadingEigenTracker {
 public:
  double update(const Matrix& w) {
    const Index n = w.rows();
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    if (guess_.size() != n) guess_ = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    const Matrix sym = 0.5 * (w + w.transpose());
    const double shift = sym.cwiseAbs().rowwise().sum().maxCoeff();
    Vector y = guess_;
    for (int it = 0; it < 8; ++it) {
      Vector z = sym * y + shift * y;
      const double nz = z.norm();
      if (!(nz > 0.0) || !std::isfinite(nz)) break;
      y = z / nz;
    }
    guess_ = y;
    return y.dot(sym * y);
  }

 private:
  Vector guess_;
};

struct Recorder {
  const GraphTopology& g;
  const SimConfig& cfg;
  Index m;
  Trajectory traj;
  LeadingEigenTracker eig;

  void record(double t, const Vector& x, const Matrix& w) {
    SystemState s;
    s.t = t;
    s.w = w;
    s.v.resize(static_cast<Index>(g.n()), m);
    s.set_stacked(x);
    SampleDiagnostics d;
    d.norm_v_sq = x.squaredNorm();
    if (cfg.diagnostics) {
      Vector y(x.size());
      masked_apply(w, x, g, m, y);
      d.norm_vdot_sq = y.squaredNorm();
      if (m == 1 && static_cast<Index>(g.n()) <= kTriangleDiagnosticMaxN) d.min_triangle_product = min_triangle_product(w, g);
      d.leading_eigenvalue = eig.update(w);
    }
    traj.samples.push_back(std::move(s));
    traj.diagnostics.push_back(d);
  }

  void ensure_last(double t, const Vector& x, const Matrix& w) {
    if (traj.samples.empty() || traj.samples.back().t != t) record(t, x, w);
  }
};

struct Rk4Workspace {
  Vector kx1, kx2, kx3, kx4, xs;
  Matrix kw1, kw2, kw3, kw4, ws;
};

void rk4_step(const Vector& x, const Matrix& w, double h, const GraphTopology& g, Index m, Rk4Workspace& ws,
              Vector& x_out, Matrix& w_out) {
  ws.kx1.resize(x.size());
  ws.kx2.resize(x.size());
  ws.kx3.resize(x.size());
  ws.kx4.resize(x.size());
  ws.kw1.resize(w.rows(), w.cols());
  ws.kw2.resize(w.rows(), w.cols());
  ws.kw3.resize(w.rows(), w.cols());
  ws.kw4.resize(w.rows(), w.cols());

  masked_apply(w, x, g, m, ws.kx1);
  masked_outer(x, g, m, ws.kw1);

  ws.xs = x + 0.5 * h * ws.kx1;
  ws.ws = w + 0.5 * h * ws.kw1;
  masked_apply(ws.ws, ws.xs, g, m, ws.kx2);
  masked_outer(ws.xs, g, m, ws.kw2);

  ws.xs = x + 0.5 * h * ws.kx2;
  ws.ws = w + 0.5 * h * ws.kw2;
  masked_apply(ws.ws, ws.xs, g, m, ws.kx3);
  masked_outer(ws.xs, g, m, ws.kw3);

  ws.xs = x + h * ws.kx3;
  ws.ws = w + h * ws.kw3;
  masked_apply(ws.ws, ws.xs, g, m, ws.kx4);
  masked_outer(ws.xs, g, m, ws.kw4);

  x_out = x + (h / 6.0) * (ws.kx1 + 2.0 * ws.kx2 + 2.0 * ws.kx3 + ws.kx4);
  w_out = w + (h / 6.0) * (ws.kw1 + 2.0 * ws.kw2 + 2.0 * ws.kw3 + ws.kw4);
}

double log_growth(double before, double after) { return std::abs(std::log1p(after) - std::log1p(before)); }

}  // namespace

// ---------------------------------------------------------------------------

SystemState::SystemState(double t0, Matrix opinions, Matrix ties)
    : t(t0), v(std::move(opinions)), w(std::move(ties)) {
  const Index nm = v.rows() * v.cols();
  if (w.rows() != nm || w.cols() != nm) {
    throw DimensionMismatch("SystemState: tie matrix must be " + std::to_string(nm) + "x" + std::to_string(nm) +
                            ", got " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()));
  }
}

SystemState SystemState::scalar(const Vector& v, const Matrix& w, double t0) {
  return SystemState(t0, Matrix(v), w);
}

Vector SystemState::stacked() const {
  Vector x(v.size());
  const Index mm = m();
  for (Index i = 0; i < v.rows(); ++i)
    for (Index a = 0; a < mm; ++a) x(i * mm + a) = v(i, a);
  return x;
}

void SystemState::set_stacked(const Vector& x) {
  const Index mm = m();
  for (Index i = 0; i < v.rows(); ++i)
    for (Index a = 0; a < mm; ++a) v(i, a) = x(i * mm + a);
}

bool SystemState::finite() const { return v.allFinite() && w.allFinite(); }

double SystemState::max_abs_entry() const {
  double out = 0.0;
  if (v.size() > 0) out = v.cwiseAbs().maxCoeff();
  if (w.size() > 0) out = std::max(out, w.cwiseAbs().maxCoeff());
  return out;
}

std::string_view to_string(Mode m) noexcept { return m == Mode::discrete ? "discrete" : "continuous"; }

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::blowup:
      return "blowup";
    case StopReason::max_steps:
      return "max_steps";
    case StopReason::opinion_collapse:
      return "opinion_collapse";
    case StopReason::time_limit:
      return "time_limit";
  }
  return "unknown";
}

void SimConfig::validate() const {
  if (!(a > 0.0) || !(b > 0.0)) throw PreconditionFailed("SimConfig: gains a and b must be positive");
  if (!(dt > 0.0)) throw PreconditionFailed("SimConfig: dt must be positive");
  if (!(blowup_threshold > 1.0)) throw PreconditionFailed("SimConfig: blowup_threshold must exceed 1");
  if (sample_every == 0) throw PreconditionFailed("SimConfig: sample_every must be at least 1");
  if (!(tol > 0.0)) throw PreconditionFailed("SimConfig: tol must be positive");
}

StepUnderflow::StepUnderflow(Trajectory partial)
    : Error("step size underflow near t = " + std::to_string(partial.stop_time)), partial_(std::move(partial)) {}

StateDerivative coupled_rhs(const SystemState& s, const GraphTopology& g) {
  check_shapes(s, g);
  const Vector x = s.stacked();
  Vector y(x.size());
  masked_apply(s.w, x, g, s.m(), y);
  StateDerivative d;
  d.dw.resize(s.w.rows(), s.w.cols());
  masked_outer(x, g, s.m(), d.dw);
  d.dv.resize(s.n(), s.m());
  for (Index i = 0; i < s.n(); ++i)
    for (Index a = 0; a < s.m(); ++a) d.dv(i, a) = y(i * s.m() + a);
  return d;
}

SystemState discrete_step(const SystemState& s, const GraphTopology& g, double a, double b) {
  check_shapes(s, g);
  const Vector x = s.stacked();
  Vector y(x.size());
  masked_apply(s.w, x, g, s.m(), y);
  Matrix dw(s.w.rows(), s.w.cols());
  masked_outer(x, g, s.m(), dw);
  SystemState out = s;
  out.t = s.t + 1.0;
  out.set_stacked(x + a * y);
  out.w += b * dw;
  return out;
}

Trajectory integrate(const SystemState& s0, const GraphTopology& g, const SimConfig& cfg) {
  cfg.validate();
  if (cfg.mode != Mode::continuous) throw PreconditionFailed("integrate: cfg.mode must be continuous");
  check_shapes(s0, g);

  const Index m = s0.m();
  Recorder rec{g, cfg, m, {}, {}};
  Vector x = s0.stacked();
  Matrix w = s0.w;
  double t = s0.t;
  const double dt_min = std::ldexp(cfg.dt, -kStepHalvings);
  const bool collapse_armed = x.norm() >= kCollapseFloor;

  rec.record(t, x, w);
  auto finish = [&](StopReason reason, double when) {
    rec.ensure_last(t, x, w);
    rec.traj.stop_reason = reason;
    rec.traj.stop_time = when;
    return std::move(rec.traj);
  };

  Rk4Workspace work;
  Vector x_new;
  Matrix w_new;
  double h = cfg.dt;
  double current_norm = growth_norm(x, w);

  for (;;) {
    if (rec.traj.steps >= cfg.max_steps) return finish(StopReason::max_steps, t);
    if (t >= cfg.t_end) return finish(StopReason::time_limit, t);

    const double hh = std::min(h, cfg.t_end - t);
    rk4_step(x, w, hh, g, m, work, x_new, w_new);
    const bool finite = all_finite(x_new, w_new);
    const double next_norm = finite ? growth_norm(x_new, w_new) : std::numeric_limits<double>::infinity();
    const double increment = finite ? log_growth(current_norm, next_norm) : std::numeric_limits<double>::infinity();
    const bool too_fast = !(increment <= cfg.tol);

    if (too_fast && hh > dt_min) {
      h = hh * 0.5;
      continue;
    }
    if (too_fast && ++rec.traj.forced_steps > kForcedStepBudget) {
      rec.ensure_last(t, x, w);
      rec.traj.stop_reason = StopReason::blowup;
      rec.traj.stop_time = t;
      throw StepUnderflow(std::move(rec.traj));
    }
    if (!finite || max_abs_of(x_new, w_new) > cfg.blowup_threshold) {
      return finish(StopReason::blowup, t + hh);
    }

    x.swap(x_new);
    w.swap(w_new);
    t += hh;
    current_norm = next_norm;
    ++rec.traj.steps;
    if (rec.traj.steps % cfg.sample_every == 0) rec.record(t, x, w);

    if (collapse_armed && x.norm() < kCollapseFloor) {
      Vector y(x.size());
      masked_apply(w, x, g, m, y);
      if (y.norm() < kCollapseFloor) return finish(StopReason::opinion_collapse, t);
    }
    if (!too_fast && h < cfg.dt && increment < 0.25 * cfg.tol) h = std::min(cfg.dt, 2.0 * h);
  }
}

Trajectory run_discrete(const SystemState& s0, const GraphTopology& g, const SimConfig& cfg) {
  cfg.validate();
  check_shapes(s0, g);
  const Index m = s0.m();
  Recorder rec{g, cfg, m, {}, {}};
  Vector x = s0.stacked();
  Matrix w = s0.w;
  double t = s0.t;
  const bool collapse_armed = x.norm() >= kCollapseFloor;
  rec.record(t, x, w);

  auto finish = [&](StopReason reason, double when) {
    rec.ensure_last(t, x, w);
    rec.traj.stop_reason = reason;
    rec.traj.stop_time = when;
    return std::move(rec.traj);
  };

  Vector y(x.size());
  Matrix dw(w.rows(), w.cols());
  for (;;) {
    if (rec.traj.steps >= cfg.max_steps) return finish(StopReason::max_steps, t);
    if (t >= cfg.t_end) return finish(StopReason::time_limit, t);

    masked_apply(w, x, g, m, y);
    if (collapse_armed && x.norm() < kCollapseFloor && y.norm() < kCollapseFloor) {
      return finish(StopReason::opinion_collapse, t);
    }
    masked_outer(x, g, m, dw);
    Vector x_new = x + cfg.a * y;
    Matrix w_new = w + cfg.b * dw;
    if (!all_finite(x_new, w_new) || max_abs_of(x_new, w_new) > cfg.blowup_threshold) {
      return finish(StopReason::blowup, t + 1.0);
    }
    x.swap(x_new);
    w.swap(w_new);
    t += 1.0;
    ++rec.traj.steps;
    if (rec.traj.steps % cfg.sample_every == 0) rec.record(t, x, w);
  }
}

Trajectory simulate(const SystemState& s0, const GraphTopology& g, const SimConfig& cfg) {
  return cfg.mode == Mode::continuous ? integrate(s0, g, cfg) : run_discrete(s0, g, cfg);
}

Trajectory opinion_ode_integrate(const Vector& v0, const Vector& v0dot, const SymmetricMatrix& c, double dt,
                                 double t_end, double threshold, std::size_t sample_every) {
  if (v0.size() != v0dot.size() || v0.size() != c.size()) {
    throw DimensionMismatch("opinion_ode_integrate: v0, v0dot and c must share dimension");
  }
  if (!(dt > 0.0)) throw PreconditionFailed("opinion_ode_integrate: dt must be positive");
  if (sample_every == 0) throw PreconditionFailed("opinion_ode_integrate: sample_every must be at least 1");

  const Matrix& cm = c.matrix();
  auto accel = [&](const Vector& v) -> Vector { return 2.0 * v.squaredNorm() * v - cm * v; };

  Trajectory traj;
  Vector v = v0;
  Vector p = v0dot;
  double t = 0.0;
  auto record = [&]() {
    SystemState s;
    s.t = t;
    s.v = v;
    traj.samples.push_back(std::move(s));
    traj.velocities.push_back(p);
    traj.diagnostics.push_back({v.squaredNorm(), p.squaredNorm(), std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN()});
  };
  auto finish = [&](StopReason reason, double when) {
    if (traj.samples.back().t != t) record();
    traj.stop_reason = reason;
    traj.stop_time = when;
    return std::move(traj);
  };
  auto norm = [](const Vector& a, const Vector& b) { return a.squaredNorm() + b.squaredNorm(); };
  record();

  const double dt_min = std::ldexp(dt, -kStepHalvings);
  const bool collapse_armed = v.norm() >= kCollapseFloor;
  double h = dt;
  double current = norm(v, p);
  constexpr double kGrowthBound = 0.1;

  for (;;) {
    if (t >= t_end) return finish(StopReason::time_limit, t);
    const double hh = std::min(h, t_end - t);

    const Vector k1v = p;
    const Vector k1p = accel(v);
    const Vector k2v = p + 0.5 * hh * k1p;
    const Vector k2p = accel(v + 0.5 * hh * k1v);
    const Vector k3v = p + 0.5 * hh * k2p;
    const Vector k3p = accel(v + 0.5 * hh * k2v);
    const Vector k4v = p + hh * k3p;
    const Vector k4p = accel(v + hh * k3v);
    Vector v_new = v + (hh / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    Vector p_new = p + (hh / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);

    const bool finite = v_new.allFinite() && p_new.allFinite();
    const double next = finite ? norm(v_new, p_new) : std::numeric_limits<double>::infinity();
    const double increment = finite ? log_growth(current, next) : std::numeric_limits<double>::infinity();
    const bool too_fast = !(increment <= kGrowthBound);
    if (too_fast && hh > dt_min) {
      h = hh * 0.5;
      continue;
    }
    if (too_fast && ++traj.forced_steps > kForcedStepBudget) {
      if (traj.samples.back().t != t) record();
      traj.stop_reason = StopReason::blowup;
      traj.stop_time = t;
      throw StepUnderflow(std::move(traj));
    }
    double peak = 0.0;
    if (finite) peak = std::max(v_new.cwiseAbs().maxCoeff(), p_new.cwiseAbs().maxCoeff());
    if (!finite || peak > threshold) return finish(StopReason::blowup, t + hh);

    v.swap(v_new);
    p.swap(p_new);
    t += hh;
    current = next;
    ++traj.steps;
    if (traj.steps % sample_every == 0) record();
    if (collapse_armed && v.norm() < kCollapseFloor && p.norm() < kCollapseFloor) {
      return finish(StopReason::opinion_collapse, t);
    }
    if (!too_fast && h < dt && increment < 0.25 * kGrowthBound) h = std::min(dt, 2.0 * h);
  }
}

double dissonance(const SystemState& s, const GraphTopology& g) {
  check_shapes(s, g);
  if (g.self_loops()) throw SelfLoopPresent("dissonance: graph has self-loops");
  const Index m = s.m();
  const Vector x = s.stacked();
  double total = 0.0;
  for (const auto& [ii, jj] : g.edges()) {
    const auto i = static_cast<Index>(ii);
    const auto j = static_cast<Index>(jj);
    total += x.segment(i * m, m).dot(s.w.block(i * m, j * m, m, m) * x.segment(j * m, m));
    total += x.segment(j * m, m).dot(s.w.block(j * m, i * m, m, m) * x.segment(i * m, m));
  }
  return 0.5 * total;
}

double riccati_residual(const SystemState& s, const SymmetricMatrix& c) {
  if (s.m() != 1) throw PreconditionFailed("riccati_residual: scalar opinions required");
  if (s.w.rows() != c.size()) throw DimensionMismatch("riccati_residual: C has the wrong size");
  const Vector v = s.v.col(0);
  return max_abs(v * v.transpose() - s.w * s.w - c.matrix());
}

}  // namespace coevo
