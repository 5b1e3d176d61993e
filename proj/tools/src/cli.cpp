#include "cli.hpp"

#include "run_config.hpp"

#include <coevo/analysis.hpp>
#include <coevo/balance.hpp>
#include <coevo/invariants.hpp>
#include <coevo/riccati.hpp>
#include <coevo/sweep.hpp>
#include <coevo/trajectory_io.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>

namespace coevo::cli {

namespace {

namespace fs = std::filesystem;

struct ClosedFormOptions {
  std::vector<double> times{0.0, 0.25, 0.5, 1.0};
};

struct PredictOptions {
  std::vector<double> diag_b;
  std::vector<double> diag_c;
};

struct CommunityOptions {
  std::string seeds;
  double fraction = 0.2;
  std::size_t repeats = 1;
  double edge_weight = 0.01;
};

struct SweepOptions {
  std::vector<std::size_t> sizes{16};
  std::size_t samples = 30;
  std::optional<double> norm_sq;
};

struct VerifyOptions {
  std::size_t runs = 1;
  bool perturb = false;
  double threshold = 1e3;
  double t_end = 20.0;
};

nlohmann::json envelope(const RunConfig& cfg, const std::string& command) {
  return {{"version", COEVO_VERSION}, {"command", command}, {"config", to_json(cfg)}};
}

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  os << dump_json(j) << '\n';
}

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(number_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number_json(v(i)));
  return out;
}

double resolved_eps(const RunConfig& cfg, const Matrix& w) { return cfg.eps > 0.0 ? cfg.eps : default_balance_eps(w); }

nlohmann::json simulation_report(const RunConfig& cfg, const Trajectory& traj, const GraphTopology& g) {
  nlohmann::json report = envelope(cfg, "simulate");
  report["stop_reason"] = std::string(to_string(traj.stop_reason));
  report["stop_time"] = number_json(traj.stop_time);
  report["steps"] = traj.steps;
  report["forced_steps"] = traj.forced_steps;
  const SystemState& last = traj.final_state();
  const double eps = resolved_eps(cfg, last.w);
  report["eps"] = number_json(eps);
  report["final_v"] = vector_json(last.stacked());
  report["outcome"] = to_json(classify(traj, g, eps));
  const bool symmetric = max_abs(last.w - last.w.transpose()) <= 1e-12 * (1.0 + max_abs(last.w));
  if (symmetric && last.w.allFinite()) report["partition"] = to_json(partition(SymmetricMatrix(last.w)));
  if (traj.samples.size() >= 2) report["sign_stability_latest"] = number_json(sign_stability(traj, eps).latest);
  return report;
}

void write_trajectory(const fs::path& dir, const RunConfig& cfg, const Trajectory& traj, const GraphTopology& g) {
  {
    std::ofstream csv(dir / "trajectory.csv");
    write_trajectory_csv(csv, traj, g);
  }
  write_json(dir / "trajectory.json", trajectory_to_json(traj, g, envelope(cfg, "simulate")));
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const ResolvedRun run = resolve(cfg);
  const fs::path dir = output_dir(cfg);
  Trajectory traj;
  try {
    traj = simulate(run.initial, run.graph, cfg.sim());
  } catch (const StepUnderflow& e) {
    write_trajectory(dir, cfg, e.trajectory(), run.graph);
    nlohmann::json report = envelope(cfg, "simulate");
    report["error"] = e.what();
    report["blowup_estimate"] = number_json(e.time());
    write_json(dir / "report.json", report);
    throw;
  }
  write_trajectory(dir, cfg, traj, run.graph);
  const nlohmann::json report = simulation_report(cfg, traj, run.graph);
  write_json(dir / "report.json", report);
  out << "stop=" << to_string(traj.stop_reason) << " t=" << format_double(traj.stop_time)
      << " outcome=" << report["outcome"]["class"].get<std::string>() << '\n';
  return kOk;
}

int cmd_closed_form(const RunConfig& cfg, const ClosedFormOptions& opt, std::ostream& out) {
  const ResolvedRun run = resolve(cfg);
  const Matrix& b = run.initial.w;
  if (max_abs(b - b.transpose()) > 1e-12 * (1.0 + max_abs(b))) {
    throw PreconditionFailed("closed-form needs a symmetric W(0)");
  }
  const SymmetricMatrix bs(b);
  const Vector v0 = run.initial.v.col(0);
  const SymmetricMatrix c = model_c(v0, bs).c;
  const CSpectrum cs = c_spectrum(c);
  std::optional<SimultaneousDiagonalization> shared;
  const double defect = commute_defect(bs, c);
  if (defect <= default_commute_tolerance(bs, c)) shared = simultaneous_diagonalize(bs, c, default_commute_tolerance(bs, c));

  nlohmann::json doc = envelope(cfg, "closed-form");
  doc["c"] = matrix_json(c.matrix());
  doc["commute_defect"] = number_json(defect);
  doc["commuting"] = shared.has_value();
  nlohmann::json rows = nlohmann::json::array();
  int code = kOk;
  double worst = 0.0;
  for (const double t : opt.times) {
    nlohmann::json row = {{"t", number_json(t)}};
    try {
      const Matrix sym = symmetric_closed_form(bs, cs, t);
      row["symmetric"] = matrix_json(sym);
      try {
        const SeriesSolution ser = series_solve(b, c.matrix(), t);
        row["series"] = matrix_json(ser.w);
        row["series_terms"] = ser.terms_used;
        row["series_bound"] = number_json(ser.truncation_error_bound);
        row["deviation_series_symmetric"] = number_json(max_abs(ser.w - sym));
        worst = std::max(worst, max_abs(ser.w - sym));
      } catch (const SeriesRangeExceeded& e) {
        row["series"] = nullptr;
        row["series_note"] = e.what();
      }
      if (shared) {
        const Matrix com = commuting_closed_form(shared->diag_b, shared->diag_c, shared->u, t);
        row["commuting"] = matrix_json(com);
        row["deviation_commuting_symmetric"] = number_json(max_abs(com - sym));
        worst = std::max(worst, max_abs(com - sym));
      }
    } catch (const SingularY& e) {
      row["singular"] = true;
      doc["singular_t"] = number_json(e.time());
      rows.push_back(std::move(row));
      code = kNumericalError;
      break;
    } catch (const ModeSingular& e) {
      row["singular"] = true;
      doc["singular_t"] = number_json(t);
      rows.push_back(std::move(row));
      code = kNumericalError;
      break;
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  doc["max_deviation"] = number_json(worst);
  write_json(output_dir(cfg) / "closed_form.json", doc);
  out << "max_deviation=" << format_double(worst);
  if (doc.contains("singular_t")) out << " singular_t=" << doc["singular_t"].dump();
  out << '\n';
  return code;
}

int cmd_predict(const RunConfig& cfg, const PredictOptions& opt, std::ostream& out) {
  Vector diag_b, diag_c;
  if (!opt.diag_b.empty() || !opt.diag_c.empty()) {
    if (opt.diag_b.size() != opt.diag_c.size()) throw PreconditionFailed("--diag-b and --diag-c need equal lengths");
    diag_b = Eigen::Map<const Vector>(opt.diag_b.data(), static_cast<Index>(opt.diag_b.size()));
    diag_c = Eigen::Map<const Vector>(opt.diag_c.data(), static_cast<Index>(opt.diag_c.size()));
  } else {
    const ResolvedRun run = resolve(cfg);
    const Matrix& b = run.initial.w;
    if (max_abs(b - b.transpose()) > 1e-12 * (1.0 + max_abs(b))) {
      throw PreconditionFailed("predict needs a symmetric W(0); use simulate instead");
    }
    const SymmetricMatrix bs(b);
    const SymmetricMatrix c = model_c(run.initial.v.col(0), bs).c;
    const SimultaneousDiagonalization sd = simultaneous_diagonalize(bs, c, default_commute_tolerance(bs, c));
    diag_b = sd.diag_b;
    diag_c = sd.diag_c;
  }
  const BlowupPrediction p = predict_blowup(diag_b, diag_c);
  nlohmann::json doc = envelope(cfg, "predict");
  doc["blows_up"] = p.blows_up;
  doc["t_star"] = number_json(p.t_star);
  doc["case"] = std::string(to_string(p.kind));
  doc["mode_index"] = p.mode_index;
  doc["finite_limit"] = number_json(p.finite_limit);
  nlohmann::json modes = nlohmann::json::array();
  for (std::size_t k = 0; k < p.modes.size(); ++k) {
    const ModePrediction& m = p.modes[k];
    modes.push_back({{"b", number_json(diag_b(static_cast<Index>(k)))},
                     {"c", number_json(diag_c(static_cast<Index>(k)))},
                     {"case", std::string(to_string(m.kind))},
                     {"blows_up", m.blows_up},
                     {"t_star", number_json(m.t_star)},
                     {"finite_limit", number_json(m.finite_limit)}});
  }
  doc["modes"] = std::move(modes);
  write_json(output_dir(cfg) / "prediction.json", doc);
  out << "blows_up=" << (p.blows_up ? "true" : "false") << " t_star=" << format_double(p.t_star)
      << " case=" << to_string(p.kind) << '\n';
  return kOk;
}

std::map<std::string, double> parse_seed_map(const std::string& text) {
  std::map<std::string, double> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0) throw PreconditionFailed("--seeds entries look like node:value");
    try {
      seeds[item.substr(0, colon)] = std::stod(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw PreconditionFailed("--seeds: bad value in '" + item + "'");
    }
  }
  return seeds;
}

int cmd_communities(RunConfig cfg, const CommunityOptions& opt, std::ostream& out) {
  if (cfg.graph_file.empty()) throw PreconditionFailed("communities needs --graph-file");
  cfg.graph = "file";
  const ResolvedRun run = resolve(cfg);
  const LabeledGraph& g = *run.labeled;
  std::optional<std::map<std::string, double>> explicit_seeds;
  if (!opt.seeds.empty()) explicit_seeds = parse_seed_map(opt.seeds);
  if (opt.repeats == 0) throw PreconditionFailed("--repeats must be positive");

  CommunityConfig cc;
  cc.edge_weight = opt.edge_weight;
  cc.a = cfg.a;
  cc.b = cfg.b;
  cc.threshold = cfg.threshold;
  cc.max_steps = cfg.max_steps;

  std::vector<SeedAssignment> seeds(opt.repeats);
  std::vector<CommunityRun> runs(opt.repeats);
  parallel_for(opt.repeats, cfg.workers, [&](std::size_t r) {
    seeds[r] = seed_opinions(g, opt.fraction, cfg.seed + r, explicit_seeds);
    runs[r] = run_communities(g, seeds[r].v0, cc);
  });

  nlohmann::json doc = envelope(cfg, "communities");
  doc["nodes"] = g.names.size();
  doc["edges"] = g.topology.edge_count();
  doc["directed_input"] = g.directed_input;
  doc["id_mapping"] = id_mapping_json(g);
  nlohmann::json list = nlohmann::json::array();
  double acc_sum = 0.0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const CommunityRun& cr = runs[r];
    nlohmann::json item = {{"rng_seed", seeds[r].rng_seed},
                           {"seeded", seeds[r].seeded.size()},
                           {"stop_reason", std::string(to_string(cr.stop_reason))},
                           {"iterations", cr.iterations},
                           {"component_count", cr.components.size()}};
    if (cr.score) {
      item["accuracy"] = to_json(*cr.score);
      acc_sum += cr.score->accuracy;
    }
    if (runs.size() == 1) {
      nlohmann::json comps = nlohmann::json::array();
      for (const auto& comp : cr.components) {
        nlohmann::json names = nlohmann::json::array();
        for (const std::size_t i : comp) names.push_back(g.names[i]);
        comps.push_back(std::move(names));
      }
      item["components"] = std::move(comps);
      nlohmann::json signs = nlohmann::json::object();
      for (std::size_t i = 0; i < g.names.size(); ++i) {
        const double v = cr.final_v(static_cast<Index>(i));
        signs[g.names[i]] = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
      }
      item["opinion_signs"] = std::move(signs);
    }
    list.push_back(std::move(item));
  }
  doc["runs"] = std::move(list);
  if (g.has_labels()) doc["mean_accuracy"] = acc_sum / static_cast<double>(runs.size());
  write_json(output_dir(cfg) / "communities.json", doc);
  out << "runs=" << runs.size();
  if (g.has_labels()) out << " mean_accuracy=" << format_double(acc_sum / static_cast<double>(runs.size()));
  out << '\n';
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, const SweepOptions& opt, std::ostream& out) {
  SweepFamily fam;
  fam.sizes = opt.sizes;
  fam.samples_per_size = opt.samples;
  fam.base_seed = cfg.seed;
  fam.norm_sq = opt.norm_sq;
  const std::string kind = cfg.w0.substr(0, cfg.w0.find(':'));
  if (kind == "identity") {
    fam.w0 = InitialTies::identity;
  } else if (kind == "zero") {
    fam.w0 = InitialTies::zero;
  } else if (kind == "rank_one") {
    fam.w0 = InitialTies::rank_one;
  } else if (kind == "scaled") {
    fam.w0 = InitialTies::scaled_identity;
    fam.w0_scale = std::stod(cfg.w0.substr(cfg.w0.find(':') + 1));
  } else {
    throw PreconditionFailed("sweep supports --w0 identity, zero, rank_one or scaled:C");
  }
  if (cfg.v0 == "zeros") {
    fam.v_low = fam.v_high = 0.0;
  } else if (cfg.v0.rfind("random", 0) == 0) {
    const auto parts = cfg.v0.size() > 7 ? cfg.v0.substr(7) : std::string();
    if (!parts.empty()) {
      const auto colon = parts.find(':');
      if (colon == std::string::npos) {
        fam.v_high = std::stod(parts);
        fam.v_low = -fam.v_high;
      } else {
        fam.v_low = std::stod(parts.substr(0, colon));
        fam.v_high = std::stod(parts.substr(colon + 1));
      }
    }
  } else {
    throw PreconditionFailed("sweep supports --v0 random[:R|:LO:HI] or zeros");
  }
  SimConfig sim = cfg.sim();
  const std::vector<SweepRow> rows = convergence_sweep(fam, sim, cfg.workers);
  const fs::path dir = output_dir(cfg);
  {
    std::ofstream csv(dir / "sweep.csv");
    write_sweep_csv(csv, rows);
  }
  std::vector<double> eig, iters;
  for (const SweepRow& r : rows) {
    if (!r.failed && r.stop_reason == StopReason::blowup) {
      eig.push_back(r.pos_eig);
      iters.push_back(static_cast<double>(r.iterations));
    }
  }
  nlohmann::json doc = envelope(cfg, "sweep");
  doc["rows"] = rows.size();
  doc["blown_up_rows"] = eig.size();
  doc["spearman_pos_eig_iterations"] = eig.size() >= 2 ? number_json(spearman(eig, iters)) : nlohmann::json(nullptr);
  write_json(dir / "sweep.json", doc);
  out << "rows=" << rows.size() << " spearman=" << doc["spearman_pos_eig_iterations"].dump() << '\n';
  return kOk;
}

int cmd_verify(RunConfig cfg, const VerifyOptions& opt, bool w0_given, std::ostream& out) {
  if (!w0_given) cfg.w0 = "random_symmetric";
  cfg.graph = "complete";
  BatteryConfig bc;
  bc.dt = cfg.dt;
  bc.threshold = opt.threshold;
  bc.t_end = std::isfinite(cfg.t_end) ? cfg.t_end : opt.t_end;
  bc.perturb_midstream = opt.perturb;
  if (opt.runs == 0) throw PreconditionFailed("--runs must be positive");

  std::vector<BatteryReport> reports(opt.runs);
  parallel_for(opt.runs, cfg.workers, [&](std::size_t r) {
    RunConfig rc = cfg;
    rc.seed = cfg.seed + r;
    const ResolvedRun run = resolve(rc);
    BatteryConfig local = bc;
    local.seed = rc.seed;
    reports[r] = run_invariant_battery(run.initial.v.col(0), run.initial.w, local);
  });

  nlohmann::json doc = envelope(cfg, "verify");
  nlohmann::json list = nlohmann::json::array();
  std::size_t failed = 0;
  for (std::size_t r = 0; r < reports.size(); ++r) {
    nlohmann::json item = to_json(reports[r]);
    item["seed"] = cfg.seed + r;
    list.push_back(std::move(item));
    if (!reports[r].passed()) ++failed;
  }
  doc["runs"] = std::move(list);
  doc["failed_runs"] = failed;
  doc["passed"] = failed == 0;
  write_json(output_dir(cfg) / "verify.json", doc);
  for (const auto& c : reports.front().checks) {
    out << c.name << ": " << (c.skipped ? "skipped" : (c.passed ? "pass" : "FAIL")) << " residual="
        << format_double(c.residual) << " tol=" << format_double(c.tolerance);
    if (!c.note.empty()) out << " (" << c.note << ')';
    out << '\n';
  }
  out << "failed_runs=" << failed << " of " << reports.size() << '\n';
  return failed == 0 ? kOk : kInvariantFailure;
}

void add_common_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--mode", cfg.mode, "continuous | discrete")->capture_default_str();
  app.add_option("--n", cfg.n, "Node count")->capture_default_str();
  app.add_option("--graph", cfg.graph, "complete | er | ws | file")->capture_default_str();
  app.add_option("--p", cfg.p, "Edge or rewiring probability")->capture_default_str();
  app.add_option("--k", cfg.k, "Watts-Strogatz neighbours (even)")->capture_default_str();
  app.add_option("--graph-file", cfg.graph_file, "Edge list path");
  app.add_option("--labels", cfg.labels_file, "node,label CSV");
  app.add_option("--edge-format", cfg.edge_format, "whitespace | csv")->capture_default_str();
  app.add_option("--directed", cfg.directed, "symmetrize | reject")->capture_default_str();
  app.add_option("--self-loops", cfg.self_loops, "Self ties on complete graphs")->capture_default_str();
  app.add_option("--w0", cfg.w0, "Initial ties")->capture_default_str();
  app.add_option("--v0", cfg.v0, "Initial opinions")->capture_default_str();
  app.add_option("--a", cfg.a, "Discrete opinion gain")->capture_default_str();
  app.add_option("--b", cfg.b, "Discrete tie gain")->capture_default_str();
  app.add_option("--dt", cfg.dt, "Initial RK4 step")->capture_default_str();
  app.add_option("--threshold", cfg.threshold, "Blow-up threshold")->capture_default_str();
  app.add_option("--max-steps", cfg.max_steps, "Step cap")->capture_default_str();
  app.add_option("--sample-every", cfg.sample_every, "Record every k-th step")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Per-step log-growth bound")->capture_default_str();
  app.add_option("--t-end", cfg.t_end, "Time horizon");
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads (0: all cores)")->capture_default_str();
  app.add_option("--eps", cfg.eps, "Balance dead zone (0: 1e-9·max|w|)")->capture_default_str();
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const PreconditionFailed*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const RejectedDirected*>(&e) || dynamic_cast<const NoLabels*>(&e) ||
      dynamic_cast<const NotCommuting*>(&e) || dynamic_cast<const InvalidK*>(&e) ||
      dynamic_cast<const DimensionMismatch*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) {
    return kConfigError;
  }
  return kNumericalError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Co-evolving opinions and signed ties: simulation, closed forms and analysis", "coevo"};
  app.set_version_flag("--version", COEVO_VERSION);
  app.set_config("--config", "", "Key = value file; command-line flags take precedence");
  app.require_subcommand(1);
  RunConfig cfg;
  add_common_options(app, cfg);

  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate and classify one run");
  auto* closed_cmd = app.add_subcommand("closed-form", "Series and closed-form W(t) at given times");
  ClosedFormOptions closed_opt;
  closed_cmd->add_option("--times", closed_opt.times, "Comma-separated times")->delimiter(',');
  auto* predict_cmd = app.add_subcommand("predict", "Blow-up prediction for commuting initial data");
  PredictOptions predict_opt;
  predict_cmd->add_option("--diag-b", predict_opt.diag_b, "Eigenvalues of W(0) in the shared basis")->delimiter(',');
  predict_cmd->add_option("--diag-c", predict_opt.diag_c, "Eigenvalues of C in the shared basis")->delimiter(',');
  auto* communities_cmd = app.add_subcommand("communities", "Seeded label propagation on an edge list");
  CommunityOptions comm_opt;
  communities_cmd->add_option("--seeds", comm_opt.seeds, "Explicit seeds, e.g. 0:1,33:-1");
  communities_cmd->add_option("--fraction", comm_opt.fraction, "Fraction of nodes seeded from labels")
      ->capture_default_str();
  communities_cmd->add_option("--repeats", comm_opt.repeats, "Independent seedings (seed, seed+1, ...)")
      ->capture_default_str();
  communities_cmd->add_option("--edge-weight", comm_opt.edge_weight, "Initial weight on every edge")
      ->capture_default_str();
  auto* sweep_cmd = app.add_subcommand("sweep", "Iterations to blow-up against |V(0)|²");
  SweepOptions sweep_opt;
  sweep_cmd->add_option("--sizes", sweep_opt.sizes, "Comma-separated node counts")->delimiter(',');
  sweep_cmd->add_option("--samples", sweep_opt.samples, "Rows per size")->capture_default_str();
  sweep_cmd->add_option("--norm-sq", sweep_opt.norm_sq, "Rescale every V(0) to this |V(0)|²");
  auto* verify_cmd = app.add_subcommand("verify", "Invariant battery");
  VerifyOptions verify_opt;
  verify_cmd->add_option("--runs", verify_opt.runs, "Seeded runs (seed, seed+1, ...)")->capture_default_str();
  verify_cmd->add_flag("--perturb", verify_opt.perturb, "Nudge W halfway (negative control)");
  verify_cmd->add_option("--check-threshold", verify_opt.threshold, "Blow-up threshold for the battery")
      ->capture_default_str();
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, out);
    if (closed_cmd->parsed()) return cmd_closed_form(cfg, closed_opt, out);
    if (predict_cmd->parsed()) return cmd_predict(cfg, predict_opt, out);
    if (communities_cmd->parsed()) return cmd_communities(cfg, comm_opt, out);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, sweep_opt, out);
    if (verify_cmd->parsed()) return cmd_verify(cfg, verify_opt, app.count("--w0") > 0, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kConfigError;
}

}  // namespace coevo::cli
