// degenls command-line driver: groundstate, spectrum, evolve, sweep.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "degenls/degenls.hpp"

namespace fs = std::filesystem;
using namespace degenls;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParams = 2;
constexpr int kExitUsage = 64;
constexpr int kExitNumeric = 70;

struct Options {
  std::string config;
  std::string out;
  int threads = 0;
  bool verbose = false;
};

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ExistenceWindow:
    case ErrorKind::InvalidParameter:
    case ErrorKind::BracketInvalid:
      return kExitParams;
    case ErrorKind::Config:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

/// Error JSON goes to stdout (one line) and, when possible, to OUT/error.json.
int fail(const json& err, int code, const std::string& out_dir) {
  std::cout << err.dump() << std::endl;
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!ec) {
      try {
        write_json(err, (fs::path(out_dir) / "error.json").string());
      } catch (const Error&) {
      }
    }
  }
  return code;
}

WaveOptions wave_options(const RunConfig& cfg) {
  WaveOptions wo;
  wo.minimizer.tol = cfg.solver.tol;
  wo.minimizer.max_iter = cfg.solver.max_iter;
  wo.minimizer.tau = cfg.solver.tau;
  wo.minimizer.tau_max = std::max(wo.minimizer.tau_max, cfg.solver.tau);
  return wo;
}

void log(const Options& o, const std::string& msg) {
  if (o.verbose) std::cerr << "[degenls] " << msg << '\n';
}

int run_groundstate(const RunConfig& cfg, const Options& o, const fs::path& out) {
  const ModelParams& m = cfg.params;
  require_window(m);
  const GridPtr grid = grid_for(m, cfg.grid);
  log(o, "grid: N=" + std::to_string(grid->size()) + " R_max=" + std::to_string(grid->r_max()));

  const WaveOptions wo = wave_options(cfg);
  const MinimizerReport rep = minimize_weinstein(m, grid, wo.minimizer);
  write_json(to_json(rep), (out / "minimizer.json").string());
  log(o, "minimizer: " + std::to_string(rep.iterations) + " iterations");

  const Profile wave = solve_wave(m, grid, wo);
  write_profile_csv(wave, (out / "profile.csv").string());

  ShootingOptions sh;
  sh.tol = cfg.solver.shoot_tol;
  const ShootingResult shot = shoot_profile(m, grid, std::nullopt, sh);
  write_profile_csv(shot.profile, (out / "profile_shooting.csv").string());

  const IdentityReport ids = evaluate_identities(m, shot.profile);
  json idj = to_json(ids);
  idj["profile"] = "shooting";
  idj["discrete"] = to_json(evaluate_identities(m, wave));
  const ReconcileReport rc = reconcile(wave, shot.profile);
  idj["reconcile"] = {{"max_abs", rc.max_abs}, {"max_rel", rc.max_rel},
                      {"weighted_rel", rc.weighted_rel}, {"disagree", rc.disagree}};
  write_json(idj, (out / "identities.json").string());

  json asym;
  try {
    asym["decay"] = to_json(fit_decay(shot.profile, m));
  } catch (const Error& e) {
    asym["decay"] = error_json(e);
  }
  try {
    asym["origin"] = to_json(origin_asymptotics(shot.profile, m));
  } catch (const Error& e) {
    asym["origin"] = error_json(e);
  }
  write_json(asym, (out / "asymptotics.json").string());

  const bool gate = ids.pohozaev_1 < cfg.solver.pohozaev_gate && ids.pohozaev_2 < cfg.solver.pohozaev_gate;
  if (!gate) {
    return fail(error_json(ErrorKind::NonConvergence, "Pohozaev residuals above the configured gate"),
                kExitNumeric, out.string());
  }
  return kExitOk;
}

int run_spectrum(const RunConfig& cfg, const Options& o, const fs::path& out) {
  const ModelParams& m = cfg.params;
  require_window(m);
  const GridPtr grid = grid_for(m, cfg.grid);
  const Profile wave = solve_wave(m, grid, wave_options(cfg));
  SpectralOptions so;
  so.ell_max = cfg.solver.ell_max;
  const SpectralReport rep = slope_and_classify(m, wave, so);
  json j = to_json(rep);
  j["params"] = to_json(m);
  j["verdict_threshold"] = to_string(classify_by_threshold(m).verdict);
  j["p_c"] = critical_power(m);
  write_json(j, (out / "spectrum.json").string());
  log(o, "verdict: " + std::string(to_string(rep.verdict)));
  return kExitOk;
}

int run_evolve(const RunConfig& cfg, const Options& o, const fs::path& out) {
  const ModelParams& m = cfg.params;
  require_window(m);
  const GridPtr grid = grid_for(m, cfg.dynamics.grid);
  const Profile wave = solve_wave(m, grid, wave_options(cfg));
  const Profile u0 = cfg.dynamics.lambda == 1.0 ? wave : l2_scale(wave, cfg.dynamics.lambda);
  TraceOptions to;
  to.stride = std::max(1, cfg.dynamics.stride);
  const VirialTrace tr = evolve_and_trace(m, u0, cfg.dynamics.T, cfg.dynamics.dt, to);
  write_trace_csv(tr, (out / "trace.csv").string());
  write_snapshot_csv(tr.final_state, (out / "snapshot.csv").string());
  const json summary = {{"params", to_json(m)},
                        {"lambda", cfg.dynamics.lambda},
                        {"t_final", tr.final_state.t},
                        {"samples", tr.size()},
                        {"blowup_flag", tr.blowup_flag},
                        {"blowup_time", tr.blowup_time},
                        {"halt_reason", tr.halt_reason}};
  write_json(summary, (out / "evolve.json").string());
  log(o, "reached t=" + std::to_string(tr.final_state.t));
  return kExitOk;
}

int run_sweep_cmd(const RunConfig& cfg, const Options& o, const fs::path& out) {
  const int threads = resolve_threads(o.threads);
  log(o, "sweep on " + std::to_string(threads) + " threads");
  const auto rows = run_sweep(cfg, threads);
  write_sweep_csv(rows, (out / "sweep.csv").string());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degenls: ground states, spectra and dynamics for i u_t + div(|x|^{2a} grad u) + |u|^{p-1} u = 0"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "config file (key = value with [sections])");
  app.add_option("--out", o.out, "output directory (overrides output.dir)");
  app.add_option("--threads", o.threads, "worker threads (fallback: DEGENLS_THREADS)");
  app.add_flag("--verbose", o.verbose, "progress on stderr");
  app.fallthrough();

  auto* gs = app.add_subcommand("groundstate", "wave profile, minimizer and identity reports");
  auto* sp = app.add_subcommand("spectrum", "linearized spectra and stability verdict");
  auto* ev = app.add_subcommand("evolve", "time evolution with virial trace");
  auto* sw = app.add_subcommand("sweep", "(d, a, p) stability sweep to CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (o.config.empty() || !fs::exists(o.config)) {
    std::cerr << app.help();
    return fail(error_json(ErrorKind::Config, o.config.empty() ? "missing --config" : "config file not found: " + o.config),
                kExitUsage, "");
  }

  RunConfig cfg;
  try {
    cfg = load_config(o.config);
  } catch (const Error& e) {
    return fail(error_json(e), kExitUsage, "");
  }
  const fs::path out = o.out.empty() ? fs::path(cfg.out_dir) : fs::path(o.out);

  try {
    fs::create_directories(out);
    if (gs->parsed()) return run_groundstate(cfg, o, out);
    if (sp->parsed()) return run_spectrum(cfg, o, out);
    if (ev->parsed()) return run_evolve(cfg, o, out);
    if (sw->parsed()) return run_sweep_cmd(cfg, o, out);
  } catch (const Error& e) {
    return fail(error_json(e), exit_code_for(e.kind()), out.string());
  } catch (const std::exception& e) {
    return fail(json{{"error", "internal"}, {"message", e.what()}}, kExitNumeric, out.string());
  }
  return kExitUsage;
}
