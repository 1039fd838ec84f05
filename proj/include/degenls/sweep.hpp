/// @file sweep.hpp
/// @brief (d, a, p) stability sweep with a worker pool and deterministic CSV output.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "degenls/config.hpp"
#include "degenls/error.hpp"
#include "degenls/functionals.hpp"
#include "degenls/ground_state.hpp"
#include "degenls/model.hpp"
#include "degenls/spectral.hpp"

namespace degenls {

struct SweepRow {
  ModelParams params;
  double p_c = 0.0;
  double slope = NAN;
  int n_plus = -1;
  double gap_minus = NAN;
  std::string verdict_spectral = "-";
  std::string verdict_threshold = "-";
  double pohozaev_1 = NAN;
  double pohozaev_2 = NAN;
  /// "ok", or the error identifier of the stage that failed
  std::string status = "ok";

  // not written to the CSV, kept for callers that need the detail
  SpectralReport spectral;
  IdentityReport identities;
};

/// Points of the sweep inside the existence window, ordered by (d, a, p).
inline std::vector<ModelParams> sweep_points(const SweepSpec& s, double omega) {
  std::vector<int> ds = s.d;
  std::vector<double> as = s.a, ps = s.p;
  std::sort(ds.begin(), ds.end());
  std::sort(as.begin(), as.end());
  std::sort(ps.begin(), ps.end());
  std::vector<ModelParams> out;
  for (int d : ds) {
    for (double a : as) {
      for (double p : ps) {
        const ModelParams m{d, a, p, omega};
        if (d < 1 || !(a >= 0.0 && a < 1.0) || !(p > 1.0)) continue;
        if (exists_window(m)) out.push_back(m);
      }
    }
  }
  return out;
}

/// Evaluates one sweep point. Failures land in row.status.
inline SweepRow sweep_point(const ModelParams& m, const RunConfig& cfg) {
  SweepRow row;
  row.params = m;
  row.p_c = critical_power(m);
  try {
    row.verdict_threshold = std::string(to_string(classify_by_threshold(m).verdict));
    const GridPtr grid = grid_for(m, cfg.grid);

    WaveOptions wo;
    wo.minimizer.tol = cfg.solver.tol;
    wo.minimizer.max_iter = cfg.solver.max_iter;
    wo.minimizer.tau = cfg.solver.tau;
    wo.minimizer.tau_max = std::max(wo.minimizer.tau_max, cfg.solver.tau);
    const Profile wave = solve_wave(m, grid, wo);

    SpectralOptions so;
    so.ell_max = cfg.solver.ell_max;
    row.spectral = slope_and_classify(m, wave, so);
    row.slope = row.spectral.slope;
    row.n_plus = row.spectral.n_plus;
    row.gap_minus = row.spectral.gap_minus;
    row.verdict_spectral = std::string(to_string(row.spectral.verdict));

    ShootingOptions sh;
    sh.tol = cfg.solver.shoot_tol;
    const auto shot = shoot_profile(m, grid, std::nullopt, sh);
    row.identities = evaluate_identities(m, shot.profile);
    row.pohozaev_1 = row.identities.pohozaev_1;
    row.pohozaev_2 = row.identities.pohozaev_2;
  } catch (const Error& e) {
    row.status = std::string(to_string(e.kind()));
  }
  return row;
}

/// Thread count: explicit > 0, else DEGENLS_THREADS, else hardware concurrency.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DEGENLS_THREADS")) {
    const int k = std::atoi(env);
    if (k > 0) return k;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs every point on a pool of `threads` workers. Row order follows
/// sweep_points, independent of completion order.
inline std::vector<SweepRow> run_sweep(const RunConfig& cfg, int threads = 1) {
  const auto points = sweep_points(cfg.sweep, cfg.params.omega);
  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) rows[i] = sweep_point(points[i], cfg);
  };
  const int k = std::clamp(threads, 1, std::max(1, static_cast<int>(points.size())));
  std::vector<std::jthread> pool;
  for (int t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return rows;
}

inline const char* sweep_csv_header() {
  return "d,a,p,p_c,slope,n_plus,gap_minus,verdict_spectral,verdict_threshold,pohozaev_1,pohozaev_2,status";
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_csv_header();
  out += '\n';
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%s,%s,%.17g,%.17g,%s\n", r.params.d,
                  r.params.a, r.params.p, r.p_c, r.slope, r.n_plus, r.gap_minus, r.verdict_spectral.c_str(),
                  r.verdict_threshold.c_str(), r.pohozaev_1, r.pohozaev_2, r.status.c_str());
    out += buf;
  }
  return out;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) raise(ErrorKind::Config, "cannot open " + path + " for writing");
  const std::string s = sweep_csv(rows);
  std::fwrite(s.data(), 1, s.size(), f);
  std::fclose(f);
}

}  // namespace degenls
