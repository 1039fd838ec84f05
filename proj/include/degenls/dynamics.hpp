/// @file dynamics.hpp
/// @brief Radial time evolution of i u_t + div(|x|^{2a} grad u) + |u|^{p-1} u = 0.
///
/// Crank-Nicolson in the stiffness form
///   (W + i dt/2 K) u+ = (W - i dt/2 K) u + i dt W N(u_mid),  u_mid = (u+ + u)/2,
/// with N(v) = |v|^{p-1} v. This is the implicit midpoint rule, so the
/// discrete mass sum w|u|^2 is conserved up to the fixed-point tolerance.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "degenls/discretization.hpp"
#include "degenls/error.hpp"
#include "degenls/grid.hpp"
#include "degenls/linalg.hpp"
#include "degenls/model.hpp"
#include "degenls/profile.hpp"

namespace degenls {

using cplx = std::complex<double>;

struct EvolutionState {
  std::vector<cplx> u;
  double t = 0.0;
  double dt = 1e-3;
  ModelParams params;
  GridPtr grid;
};

inline EvolutionState make_state(const ModelParams& m, const Profile& u0, double dt) {
  EvolutionState s;
  s.u.assign(u0.values.begin(), u0.values.end());
  s.dt = dt;
  s.params = m;
  s.grid = u0.grid;
  return s;
}

/// Whole-space observables of a complex field.
struct Observables {
  double mass = 0.0;
  double energy = 0.0;
  double variance = 0.0;  ///< V = int |x|^{2-2a} |u|^2
  double gradnorm = 0.0;  ///< int |x|^{2a} |grad u|^2
  double lp1 = 0.0;       ///< int |u|^{p+1}
  double P = 0.0;
};

inline Observables observe(const ModelParams& m, const RadialGrid& g, std::span<const cplx> u) {
  const double area = sphere_area(g.dim());
  Observables o;
  for (int i = 0; i < g.size(); ++i) {
    const double w = g.volume(i), a2 = std::norm(u[static_cast<std::size_t>(i)]);
    o.mass += w * a2;
    o.variance += w * std::pow(g.node(i), 2.0 - 2.0 * m.a) * a2;
    o.lp1 += w * std::pow(a2, 0.5 * (m.p + 1.0));
  }
  o.gradnorm = gradient_energy(g, m.a, u) + boundary_energy(g, m.a, u);
  o.mass *= area;
  o.variance *= area;
  o.lp1 *= area;
  o.gradnorm *= area;
  o.energy = 0.5 * o.gradnorm - o.lp1 / (m.p + 1.0);
  o.P = 0.5 * (1.0 - m.a) * o.gradnorm - virial_alpha(m) / (2.0 * (m.p + 1.0)) * o.lp1;
  return o;
}

struct StepOptions {
  int max_fixed_point = 8;
  double fixed_point_tol = 1e-12;
};

/// Pre-factorized Crank-Nicolson stepper for one (params, grid, dt).
class CrankNicolson {
 public:
  CrankNicolson(const ModelParams& m, const GridPtr& grid, double dt, StepOptions opt = {})
      : m_(m), grid_(grid), dt_(dt), opt_(opt), op_(assemble_operator(grid, m.a, Sector::even())) {
    check_params(m);
    if (!(dt > 0.0)) raise(ErrorKind::InvalidParameter, "time step must be positive");
    const int n = grid->size();
    const auto kd = op_.stiffness_diag();
    const auto ko = op_.stiffness_off();
    const cplx half(0.0, 0.5 * dt);
    std::vector<cplx> diag(static_cast<std::size_t>(n)), off(ko.size());
    for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = grid->volume(i) + half * kd[static_cast<std::size_t>(i)];
    for (std::size_t i = 0; i < off.size(); ++i) off[i] = half * ko[i];
    lu_ = linalg::TridiagonalLU<cplx>(off, diag, off);
  }

  double dt() const noexcept { return dt_; }

  /// Advances u by one step. Throws FixedPointDivergence when the midpoint
  /// iteration does not contract within max_fixed_point sweeps.
  void advance(std::vector<cplx>& u, const std::vector<cplx>* previous = nullptr) const {
    const RadialGrid& g = *grid_;
    const std::size_t n = u.size();
    const cplx half(0.0, 0.5 * dt_);
    const auto ku = op_.stiffness_apply(std::span<const cplx>(u));
    std::vector<cplx> base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = g.volume(static_cast<int>(i)) * u[i] - half * ku[i];

    std::vector<cplx> next(n), rhs(n);
    if (previous) {
      for (std::size_t i = 0; i < n; ++i) next[i] = 2.0 * u[i] - (*previous)[i];
    } else {
      next = u;
    }
    const cplx idt(0.0, dt_);
    bool converged = false;
    for (int it = 0; it < opt_.max_fixed_point; ++it) {
      for (std::size_t i = 0; i < n; ++i) {
        const cplx mid = 0.5 * (next[i] + u[i]);
        rhs[i] = base[i] + idt * g.volume(static_cast<int>(i)) * std::pow(std::abs(mid), m_.p - 1.0) * mid;
      }
      lu_.solve(rhs);
      double change = 0.0, size = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        change = std::max(change, std::abs(rhs[i] - next[i]));
        size = std::max(size, std::abs(rhs[i]));
      }
      next.swap(rhs);
      if (!std::isfinite(change)) break;
      if (change <= opt_.fixed_point_tol * std::max(size, 1e-300)) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      raise(ErrorKind::FixedPointDivergence, "Crank-Nicolson fixed point did not contract");
    }
    u.swap(next);
  }

 private:
  ModelParams m_;
  GridPtr grid_;
  double dt_;
  StepOptions opt_;
  SectorOperator op_;
  linalg::TridiagonalLU<cplx> lu_;
};

/// One step on a state (builds a stepper; use CrankNicolson directly in loops).
inline EvolutionState step(EvolutionState state, const StepOptions& opt = {}) {
  const CrankNicolson cn(state.params, state.grid, state.dt, opt);
  cn.advance(state.u);
  state.t += state.dt;
  return state;
}

struct TraceOptions {
  double blowup_growth = 1e3;   ///< gradnorm / gradnorm(0) declaring blow-up
  double reflection_mass = 1e-8;
  double reflection_radius = 0.9;
  int stride = 1;               ///< record every stride-th step
  StepOptions step{};
};

struct VirialTrace {
  std::vector<double> times;
  std::vector<double> V;
  std::vector<double> P_values;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> gradnorm;
  std::vector<double> lp1_norm;
  bool blowup_flag = false;
  double blowup_time = 0.0;
  /// "", "gradient-growth", "fixed-point-divergence" or "reflection-guard".
  std::string halt_reason;
  EvolutionState final_state;

  std::size_t size() const noexcept { return times.size(); }

  /// Centered second difference of V at recorded sample k (1 <= k < size-1).
  double v_second_difference(std::size_t k) const {
    const double h = times[k + 1] - times[k];
    return (V[k + 1] - 2.0 * V[k] + V[k - 1]) / (h * h);
  }
};

/// Evolves u0 to time T and records the conserved quantities and the virial
/// pair (V, P) at every step.
inline VirialTrace evolve_and_trace(const ModelParams& m, const Profile& u0, double T, double dt,
                                    const TraceOptions& opt = {}) {
  check_params(m);
  if (!(T > 0.0)) raise(ErrorKind::InvalidParameter, "final time must be positive");
  const RadialGrid& g = *u0.grid;
  const CrankNicolson cn(m, u0.grid, dt, opt.step);
  EvolutionState st = make_state(m, u0, dt);
  std::vector<cplx> previous;

  VirialTrace tr;
  auto record = [&](const Observables& o) {
    tr.times.push_back(st.t);
    tr.V.push_back(o.variance);
    tr.P_values.push_back(o.P);
    tr.mass.push_back(o.mass);
    tr.energy.push_back(o.energy);
    tr.gradnorm.push_back(o.gradnorm);
    tr.lp1_norm.push_back(o.lp1);
  };
  const Observables first = observe(m, g, st.u);
  record(first);
  const double g0 = first.gradnorm;
  const double guard_radius = opt.reflection_radius * g.r_max();
  const auto steps = static_cast<long>(std::llround(T / dt));

  for (long k = 1; k <= steps; ++k) {
    std::vector<cplx> before = st.u;
    try {
      cn.advance(st.u, previous.empty() ? nullptr : &previous);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FixedPointDivergence) throw;
      tr.blowup_flag = true;
      tr.blowup_time = st.t;
      tr.halt_reason = "fixed-point-divergence";
      break;
    }
    previous.swap(before);
    st.t = static_cast<double>(k) * dt;

    double tail = 0.0;
    for (int i = g.size() - 1; i >= 0 && g.node(i) > guard_radius; --i) {
      tail += g.volume(i) * std::norm(st.u[static_cast<std::size_t>(i)]);
    }
    const bool due = k % opt.stride == 0 || k == steps;
    Observables o;
    if (due || opt.blowup_growth > 0.0) o = observe(m, g, st.u);
    if (due) record(o);
    if (o.gradnorm > opt.blowup_growth * g0) {
      if (!due) record(o);
      tr.blowup_flag = true;
      tr.blowup_time = st.t;
      tr.halt_reason = "gradient-growth";
      break;
    }
    if (sphere_area(g.dim()) * tail > opt.reflection_mass * first.mass) {
      if (!due) record(o);
      tr.halt_reason = "reflection-guard";
      break;
    }
  }
  tr.final_state = std::move(st);
  return tr;
}

/// Columns t, V, P, mass, energy, gradnorm, Lp1_norm with 17 significant digits.
inline void write_trace_csv(const VirialTrace& tr, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) raise(ErrorKind::Config, "cannot open " + path + " for writing");
  std::fprintf(f, "t,V,P,mass,energy,gradnorm,Lp1_norm\n");
  for (std::size_t k = 0; k < tr.size(); ++k) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", tr.times[k], tr.V[k],
                 tr.P_values[k], tr.mass[k], tr.energy[k], tr.gradnorm[k], tr.lp1_norm[k]);
  }
  std::fclose(f);
}

/// Columns rho, re_u, im_u, abs_u.
inline void write_snapshot_csv(const EvolutionState& st, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) raise(ErrorKind::Config, "cannot open " + path + " for writing");
  std::fprintf(f, "rho,re_u,im_u,abs_u\n");
  for (int i = 0; i < st.grid->size(); ++i) {
    const cplx v = st.u[static_cast<std::size_t>(i)];
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", st.grid->node(i), v.real(), v.imag(), std::abs(v));
  }
  std::fclose(f);
}

}  // namespace degenls
