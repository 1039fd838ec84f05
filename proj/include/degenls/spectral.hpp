/// @file spectral.hpp
/// @brief Linearized operators L+ and L- about a wave, Morse indices, the
/// L- spectral gap, the slope <L+^{-1} phi, phi> and the Hamiltonian index.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
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

enum class Linearization { Plus, Minus };

/// -div(|x|^{2a} grad) + omega - c phi^{p-1} on one sector, c = p for L+ and
/// c = 1 for L-.
inline SectorOperator assemble_linearized(const ModelParams& m, const Profile& prof, Sector sector,
                                          Linearization sign) {
  check_params(m);
  const double c = sign == Linearization::Plus ? m.p : 1.0;
  std::vector<double> v(prof.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = m.omega - c * std::pow(std::abs(prof.values[i]), m.p - 1.0);
  }
  return assemble_operator(prof.grid, m.a, sector, v);
}

/// Number of eigenvalues below -tol_zero (Sturm count of the symmetric form).
inline int morse_index(const SectorOperator& op, double tol_zero) {
  std::vector<double> diag, off;
  op.symmetric_form(diag, off);
  return linalg::count_below(diag, off, -tol_zero);
}

/// Eigenvalues inside (-tol_zero, tol_zero).
inline int kernel_dimension(const SectorOperator& op, double tol_zero) {
  std::vector<double> diag, off;
  op.symmetric_form(diag, off);
  return linalg::count_below(diag, off, tol_zero) - linalg::count_below(diag, off, -tol_zero);
}

/// The k smallest eigenpairs, eigenvectors normalized in <.,.>_w.
inline linalg::Eigenpairs eigenpairs(const SectorOperator& op, int k) {
  std::vector<double> diag, off;
  op.symmetric_form(diag, off);
  auto ep = linalg::smallest_eigenpairs(diag, off, k);
  const auto w = op.grid().volumes();
  for (auto& vec : ep.vectors) {
    double sign = 0.0;
    for (std::size_t i = 0; i < vec.size(); ++i) {
      vec[i] /= std::sqrt(w[i]);
      if (sign == 0.0 && std::abs(vec[i]) > 0.0) sign = vec[i] > 0.0 ? 1.0 : -1.0;
    }
    for (auto& x : vec) x *= sign;
  }
  return ep;
}

struct SectorSpectrum {
  Sector sector;
  int multiplicity = 1;
  int n_plus = 0;
  int n_minus = 0;
  int kernel_plus = 0;
  double lowest_plus = 0.0;
  double lowest_minus = 0.0;
};

struct SpectralOptions {
  int ell_max = 3;
  double tol_zero_rel = 1e-8;   ///< tol_zero = tol_zero_rel * omega
  double degenerate_rel = 1e-4; ///< |slope| below degenerate_rel * M / omega
  double singular = 1e-10;      ///< smallest |eigenvalue| of radial L+
};

struct SpectralReport {
  int n_plus = 0;               ///< aggregated over sectors with multiplicity
  int n_plus_radial = 0;        ///< l = 0 (d = 1: even) sector alone
  int n_minus = 0;
  int kernel_plus = 0;
  double lmin_plus = 0.0;
  double lmin_minus = 0.0;
  double minus_cosine = 0.0;    ///< |cos| between the L- ground state and phi
  double gap_minus = 0.0;
  double slope = 0.0;           ///< <L+^{-1} phi, phi>, whole-space
  double slope_analytic = 0.0;
  double slope_residual = 0.0;  ///< ||L+ v - phi||_w / ||phi||_w
  int n0_D = 0;
  int k_ham = 0;
  Verdict verdict = Verdict::Degenerate;
  int k_ham_radial = 0;
  Verdict verdict_radial = Verdict::Degenerate;
  bool monotone_in_ell = true;
  double tol_zero = 0.0;
  std::vector<SectorSpectrum> sectors;
};

namespace detail {

inline Verdict hamiltonian_verdict(int k_ham, bool degenerate) {
  if (degenerate) return Verdict::Degenerate;
  return k_ham == 0 ? Verdict::Stable : Verdict::Unstable;
}

}  // namespace detail

/// Full stability analysis of a converged wave.
inline SpectralReport slope_and_classify(const ModelParams& m, const Profile& prof,
                                         const SpectralOptions& opt = {}) {
  require_window(m);
  const RadialGrid& g = *prof.grid;
  const double area = sphere_area(g.dim());
  SpectralReport rep;
  rep.tol_zero = opt.tol_zero_rel * m.omega;

  double prev_lowest = -std::numeric_limits<double>::infinity();
  for (const Sector& s : sectors_up_to(g.dim(), opt.ell_max)) {
    const auto lp = assemble_linearized(m, prof, s, Linearization::Plus);
    const auto lm = assemble_linearized(m, prof, s, Linearization::Minus);
    SectorSpectrum ss;
    ss.sector = s;
    ss.multiplicity = sector_multiplicity(g.dim(), s);
    ss.n_plus = morse_index(lp, rep.tol_zero);
    ss.n_minus = morse_index(lm, rep.tol_zero);
    ss.kernel_plus = kernel_dimension(lp, rep.tol_zero);
    const bool radial = s.ell == 0;
    const auto ep_plus = eigenpairs(lp, std::max(ss.n_plus + 2, 2));
    const auto ep_minus = eigenpairs(lm, 2);
    int check = 0;
    for (const double v : ep_plus.values) check += v < -rep.tol_zero ? 1 : 0;
    if (check != ss.n_plus) {
      raise(ErrorKind::EigensolverBreakdown, "Sturm count and eigensolver disagree on n(L+)");
    }
    ss.lowest_plus = ep_plus.values.front();
    ss.lowest_minus = ep_minus.values.front();
    if (g.dim() > 1) {
      if (ss.lowest_plus < prev_lowest) rep.monotone_in_ell = false;
      prev_lowest = ss.lowest_plus;
    }

    rep.n_plus += ss.multiplicity * ss.n_plus;
    rep.n_minus += ss.multiplicity * ss.n_minus;
    rep.kernel_plus += ss.multiplicity * ss.kernel_plus;
    if (radial) {
      rep.n_plus_radial = ss.n_plus;
      rep.lmin_plus = ss.lowest_plus;
      rep.lmin_minus = ss.lowest_minus;
      const auto& u = ep_minus.vectors.front();
      const double c = weighted_inner(g, u, prof.values) /
                       (weighted_norm(g, u) * weighted_norm(g, prof.values));
      rep.minus_cosine = std::abs(c);
      rep.gap_minus = ep_minus.values[1];
      double smallest = std::numeric_limits<double>::infinity();
      for (const double v : ep_plus.values) smallest = std::min(smallest, std::abs(v));
      if (smallest < opt.singular) {
        raise(ErrorKind::SingularLPlus, "L+ has an eigenvalue within 1e-10 of zero");
      }
    } else {
      rep.gap_minus = std::min(rep.gap_minus, ss.lowest_minus);
    }
    rep.sectors.push_back(ss);
  }

  // slope: solve K+ v = W phi in the radial sector
  const auto lp = assemble_linearized(m, prof, Sector::even(), Linearization::Plus);
  std::vector<double> rhs(prof.values.size());
  for (int i = 0; i < g.size(); ++i) rhs[static_cast<std::size_t>(i)] = g.volume(i) * prof.values[static_cast<std::size_t>(i)];
  const auto off = lp.stiffness_off();
  const auto v = linalg::solve_tridiagonal(off, lp.stiffness_diag(), off, rhs);
  const auto lv = lp.apply(std::span<const double>(v));
  std::vector<double> diff(lv.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = lv[i] - prof.values[i];
  const double phi_norm = weighted_norm(g, prof.values);
  rep.slope_residual = weighted_norm(g, diff) / phi_norm;
  rep.slope = area * weighted_inner(g, v, prof.values);
  const double mass = area * phi_norm * phi_norm;
  rep.slope_analytic = -0.5 * mass_exponent(m) * mass / m.omega;

  const bool degenerate = std::abs(rep.slope) < opt.degenerate_rel * mass / m.omega;
  rep.n0_D = rep.slope <= 0.0 ? 1 : 0;
  rep.k_ham = std::max(0, rep.n_plus - rep.n0_D);
  rep.k_ham_radial = std::max(0, rep.n_plus_radial - rep.n0_D);
  rep.verdict = detail::hamiltonian_verdict(rep.k_ham, degenerate);
  rep.verdict_radial = detail::hamiltonian_verdict(rep.k_ham_radial, degenerate);
  return rep;
}

}  // namespace degenls
