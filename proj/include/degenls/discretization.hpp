/// @file discretization.hpp
/// @brief Conservative discretization of -div(|x|^{2a} grad) on one angular
/// sector of a radial grid.
///
/// The operator is stored in stiffness form K (symmetric tridiagonal) with
/// A = W^{-1} K, W = diag(w_i). A is therefore self-adjoint in the weighted
/// inner product <u, v>_w = sum_i w_i u_i v_i. Rows:
///
///   (A u)_i = (1/w_i) [ s_{i-1/2}(u_i - u_{i-1}) + s_{i+1/2}(u_i - u_{i+1}) ]
///             + l(l+d-2) rho_i^{2a-2} u_i + V_i u_i,
///
/// with s_{i+1/2} = rho_{i+1/2}^{d-1+2a} / (rho_{i+1} - rho_i). The flux through
/// the origin vanishes (radial and even sectors) or is a Dirichlet closure
/// (odd sector in d = 1). The outer edge carries u(R_max) = 0.

#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "degenls/error.hpp"
#include "degenls/grid.hpp"

namespace degenls {

enum class Parity { Even, Odd };

/// Angular sector. In d >= 2 this is a spherical-harmonic degree l; in d = 1
/// spherical harmonics degenerate to parity.
struct Sector {
  int ell = 0;
  Parity parity = Parity::Even;

  static constexpr Sector radial(int l) { return Sector{l, Parity::Even}; }
  static constexpr Sector even() { return Sector{0, Parity::Even}; }
  static constexpr Sector odd() { return Sector{1, Parity::Odd}; }

  friend bool operator==(const Sector&, const Sector&) = default;
};

/// Sectors of degree <= ell_max valid for dimension d (parity pair for d = 1).
inline std::vector<Sector> sectors_up_to(int d, int ell_max) {
  if (d == 1) return {Sector::even(), Sector::odd()};
  std::vector<Sector> out;
  for (int l = 0; l <= ell_max; ++l) out.push_back(Sector::radial(l));
  return out;
}

/// Number of independent spherical harmonics of degree l in dimension d.
inline int sector_multiplicity(int d, const Sector& s) {
  if (d == 1) return 1;
  if (d == 2) return s.ell == 0 ? 1 : 2;
  // dim H_l(R^d) = C(l+d-1, d-1) - C(l+d-3, d-1)
  auto binom = [](int n, int k) -> long long {
    if (k < 0 || n < k) return 0;
    long long r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
  };
  return static_cast<int>(binom(s.ell + d - 1, d - 1) - binom(s.ell + d - 3, d - 1));
}

inline void check_sector(int d, const Sector& s) {
  if (s.ell < 0) raise(ErrorKind::InvalidSector, "sector degree must be >= 0");
  if (d == 1) {
    const bool ok = (s.parity == Parity::Even && s.ell == 0) ||
                    (s.parity == Parity::Odd && s.ell == 1);
    if (!ok) {
      raise(ErrorKind::InvalidSector,
            "d = 1 has only parity sectors; use Sector::even() or Sector::odd()");
    }
  } else if (s.parity == Parity::Odd) {
    raise(ErrorKind::InvalidSector, "parity sectors exist only for d = 1");
  }
}

class SectorOperator {
 public:
  SectorOperator(GridPtr grid, double a, Sector sector, std::vector<double> stiff_diag,
                 std::vector<double> stiff_off, std::vector<double> potential,
                 double outer_flux)
      : grid_(std::move(grid)),
        a_(a),
        sector_(sector),
        kdiag_(std::move(stiff_diag)),
        koff_(std::move(stiff_off)),
        potential_(std::move(potential)),
        outer_flux_(outer_flux) {}

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  double a() const noexcept { return a_; }
  Sector sector() const noexcept { return sector_; }
  int size() const noexcept { return static_cast<int>(kdiag_.size()); }

  /// Stiffness form K = W A.
  std::span<const double> stiffness_diag() const noexcept { return kdiag_; }
  std::span<const double> stiffness_off() const noexcept { return koff_; }
  /// Diagonal potential V_i (empty when absent).
  std::span<const double> potential() const noexcept { return potential_; }
  /// s_{N+1/2}: coefficient of the Dirichlet closure at R_max.
  double outer_flux() const noexcept { return outer_flux_; }

  /// Row-scaled coefficients of A itself: A_{i,i}.
  std::vector<double> diag() const {
    std::vector<double> out(kdiag_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = kdiag_[i] / grid_->volume(static_cast<int>(i));
    return out;
  }
  /// A_{i+1,i}.
  std::vector<double> sub_diag() const {
    std::vector<double> out(koff_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = koff_[i] / grid_->volume(static_cast<int>(i + 1));
    return out;
  }
  /// A_{i,i+1}.
  std::vector<double> super_diag() const {
    std::vector<double> out(koff_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = koff_[i] / grid_->volume(static_cast<int>(i));
    return out;
  }

  /// Symmetric tridiagonal W^{-1/2} K W^{-1/2}, similar to A.
  void symmetric_form(std::vector<double>& diag, std::vector<double>& off) const {
    const auto w = grid_->volumes();
    diag.resize(kdiag_.size());
    off.resize(koff_.size());
    for (std::size_t i = 0; i < kdiag_.size(); ++i) diag[i] = kdiag_[i] / w[i];
    for (std::size_t i = 0; i < koff_.size(); ++i) off[i] = koff_[i] / std::sqrt(w[i] * w[i + 1]);
  }

  /// K u (stiffness action), real or complex.
  template <class T>
  std::vector<T> stiffness_apply(std::span<const T> u) const {
    check_length(u.size());
    const std::size_t n = kdiag_.size();
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      T v = kdiag_[i] * u[i];
      if (i > 0) v += koff_[i - 1] * u[i - 1];
      if (i + 1 < n) v += koff_[i] * u[i + 1];
      out[i] = v;
    }
    return out;
  }

  /// A u.
  template <class T>
  std::vector<T> apply(std::span<const T> u) const {
    auto out = stiffness_apply(u);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= grid_->volume(static_cast<int>(i));
    return out;
  }
  std::vector<double> apply(const std::vector<double>& u) const {
    return apply(std::span<const double>(u));
  }

  /// <A u, u>_w = u^T K u.
  double quadratic_form(std::span<const double> u) const {
    const auto ku = stiffness_apply(u);
    double s = 0.0;
    for (std::size_t i = 0; i < ku.size(); ++i) s += ku[i] * u[i];
    return s;
  }

 private:
  void check_length(std::size_t n) const {
    if (n != kdiag_.size()) raise(ErrorKind::LengthMismatch, "field length does not match operator");
  }

  GridPtr grid_;
  double a_;
  Sector sector_;
  std::vector<double> kdiag_;
  std::vector<double> koff_;
  std::vector<double> potential_;
  double outer_flux_;
};

namespace detail {

/// Interior edge coefficients s_{i+1/2}, i = 0..N-2.
inline std::vector<double> interior_fluxes(const RadialGrid& grid, double a) {
  const int n = grid.size();
  const double power = grid.dim() - 1 + 2.0 * a;
  std::vector<double> s(static_cast<std::size_t>(n - 1));
  for (int i = 0; i + 1 < n; ++i) {
    s[static_cast<std::size_t>(i)] =
        std::pow(grid.edges()[i + 1], power) / (grid.node(i + 1) - grid.node(i));
  }
  return s;
}

inline double outer_flux(const RadialGrid& grid, double a) {
  const int n = grid.size();
  const double power = grid.dim() - 1 + 2.0 * a;
  return std::pow(grid.r_max(), power) / (grid.r_max() - grid.node(n - 1));
}

/// Conductance 1 / int_0^{rho_1} s^{-2a} ds between u(0) = 0 and node 1 in
/// d = 1. Zero for a >= 1/2, where a point carries no capacity.
inline double odd_origin_conductance(const RadialGrid& grid, double a) {
  if (a >= 0.5) return 0.0;
  const double rho1 = grid.node(0);
  return (1.0 - 2.0 * a) / std::pow(rho1, 1.0 - 2.0 * a);
}

}  // namespace detail

/// Builds A_l + V on the given sector. potential may be empty.
inline SectorOperator assemble_operator(const GridPtr& grid, double a, Sector sector,
                                        std::span<const double> potential = {}) {
  const RadialGrid& g = *grid;
  const int n = g.size();
  const int d = g.dim();
  check_sector(d, sector);
  if (!potential.empty() && static_cast<int>(potential.size()) != n) {
    raise(ErrorKind::LengthMismatch, "potential length does not match grid");
  }
  const auto s = detail::interior_fluxes(g, a);
  const double s_out = detail::outer_flux(g, a);

  std::vector<double> kdiag(static_cast<std::size_t>(n), 0.0);
  std::vector<double> koff(static_cast<std::size_t>(n - 1));
  for (int i = 0; i + 1 < n; ++i) {
    const double si = s[static_cast<std::size_t>(i)];
    kdiag[static_cast<std::size_t>(i)] += si;
    kdiag[static_cast<std::size_t>(i + 1)] += si;
    koff[static_cast<std::size_t>(i)] = -si;
  }
  kdiag[static_cast<std::size_t>(n - 1)] += s_out;

  if (d == 1 && sector.parity == Parity::Odd) {
    kdiag[0] += detail::odd_origin_conductance(g, a);
  }
  const double angular = d == 1 ? 0.0 : sector.ell * (sector.ell + d - 2.0);
  for (int i = 0; i < n; ++i) {
    double diag_extra = angular * std::pow(g.node(i), 2.0 * a - 2.0);
    if (!potential.empty()) diag_extra += potential[static_cast<std::size_t>(i)];
    kdiag[static_cast<std::size_t>(i)] += g.volume(i) * diag_extra;
  }
  return SectorOperator(grid, a, sector, std::move(kdiag), std::move(koff),
                        std::vector<double>(potential.begin(), potential.end()), s_out);
}

/// <u, v>_w = sum_i w_i u_i v_i.
inline double weighted_inner(const RadialGrid& grid, std::span<const double> u,
                             std::span<const double> v) {
  if (static_cast<int>(u.size()) != grid.size() || u.size() != v.size()) {
    raise(ErrorKind::LengthMismatch, "weighted_inner: length mismatch");
  }
  double s = 0.0;
  for (int i = 0; i < grid.size(); ++i) s += grid.volume(i) * u[i] * v[i];
  return s;
}

inline double weighted_norm(const RadialGrid& grid, std::span<const double> u) {
  return std::sqrt(weighted_inner(grid, u, u));
}

/// Discrete int |x|^{2a} |grad u|^2 (per unit solid angle) over interior
/// edges: sum s_{i+1/2} |u_{i+1} - u_i|^2.
///
/// <A_0 u, u>_w equals this plus boundary_energy(u); the two coincide for
/// fields vanishing at R_max.
template <class T>
double gradient_energy(const RadialGrid& grid, double a, std::span<const T> u) {
  if (static_cast<int>(u.size()) != grid.size()) {
    raise(ErrorKind::LengthMismatch, "gradient_energy: length mismatch");
  }
  const auto s = detail::interior_fluxes(grid, a);
  double e = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) e += s[i] * std::norm(u[i + 1] - u[i]);
  return e;
}

inline double gradient_energy(const RadialGrid& grid, double a, const std::vector<double>& u) {
  return gradient_energy(grid, a, std::span<const double>(u));
}

/// Contribution s_{N+1/2} |u_N|^2 of the Dirichlet closure at R_max.
template <class T>
double boundary_energy(const RadialGrid& grid, double a, std::span<const T> u) {
  return detail::outer_flux(grid, a) * std::norm(u.back());
}

}  // namespace degenls
