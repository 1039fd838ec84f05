/// @file grid.hpp
/// @brief Graded radial grids and the radial measure rho^{d-1} drho.
///
/// Cells are images of a uniform partition of t in [0,1] under
/// rho(t) = R_max t^gamma. Edges sit at t = k/N, nodes at the cell centres
/// t = (i - 1/2)/N. Volumes are exact cell integrals of rho^{d-1}, so that
/// sum_i w_i = R_max^d / d. All grid-level integrals are per unit solid
/// angle; multiply by sphere_area(d) for whole-space values.

#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "degenls/error.hpp"

namespace degenls {

/// |S^{d-1}|; equals 2 for d = 1 (the two half-lines).
inline double sphere_area(int d) {
  const double half = 0.5 * d;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

class RadialGrid {
 public:
  RadialGrid(int d, double r_max, int n, double gamma)
      : d_(d), r_max_(r_max), gamma_(gamma), nodes_(n), edges_(n + 1), volumes_(n) {
    for (int k = 0; k <= n; ++k) {
      edges_[k] = r_max * std::pow(static_cast<double>(k) / n, gamma);
    }
    edges_[n] = r_max;
    for (int i = 0; i < n; ++i) {
      nodes_[i] = r_max * std::pow((i + 0.5) / n, gamma);
      volumes_[i] = (std::pow(edges_[i + 1], d) - std::pow(edges_[i], d)) / d;
    }
  }

  int dim() const noexcept { return d_; }
  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  double r_max() const noexcept { return r_max_; }
  double gamma() const noexcept { return gamma_; }

  std::span<const double> nodes() const noexcept { return nodes_; }
  /// N + 1 entries; edges()[0] = 0 and edges()[N] = R_max.
  std::span<const double> edges() const noexcept { return edges_; }
  std::span<const double> volumes() const noexcept { return volumes_; }

  double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  double volume(int i) const { return volumes_[static_cast<std::size_t>(i)]; }

  /// d rho / d t at node i.
  double jacobian(int i) const {
    const double t = (i + 0.5) / size();
    return gamma_ * r_max_ * std::pow(t, gamma_ - 1.0);
  }

  /// Same node layout, every length multiplied by factor.
  RadialGrid scaled(double factor) const {
    return RadialGrid(d_, r_max_ * factor, size(), gamma_);
  }

 private:
  int d_;
  double r_max_;
  double gamma_;
  std::vector<double> nodes_;
  std::vector<double> edges_;
  std::vector<double> volumes_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline GridPtr build_grid(int d, double r_max, int n, double gamma) {
  if (d < 1) raise(ErrorKind::InvalidParameter, "grid dimension must be >= 1");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    raise(ErrorKind::InvalidParameter, "R_max must be positive and finite");
  }
  if (n < 16) raise(ErrorKind::InvalidParameter, "grid needs N >= 16 nodes");
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    raise(ErrorKind::InvalidParameter, "grading exponent gamma must be >= 1");
  }
  auto grid = std::make_shared<const RadialGrid>(d, r_max, n, gamma);
  const auto nodes = grid->nodes();
  for (int i = 1; i < n; ++i) {
    if (!(nodes[i] > nodes[i - 1]) || !(grid->volume(i) > 0.0)) {
      raise(ErrorKind::InvalidParameter, "grid is degenerate at the requested resolution");
    }
  }
  return grid;
}

/// sum_i w_i f_i: the finite-volume quadrature matching the discrete operator.
inline double volume_sum(const RadialGrid& grid, std::span<const double> f) {
  if (static_cast<int>(f.size()) != grid.size()) {
    raise(ErrorKind::LengthMismatch, "field length does not match grid");
  }
  double s = 0.0;
  for (int i = 0; i < grid.size(); ++i) s += grid.volume(i) * f[static_cast<std::size_t>(i)];
  return s;
}

namespace detail {

/// int_{x0}^{x1} t^s q(t) dt for the quadratic q through (t_k, y_k), k = 0..2.
/// Exact moments when x0 = 0 (where t^s may be singular), 16-point
/// Gauss-Legendre otherwise.
inline double weighted_quadratic(double s, double x0, double x1, const double* t,
                                 const double* y) {
  auto lagrange = [&](double x) {
    double v = 0.0;
    for (int k = 0; k < 3; ++k) {
      double l = y[k];
      for (int m = 0; m < 3; ++m) {
        if (m != k) l *= (x - t[m]) / (t[k] - t[m]);
      }
      v += l;
    }
    return v;
  };
  if (x0 == 0.0) {
    // scale by the node spacing so the monomial expansion stays well conditioned
    const double h = t[1] - t[0];
    double out = 0.0;
    const double up = x1 / h;
    for (int k = 0; k < 3; ++k) {
      const double a = t[(k + 1) % 3] / h, b = t[(k + 2) % 3] / h, c = t[k] / h;
      const double den = (c - a) * (c - b);
      const double c2 = 1.0 / den, c1 = -(a + b) / den, c0 = a * b / den;
      const double m0 = std::pow(up, s + 1.0) / (s + 1.0);
      const double m1 = std::pow(up, s + 2.0) / (s + 2.0);
      const double m2 = std::pow(up, s + 3.0) / (s + 3.0);
      out += y[k] * (c0 * m0 + c1 * m1 + c2 * m2);
    }
    return out * std::pow(h, s + 1.0);
  }
  static constexpr std::array<double, 8> xg = {
      0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
      0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
  static constexpr std::array<double, 8> wg = {
      0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
      0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
  const double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
  double out = 0.0;
  for (std::size_t k = 0; k < xg.size(); ++k) {
    for (const double sign : {-1.0, 1.0}) {
      const double x = mid + sign * half * xg[k];
      out += wg[k] * std::pow(x, s) * lagrange(x);
    }
  }
  return out * half;
}

}  // namespace detail

/// Integral of f(rho) rho^{d-1} over [0, R_max] for smooth f.
///
/// In the mapping coordinate t the measure is gamma R^d t^{gamma d - 1} dt,
/// so the integral is a product-integration problem with weight t^s,
/// s = gamma d - 1, against the smooth samples f_i. Quadratic panels on the
/// uniform t nodes carry the weight exactly; the singular factor at t = 0
/// (non-integer s) does not degrade the order.
inline double radial_integral(const RadialGrid& grid, std::span<const double> f) {
  const int n = grid.size();
  if (static_cast<int>(f.size()) != n) {
    raise(ErrorKind::LengthMismatch, "field length does not match grid");
  }
  const double s = grid.gamma() * grid.dim() - 1.0;
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = (i + 0.5) / n;
  const double* tp = t.data();
  const double* fp = f.data();

  double sum = detail::weighted_quadratic(s, 0.0, tp[2], tp, fp);
  int i = 2;
  for (; i + 2 < n; i += 2) sum += detail::weighted_quadratic(s, tp[i], tp[i + 2], tp + i, fp + i);
  if (i + 1 < n) sum += detail::weighted_quadratic(s, tp[i], tp[i + 1], tp + i - 1, fp + i - 1);
  sum += detail::weighted_quadratic(s, tp[n - 1], 1.0, tp + n - 3, fp + n - 3);
  return sum * grid.gamma() * std::pow(grid.r_max(), grid.dim());
}

}  // namespace degenls
