/// @file asymptotics.hpp
/// @brief Tail decay fits and near-origin coefficients of computed waves.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "degenls/error.hpp"
#include "degenls/grid.hpp"
#include "degenls/model.hpp"
#include "degenls/profile.hpp"

namespace degenls {

struct DecayWindow {
  double lo_frac = 0.4;
  double hi_frac = 0.9;
  double q_min = 0.2;
  double q_max = 1.6;
  int min_nodes = 32;
};

struct DecayFit {
  double delta = 0.0;       ///< rate at the fixed power 1 - a
  double power = 0.0;       ///< best free power q
  double delta_free = 0.0;  ///< rate at the free power
  double r2 = 0.0;          ///< fit quality at the fixed power
  double r2_free = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int nodes = 0;
  double delta_pred = 0.0;  ///< sqrt(omega) / (1 - a)
};

namespace detail {

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0, sse = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.sse = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 0.0 ? 1.0 - f.sse / syy : 1.0;
  return f;
}

}  // namespace detail

/// Fits log phi = c - delta rho^q on the window [lo_frac R, hi_frac R]:
/// first over q (best r2, golden-section refined), then at q = 1 - a.
inline DecayFit fit_decay(const Profile& prof, const ModelParams& m, const DecayWindow& win = {}) {
  check_params(m);
  const RadialGrid& g = *prof.grid;
  DecayFit fit;
  fit.window_lo = win.lo_frac * g.r_max();
  fit.window_hi = win.hi_frac * g.r_max();
  fit.delta_pred = std::sqrt(m.omega) / (1.0 - m.a);
  std::vector<double> rho, logv;
  for (int i = 0; i < g.size(); ++i) {
    const double x = g.node(i), v = prof.values[static_cast<std::size_t>(i)];
    if (x < fit.window_lo || x > fit.window_hi) continue;
    if (!(v > 0.0)) continue;
    rho.push_back(x);
    logv.push_back(std::log(v));
  }
  fit.nodes = static_cast<int>(rho.size());
  if (fit.nodes < win.min_nodes) {
    raise(ErrorKind::WindowTooShort, "decay window holds fewer than " +
                                         std::to_string(win.min_nodes) + " positive nodes");
  }
  auto at_power = [&](double q) {
    std::vector<double> x(rho.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::pow(rho[i], q);
    return detail::least_squares(x, logv);
  };

  // coarse scan, then golden section on 1 - r2
  const int steps = 280;
  double best_q = win.q_min, best = -1.0;
  for (int k = 0; k <= steps; ++k) {
    const double q = win.q_min + (win.q_max - win.q_min) * k / steps;
    const double r2 = at_power(q).r2;
    if (r2 > best) {
      best = r2;
      best_q = q;
    }
  }
  const double h = (win.q_max - win.q_min) / steps;
  double lo = std::max(win.q_min, best_q - h), hi = std::min(win.q_max, best_q + h);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    if (at_power(x1).sse < at_power(x2).sse) {
      hi = x2;
    } else {
      lo = x1;
    }
  }
  fit.power = 0.5 * (lo + hi);
  const auto free = at_power(fit.power);
  fit.delta_free = -free.slope;
  fit.r2_free = free.r2;
  const auto fixed = at_power(1.0 - m.a);
  fit.delta = -fixed.slope;
  fit.r2 = fixed.r2;
  return fit;
}

struct OriginReport {
  double phi0 = 0.0;
  double slope_coeff = 0.0;      ///< lim phi'(rho) / rho^{1-2a}
  double curv_coeff = 0.0;       ///< lim phi''(rho) / rho^{-2a}
  double predicted_slope = 0.0;  ///< -(phi0^p - omega phi0) / d
  double predicted_curv = 0.0;   ///< (2a - 1)(phi0^p - omega phi0) / d
  double forcing = 0.0;          ///< phi0^p - omega phi0
  double slope_exponent = 0.0;   ///< local exponent of |phi'| near 0, about 1 - 2a
  bool slope_divergent = false;  ///< phi' unbounded at the origin
  double shells[3] = {0.0, 0.0, 0.0};
};

namespace detail {

/// c from q(x) = c + c1 x^k at two abscissae.
inline double richardson(double x1, double q1, double x2, double q2, double k) {
  const double a = std::pow(x1, k), b = std::pow(x2, k);
  return (b * q1 - a * q2) / (b - a);
}

}  // namespace detail

/// Extracts phi(0), lim phi'/rho^{1-2a} and lim phi''/rho^{-2a} from three
/// nodes in dyadic progression near the origin, removing the leading
/// rho^{2-2a} correction by Richardson extrapolation. phi'' comes from the
/// ODE, not from differencing. Profiles without exact slopes use the flux
/// difference quotients at cell edges. On strongly graded grids, where
/// consecutive nodes are more than a factor 2 apart, the shells are the
/// consecutive nodes themselves.
inline OriginReport origin_asymptotics(const Profile& prof, const ModelParams& m,
                                       int first_node = 3) {
  check_params(m);
  const RadialGrid& g = *prof.grid;
  const double a = m.a;
  const int n = g.size();
  // samples (rho, phi, phi')
  std::vector<double> x, v, s;
  if (prof.has_slopes()) {
    for (int i = 0; i < n; ++i) {
      x.push_back(g.node(i));
      v.push_back(prof.values[static_cast<std::size_t>(i)]);
      s.push_back(prof.slopes[static_cast<std::size_t>(i)]);
    }
  } else {
    for (int i = 0; i + 1 < n; ++i) {
      const double dx = g.node(i + 1) - g.node(i);
      x.push_back(g.edges()[static_cast<std::size_t>(i + 1)]);
      v.push_back(0.5 * (prof.values[static_cast<std::size_t>(i)] + prof.values[static_cast<std::size_t>(i + 1)]));
      s.push_back((prof.values[static_cast<std::size_t>(i + 1)] - prof.values[static_cast<std::size_t>(i)]) / dx);
    }
  }
  auto nearest = [&](double target) {
    const auto it = std::lower_bound(x.begin(), x.end(), target);
    std::size_t k = static_cast<std::size_t>(std::distance(x.begin(), it));
    if (k >= x.size()) k = x.size() - 1;
    if (k > 0 && std::abs(x[k - 1] - target) < std::abs(x[k] - target)) --k;
    return k;
  };
  const std::size_t i1 = static_cast<std::size_t>(std::clamp(first_node, 0, static_cast<int>(x.size()) - 1));
  const std::size_t i2 = std::max(i1 + 1, nearest(2.0 * x[i1]));
  const std::size_t i3 = std::max(i2 + 1, nearest(2.0 * x[i2]));
  if (i3 >= x.size()) {
    raise(ErrorKind::ResolutionInsufficient, "grid too short for three near-origin shells");
  }
  const std::size_t idx[3] = {i1, i2, i3};
  const double k = 2.0 - 2.0 * a;
  OriginReport rep;
  double q1[3], q0[3];
  for (int j = 0; j < 3; ++j) {
    rep.shells[j] = x[idx[j]];
    q0[j] = v[idx[j]];
    q1[j] = s[idx[j]] / std::pow(x[idx[j]], 1.0 - 2.0 * a);
  }
  auto monotone = [](const double* q) {
    const double d1 = q[1] - q[0], d2 = q[2] - q[1];
    const double scale = 1e-12 * std::max({std::abs(q[0]), std::abs(q[1]), std::abs(q[2])});
    return std::abs(d1) <= scale || std::abs(d2) <= scale || (d1 > 0.0) == (d2 > 0.0);
  };
  if (!monotone(q0) || !monotone(q1)) {
    raise(ErrorKind::ResolutionInsufficient, "near-origin sequence is not monotone");
  }
  const double phi_a = detail::richardson(rep.shells[0], q0[0], rep.shells[1], q0[1], k);
  const double phi_b = detail::richardson(rep.shells[1], q0[1], rep.shells[2], q0[2], k);
  const double sl_a = detail::richardson(rep.shells[0], q1[0], rep.shells[1], q1[1], k);
  // the finer pair is the estimate; the coarser one only checks consistency
  rep.phi0 = phi_a;
  rep.slope_coeff = sl_a;
  if (std::abs(phi_a - phi_b) > 1e-2 * std::abs(phi_a)) {
    raise(ErrorKind::ResolutionInsufficient, "phi(0) extrapolants disagree");
  }
  rep.forcing = std::pow(rep.phi0, m.p) - m.omega * rep.phi0;
  rep.predicted_slope = -rep.forcing / m.d;
  rep.predicted_curv = (2.0 * a - 1.0) * rep.forcing / m.d;
  // phi'' rho^{2a} = -(phi^p - omega phi) - (d + 2a - 1) phi' / rho^{1-2a}
  double q2[3];
  for (int j = 0; j < 3; ++j) {
    q2[j] = -(std::pow(q0[j], m.p) - m.omega * q0[j]) - (m.d + 2.0 * a - 1.0) * q1[j];
  }
  rep.curv_coeff = detail::richardson(rep.shells[0], q2[0], rep.shells[1], q2[1], k);
  rep.slope_exponent = std::log(std::abs(s[i3] / s[i1])) / std::log(x[i3] / x[i1]);
  rep.slope_divergent = rep.slope_exponent < -0.05;
  return rep;
}

}  // namespace degenls
