/// @file profile.hpp
/// @brief Real radial fields on a grid: resampling, moments and CSV output.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "degenls/discretization.hpp"
#include "degenls/error.hpp"
#include "degenls/grid.hpp"

namespace degenls {

/// A radial field phi(rho_i). Slopes and curvatures are present when the
/// producer knows them exactly (shooting); discrete solutions carry values
/// only and are integrated with the finite-volume sums that match the
/// discrete operator.
struct Profile {
  GridPtr grid;
  std::vector<double> values;
  std::vector<double> slopes;
  std::vector<double> curvatures;
  double omega = 1.0;
  double residual = std::numeric_limits<double>::quiet_NaN();

  int size() const noexcept { return static_cast<int>(values.size()); }
  bool has_slopes() const noexcept { return !slopes.empty(); }
  bool has_curvatures() const noexcept { return !curvatures.empty(); }
};

inline Profile make_profile(GridPtr grid, std::vector<double> values, double omega = 1.0) {
  if (static_cast<int>(values.size()) != grid->size()) {
    raise(ErrorKind::LengthMismatch, "profile length does not match grid");
  }
  Profile p;
  p.grid = std::move(grid);
  p.values = std::move(values);
  p.omega = omega;
  return p;
}

/// Whole-space integrals of a profile (the factor |S^{d-1}| included).
struct Moments {
  double mass = 0.0;       ///< int phi^2
  double kinetic = 0.0;    ///< int |x|^{2a} |grad phi|^2
  double potential = 0.0;  ///< int |phi|^{p+1}
  double variance = 0.0;   ///< int |x|^{2-2a} phi^2
};

inline Moments profile_moments(const Profile& prof, double a, double p) {
  const RadialGrid& g = *prof.grid;
  const int n = g.size();
  const double area = sphere_area(g.dim());
  std::vector<double> f2(static_cast<std::size_t>(n)), fp(static_cast<std::size_t>(n)),
      fv(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double v = prof.values[static_cast<std::size_t>(i)];
    f2[static_cast<std::size_t>(i)] = v * v;
    fp[static_cast<std::size_t>(i)] = std::pow(std::abs(v), p + 1.0);
    fv[static_cast<std::size_t>(i)] = std::pow(g.node(i), 2.0 - 2.0 * a) * v * v;
  }
  Moments m;
  if (prof.has_slopes()) {
    std::vector<double> fk(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double s = prof.slopes[static_cast<std::size_t>(i)];
      fk[static_cast<std::size_t>(i)] = std::pow(g.node(i), 2.0 * a) * s * s;
    }
    m.mass = area * radial_integral(g, f2);
    m.potential = area * radial_integral(g, fp);
    m.variance = area * radial_integral(g, fv);
    m.kinetic = area * radial_integral(g, fk);
  } else {
    const std::span<const double> u(prof.values);
    m.mass = area * volume_sum(g, f2);
    m.potential = area * volume_sum(g, fp);
    m.variance = area * volume_sum(g, fv);
    m.kinetic = area * (gradient_energy(g, a, u) + boundary_energy(g, a, u));
  }
  return m;
}

namespace detail {

/// Fritsch-Carlson derivative estimates for monotone piecewise cubics.
inline std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) return 3.0 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

/// Cubic Hermite interpolant on [x0, x1] and its derivative.
inline void hermite(double x0, double x1, double y0, double y1, double m0, double m1,
                    double x, double& y, double& dy) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  y = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
  const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
  dy = d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1;
}

}  // namespace detail

/// Evaluates a positive profile off-grid.
///
/// Interpolation is cubic Hermite in log(phi): with the exact log-derivative
/// phi'/phi when slopes are known, otherwise with monotone Fritsch-Carlson
/// slopes. Working in log(phi) keeps samples positive and the exponential
/// tail intact. Below the first node the field is continued by even
/// reflection; beyond R_max it is zero.
class ProfileInterpolant {
 public:
  explicit ProfileInterpolant(const Profile& prof)
      : x_(prof.grid->nodes().begin(), prof.grid->nodes().end()), r_max_(prof.grid->r_max()) {
    const std::size_t n = x_.size();
    logv_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = prof.values[i];
      if (!(v > 0.0)) {
        raise(ErrorKind::InvalidParameter, "log-space interpolation needs a positive profile");
      }
      logv_[i] = std::log(v);
    }
    if (prof.has_slopes()) {
      dlog_.resize(n);
      for (std::size_t i = 0; i < n; ++i) dlog_[i] = prof.slopes[i] / prof.values[i];
    } else {
      dlog_ = detail::pchip_slopes(x_, logv_);
    }
    if (prof.has_slopes() && prof.has_curvatures()) {
      slope_.assign(prof.slopes.begin(), prof.slopes.end());
      curv_.assign(prof.curvatures.begin(), prof.curvatures.end());
    }
  }

  bool has_derivative() const noexcept { return !slope_.empty(); }

  double value(double rho) const {
    double y = 0.0, dy = 0.0;
    log_eval(rho, y, dy);
    return rho > r_max_ ? 0.0 : std::exp(y);
  }

  /// phi'(rho): Hermite in phi' with exact curvatures where known, otherwise
  /// the derivative of the log-space interpolant.
  double derivative(double rho) const {
    if (rho > r_max_) return 0.0;
    if (slope_.empty()) {
      double y = 0.0, dy = 0.0;
      log_eval(rho, y, dy);
      return std::exp(y) * dy;
    }
    const std::size_t n = x_.size();
    if (rho <= x_[0]) {
      // odd reflection of phi' through the origin
      double s = 0.0, ds = 0.0;
      detail::hermite(-x_[0], x_[0], -slope_[0], slope_[0], curv_[0], curv_[0], rho, s, ds);
      return s;
    }
    if (rho >= x_[n - 1]) return slope_[n - 1] * value(rho) / std::exp(logv_[n - 1]);
    const std::size_t k = interval(rho);
    double s = 0.0, ds = 0.0;
    detail::hermite(x_[k], x_[k + 1], slope_[k], slope_[k + 1], curv_[k], curv_[k + 1], rho, s, ds);
    return s;
  }

 private:
  std::size_t interval(double rho) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), rho);
    const auto k = static_cast<std::size_t>(std::distance(x_.begin(), it));
    return std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, x_.size() - 2);
  }

  void log_eval(double rho, double& y, double& dy) const {
    const std::size_t n = x_.size();
    if (rho <= x_[0]) {
      detail::hermite(-x_[0], x_[0], logv_[0], logv_[0], -dlog_[0], dlog_[0], rho, y, dy);
      return;
    }
    if (rho >= x_[n - 1]) {
      const double slope = (logv_[n - 1] - logv_[n - 2]) / (x_[n - 1] - x_[n - 2]);
      y = logv_[n - 1] + slope * (rho - x_[n - 1]);
      dy = slope;
      return;
    }
    const std::size_t k = interval(rho);
    detail::hermite(x_[k], x_[k + 1], logv_[k], logv_[k + 1], dlog_[k], dlog_[k + 1], rho, y, dy);
  }

  std::vector<double> x_;
  std::vector<double> logv_;
  std::vector<double> dlog_;
  std::vector<double> slope_;
  std::vector<double> curv_;
  double r_max_;
};

/// Writes columns rho, phi with 17 significant digits.
inline void write_profile_csv(const Profile& prof, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) raise(ErrorKind::Config, "cannot open " + path + " for writing");
  std::fprintf(f, "rho,phi\n");
  for (int i = 0; i < prof.size(); ++i) {
    std::fprintf(f, "%.17g,%.17g\n", prof.grid->node(i), prof.values[static_cast<std::size_t>(i)]);
  }
  std::fclose(f);
}

}  // namespace degenls
