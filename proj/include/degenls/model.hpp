/// @file model.hpp
/// @brief Model parameters (d, a, p, omega), the existence window, the
/// stability threshold and the frequency scaling of solitary waves.
///
/// Radial solutions of -div(|x|^{2a} grad phi) + omega phi = phi^p become
/// ordinary radial NLS ground states in the effective dimension
/// D = d / (1 - a) under r = rho^{1-a} / (1 - a). Most closed forms below
/// are that correspondence read backwards.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "degenls/error.hpp"
#include "degenls/grid.hpp"
#include "degenls/profile.hpp"

namespace degenls {

struct ModelParams {
  int d = 1;
  double a = 0.0;
  double p = 3.0;
  double omega = 1.0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

enum class Verdict { Stable, Unstable, Degenerate };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Degenerate: return "Degenerate";
  }
  return "?";
}

struct StabilityVerdict {
  double threshold = 0.0;  ///< p_c = 1 + 4(1-a)/d
  int slope_sign = 0;      ///< sign of 2/(p-1) - d/(2(1-a))
  Verdict verdict = Verdict::Degenerate;
};

/// Rejects d < 1, a outside [0, 1) and p <= 1.
inline void check_structure(const ModelParams& m) {
  if (m.d < 1) raise(ErrorKind::InvalidParameter, "dimension d must be >= 1");
  if (!(m.a >= 0.0 && m.a < 1.0)) raise(ErrorKind::InvalidParameter, "degeneracy a must lie in [0, 1)");
  if (!(m.p > 1.0) || !std::isfinite(m.p)) raise(ErrorKind::InvalidParameter, "power p must exceed 1");
}

/// Field ranges plus omega > 0.
inline void check_params(const ModelParams& m) {
  check_structure(m);
  if (!(m.omega > 0.0) || !std::isfinite(m.omega)) {
    raise(ErrorKind::InvalidParameter, "frequency omega must be positive");
  }
}

/// 1/2 - 1/(p+1) < (1-a)/d.
inline bool exists_window(const ModelParams& m) {
  check_structure(m);
  return 0.5 - 1.0 / (m.p + 1.0) < (1.0 - m.a) / m.d;
}

/// Throws ExistenceWindow unless the parameters admit localized waves.
inline void require_window(const ModelParams& m) {
  check_params(m);
  if (!exists_window(m)) {
    raise(ErrorKind::ExistenceWindow,
          "parameters violate the existence window 1/2 - 1/(p+1) < (1-a)/d");
  }
}

/// theta in (0,1) with 1/(p+1) = 1/2 - theta (1-a)/d.
inline double interpolation_theta(const ModelParams& m) {
  return (m.d / (1.0 - m.a)) * (0.5 - 1.0 / (m.p + 1.0));
}

inline double effective_dimension(const ModelParams& m) { return m.d / (1.0 - m.a); }

inline double critical_power(const ModelParams& m) { return 1.0 + 4.0 * (1.0 - m.a) / m.d; }

/// Upper end (d + 2(1-a)) / (d - 2(1-a)) of the window; infinite when
/// d <= 2(1-a).
inline double window_upper_power(const ModelParams& m) {
  const double t = 2.0 * (1.0 - m.a);
  if (m.d <= t) return std::numeric_limits<double>::infinity();
  return (m.d + t) / (m.d - t);
}

/// Exponent e in ||phi_omega||^2 = omega^e ||phi_1||^2.
inline double mass_exponent(const ModelParams& m) {
  return 2.0 / (m.p - 1.0) - m.d / (2.0 * (1.0 - m.a));
}

/// alpha = d (p - 1) / 2.
inline double virial_alpha(const ModelParams& m) { return m.d * (m.p - 1.0) / 2.0; }

/// d (p-1) / (2 (p+1) (1-a)): the kinetic-to-potential ratio on waves.
inline double pohozaev_coefficient(const ModelParams& m) {
  return m.d * (m.p - 1.0) / (2.0 * (m.p + 1.0) * (1.0 - m.a));
}

inline StabilityVerdict classify_by_threshold(const ModelParams& m) {
  require_window(m);
  StabilityVerdict v;
  v.threshold = critical_power(m);
  const double e = mass_exponent(m);
  v.slope_sign = e > 0.0 ? 1 : (e < 0.0 ? -1 : 0);
  if (std::abs(m.p - v.threshold) < 1e-12 * v.threshold) {
    v.verdict = Verdict::Degenerate;
    v.slope_sign = 0;
  } else {
    v.verdict = m.p < v.threshold ? Verdict::Stable : Verdict::Unstable;
  }
  return v;
}

/// Default grading: nodes uniform in r = rho^{1-a}/(1-a), i.e. gamma = 1/(1-a).
inline double default_gamma(double a) { return 1.0 / (1.0 - a); }

/// Smallest R_max with exp(-sqrt(omega) R^{1-a}/(1-a)) <= tail.
inline double default_r_max(const ModelParams& m, double tail = 1e-12) {
  const double r = -std::log(tail) / std::sqrt(m.omega);
  return std::pow((1.0 - m.a) * r, 1.0 / (1.0 - m.a));
}

/// phi_omega(rho) = omega^{1/(p-1)} phi_1(omega^{1/(2(1-a))} rho).
///
/// Without a target grid the output lives on the source grid contracted by
/// omega^{-1/(2(1-a))}, where nodes map onto nodes and no interpolation
/// happens. A supplied target grid is filled by log-space interpolation.
inline Profile omega_rescale(const Profile& phi1, const ModelParams& m,
                             std::optional<GridPtr> target = std::nullopt) {
  check_params(m);
  if (std::abs(phi1.omega - 1.0) > 1e-12) {
    raise(ErrorKind::InvalidParameter, "omega_rescale expects a profile computed at omega = 1");
  }
  const double length = std::pow(m.omega, 1.0 / (2.0 * (1.0 - m.a)));
  const double amp = std::pow(m.omega, 1.0 / (m.p - 1.0));
  const RadialGrid& src = *phi1.grid;

  Profile out;
  out.omega = m.omega;
  if (!target) {
    out.grid = std::make_shared<const RadialGrid>(src.scaled(1.0 / length));
    out.values.resize(phi1.values.size());
    for (std::size_t i = 0; i < phi1.values.size(); ++i) out.values[i] = amp * phi1.values[i];
    if (phi1.has_slopes()) {
      out.slopes.resize(phi1.slopes.size());
      for (std::size_t i = 0; i < out.slopes.size(); ++i) out.slopes[i] = amp * length * phi1.slopes[i];
    }
    if (phi1.has_curvatures()) {
      out.curvatures.resize(phi1.curvatures.size());
      for (std::size_t i = 0; i < out.curvatures.size(); ++i) {
        out.curvatures[i] = amp * length * length * phi1.curvatures[i];
      }
    }
    return out;
  }

  const RadialGrid& dst = **target;
  const ProfileInterpolant interp(phi1);
  const double cut = interp.value(length * dst.r_max());
  if (length * dst.r_max() < src.r_max() && cut > 1e-8 * phi1.values.front()) {
    raise(ErrorKind::GridRange, "rescaled wave extends beyond the target grid");
  }
  out.grid = *target;
  out.values.resize(static_cast<std::size_t>(dst.size()));
  for (int i = 0; i < dst.size(); ++i) {
    out.values[static_cast<std::size_t>(i)] = amp * interp.value(length * dst.node(i));
  }
  if (interp.has_derivative()) {
    out.slopes.resize(out.values.size());
    for (int i = 0; i < dst.size(); ++i) {
      out.slopes[static_cast<std::size_t>(i)] = amp * length * interp.derivative(length * dst.node(i));
    }
  }
  return out;
}

}  // namespace degenls
