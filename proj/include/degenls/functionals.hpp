/// @file functionals.hpp
/// @brief Mass, energy, Weinstein quotient, Pohozaev residuals, the virial
/// functional P and the L2-invariant dilation used in the blow-up argument.
///
/// All reported integrals are whole-space values (the surface measure
/// |S^{d-1}| is applied once, in profile_moments). The identities are
/// homogeneous, so the residuals do not depend on that convention; in d = 1
/// it is what makes int phi^2 = 4 for phi = sqrt(2) sech.

#pragma once

#include <cmath>

#include "degenls/error.hpp"
#include "degenls/model.hpp"
#include "degenls/profile.hpp"

namespace degenls {

struct IdentityReport {
  double mass = 0.0;
  double energy = 0.0;
  double J = 0.0;
  /// |K - c N| / K with c = d(p-1)/(2(p+1)(1-a)).
  double pohozaev_1 = 0.0;
  /// |omega M - (1 - c) N| / K.
  double pohozaev_2 = 0.0;
  double P = 0.0;
  double alpha = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
};

inline double energy_of(const ModelParams& m, const Moments& mo) {
  return 0.5 * mo.kinetic - mo.potential / (m.p + 1.0);
}

inline double virial_functional(const ModelParams& m, double kinetic, double potential) {
  return 0.5 * (1.0 - m.a) * kinetic - virial_alpha(m) / (2.0 * (m.p + 1.0)) * potential;
}

inline IdentityReport evaluate_identities(const ModelParams& m, const Profile& prof) {
  check_params(m);
  const Moments mo = profile_moments(prof, m.a, m.p);
  const double c = pohozaev_coefficient(m);
  IdentityReport r;
  r.mass = mo.mass;
  r.kinetic = mo.kinetic;
  r.potential = mo.potential;
  r.energy = energy_of(m, mo);
  r.J = (mo.kinetic + mo.mass) / std::pow(mo.potential, 2.0 / (m.p + 1.0));
  r.pohozaev_1 = std::abs(mo.kinetic - c * mo.potential) / mo.kinetic;
  r.pohozaev_2 = std::abs(m.omega * mo.mass - (1.0 - c) * mo.potential) / mo.kinetic;
  r.P = virial_functional(m, mo.kinetic, mo.potential);
  r.alpha = virial_alpha(m);
  return r;
}

/// phi^lambda(rho) = lambda^{d/2} phi(lambda rho) on the same grid.
///
/// Throws GridRange when lambda < 1 pushes more than 1e-10 of the mass past
/// R_max.
inline Profile l2_scale(const Profile& prof, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    raise(ErrorKind::InvalidParameter, "l2_scale needs lambda > 0");
  }
  const RadialGrid& g = *prof.grid;
  const int n = g.size();
  if (lambda < 1.0) {
    double total = 0.0, lost = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = prof.values[static_cast<std::size_t>(i)];
      const double dm = g.volume(i) * v * v;
      total += dm;
      if (g.node(i) > lambda * g.r_max()) lost += dm;
    }
    if (lost > 1e-10 * total) {
      raise(ErrorKind::GridRange, "dilation below the minimal resolvable scale for this grid");
    }
  }
  const ProfileInterpolant interp(prof);
  const double amp = std::pow(lambda, 0.5 * g.dim());
  Profile out;
  out.grid = prof.grid;
  out.omega = prof.omega;
  out.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.values[static_cast<std::size_t>(i)] = amp * interp.value(lambda * g.node(i));
  }
  if (interp.has_derivative()) {
    out.slopes.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      out.slopes[static_cast<std::size_t>(i)] = amp * lambda * interp.derivative(lambda * g.node(i));
    }
  }
  return out;
}

struct ScaledEnergy {
  /// (alpha l^{2-2a} - 2(1-a) l^alpha) / (2(p+1)(1-a)) * ||phi||_{p+1}^{p+1}
  double closed_form = 0.0;
  /// E evaluated on l2_scale(phi, lambda).
  double direct = 0.0;
};

inline ScaledEnergy scaled_energy(const ModelParams& m, const Profile& prof, double lambda) {
  check_params(m);
  const Moments mo = profile_moments(prof, m.a, m.p);
  const double alpha = virial_alpha(m);
  ScaledEnergy e;
  e.closed_form = (alpha * std::pow(lambda, 2.0 - 2.0 * m.a) -
                   2.0 * (1.0 - m.a) * std::pow(lambda, alpha)) /
                  (2.0 * (m.p + 1.0) * (1.0 - m.a)) * mo.potential;
  e.direct = energy_of(m, profile_moments(l2_scale(prof, lambda), m.a, m.p));
  return e;
}

/// f(lambda) = alpha lambda^{2-2a} - 2(1-a) lambda^alpha, the shape of the
/// dilated energy; f'(1) = 0 and f''(1) < 0 exactly when p > p_c.
inline double dilation_shape(const ModelParams& m, double lambda) {
  const double alpha = virial_alpha(m);
  return alpha * std::pow(lambda, 2.0 - 2.0 * m.a) - 2.0 * (1.0 - m.a) * std::pow(lambda, alpha);
}

}  // namespace degenls
