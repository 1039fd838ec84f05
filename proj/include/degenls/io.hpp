/// @file io.hpp
/// @brief JSON serialization of reports and error objects (lower_snake_case keys).

#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

#include "degenls/asymptotics.hpp"
#include "degenls/error.hpp"
#include "degenls/functionals.hpp"
#include "degenls/ground_state.hpp"
#include "degenls/model.hpp"
#include "degenls/spectral.hpp"

namespace degenls {

using json = nlohmann::ordered_json;

inline json to_json(const ModelParams& m) {
  return {{"d", m.d}, {"a", m.a}, {"p", m.p}, {"omega", m.omega}};
}

inline json to_json(const MinimizerReport& r) {
  return {{"j_min", r.J_min},
          {"lambda", r.lambda},
          {"kappa", r.kappa},
          {"iterations", r.iterations},
          {"residual", r.residual},
          {"j_history", r.J_history}};
}

inline json to_json(const IdentityReport& r) {
  return {{"mass", r.mass},           {"energy", r.energy},   {"j", r.J},
          {"pohozaev_1", r.pohozaev_1}, {"pohozaev_2", r.pohozaev_2}, {"p", r.P},
          {"alpha", r.alpha},         {"kinetic", r.kinetic}, {"potential", r.potential}};
}

inline json to_json(const SpectralReport& r) {
  json sectors = json::array();
  for (const auto& s : r.sectors) {
    sectors.push_back({{"ell", s.sector.ell},
                       {"parity", s.sector.parity == Parity::Even ? "even" : "odd"},
                       {"multiplicity", s.multiplicity},
                       {"n_plus", s.n_plus},
                       {"n_minus", s.n_minus},
                       {"kernel_plus", s.kernel_plus},
                       {"lowest_plus", s.lowest_plus},
                       {"lowest_minus", s.lowest_minus}});
  }
  return {{"n_plus", r.n_plus},
          {"n_plus_radial", r.n_plus_radial},
          {"n_minus", r.n_minus},
          {"kernel_plus", r.kernel_plus},
          {"lmin_plus", r.lmin_plus},
          {"lmin_minus", r.lmin_minus},
          {"minus_cosine", r.minus_cosine},
          {"gap_minus", r.gap_minus},
          {"slope", r.slope},
          {"slope_analytic", r.slope_analytic},
          {"slope_residual", r.slope_residual},
          {"n0_d", r.n0_D},
          {"k_ham", r.k_ham},
          {"verdict", to_string(r.verdict)},
          {"k_ham_radial", r.k_ham_radial},
          {"verdict_radial", to_string(r.verdict_radial)},
          {"monotone_in_ell", r.monotone_in_ell},
          {"tol_zero", r.tol_zero},
          {"sectors", sectors}};
}

inline json to_json(const DecayFit& f) {
  return {{"delta", f.delta},           {"power", f.power},     {"delta_free", f.delta_free},
          {"r2", f.r2},                 {"r2_free", f.r2_free},
          {"window", {f.window_lo, f.window_hi}},
          {"nodes", f.nodes},           {"delta_pred", f.delta_pred}};
}

inline json to_json(const OriginReport& r) {
  return {{"phi0", r.phi0},
          {"slope_coeff", r.slope_coeff},
          {"curv_coeff", r.curv_coeff},
          {"predicted_slope", r.predicted_slope},
          {"predicted_curv", r.predicted_curv},
          {"forcing", r.forcing},
          {"slope_exponent", r.slope_exponent},
          {"slope_divergent", r.slope_divergent},
          {"shells", {r.shells[0], r.shells[1], r.shells[2]}}};
}

inline json error_json(ErrorKind kind, const std::string& message) {
  return {{"error", to_string(kind)}, {"message", message}};
}

inline json error_json(const Error& e) { return error_json(e.kind(), e.what()); }

inline void write_json(const json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) raise(ErrorKind::Config, "cannot open " + path + " for writing");
  f << j.dump(2) << '\n';
}

}  // namespace degenls
