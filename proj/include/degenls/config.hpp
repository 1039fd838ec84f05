/// @file config.hpp
/// @brief RunConfig and its line-oriented text format.
///
/// Grammar (one item per line, whitespace around tokens ignored):
///
///     file    := { line }
///     line    := blank | comment | section | entry
///     comment := '#' any
///     section := '[' name ']'
///     entry   := key '=' value
///     value   := number | integer | word | number { ',' number }
///
/// Keys are looked up as "section.key". Unknown sections or keys are errors.
/// Numbers are written with 17 significant digits so parse(serialize(c))
/// reproduces c bit for bit. A value of 0 for grid.r_max or grid.gamma means
/// "use the default for the model".

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "degenls/error.hpp"
#include "degenls/model.hpp"

namespace degenls {

struct GridSpec {
  int n = 4096;
  double r_max = 0.0;
  double gamma = 0.0;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct SolverSpec {
  double tol = 1e-8;
  int max_iter = 200000;
  double tau = 0.1;
  double shoot_tol = 1e-10;
  int ell_max = 3;
  double pohozaev_gate = 1e-6;

  friend bool operator==(const SolverSpec&, const SolverSpec&) = default;
};

struct DynamicsSpec {
  double T = 10.0;
  double dt = 1e-3;
  double lambda = 1.0;
  int stride = 1;
  GridSpec grid{2048, 0.0, 0.0};

  friend bool operator==(const DynamicsSpec&, const DynamicsSpec&) = default;
};

struct SweepSpec {
  std::vector<int> d{1};
  std::vector<double> a{0.0, 0.25, 0.5};
  std::vector<double> p{2.0, 3.0, 5.0, 7.0};

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct RunConfig {
  ModelParams params{};
  GridSpec grid{};
  SolverSpec solver{};
  DynamicsSpec dynamics{};
  SweepSpec sweep{};
  std::string out_dir = "out";
  std::uint64_t seed = 20240101;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) raise(ErrorKind::Config, key + ": not a number: '" + v + "'");
  return out;
}

inline long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) raise(ErrorKind::Config, key + ": not an integer: '" + v + "'");
  return out;
}

inline unsigned long long parse_uint(const std::string& key, const std::string& v) {
  unsigned long long out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) raise(ErrorKind::Config, key + ": not an unsigned integer: '" + v + "'");
  return out;
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_integral_v<T>) {
      s += std::to_string(xs[i]);
    } else {
      s += fmt17(xs[i]);
    }
  }
  return s;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') raise(ErrorKind::Config, "line " + std::to_string(lineno) + ": bad section");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) raise(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = section + "." + detail::trim(line.substr(0, eq));
    const std::string v = detail::trim(line.substr(eq + 1));
    auto num = [&] { return detail::parse_double(key, v); };
    auto integer = [&] { return static_cast<int>(detail::parse_int(key, v)); };

    if (key == "model.d") c.params.d = integer();
    else if (key == "model.a") c.params.a = num();
    else if (key == "model.p") c.params.p = num();
    else if (key == "model.omega") c.params.omega = num();
    else if (key == "grid.n") c.grid.n = integer();
    else if (key == "grid.r_max") c.grid.r_max = num();
    else if (key == "grid.gamma") c.grid.gamma = num();
    else if (key == "solver.tol") c.solver.tol = num();
    else if (key == "solver.max_iter") c.solver.max_iter = integer();
    else if (key == "solver.tau") c.solver.tau = num();
    else if (key == "solver.shoot_tol") c.solver.shoot_tol = num();
    else if (key == "solver.ell_max") c.solver.ell_max = integer();
    else if (key == "solver.pohozaev_gate") c.solver.pohozaev_gate = num();
    else if (key == "dynamics.T") c.dynamics.T = num();
    else if (key == "dynamics.dt") c.dynamics.dt = num();
    else if (key == "dynamics.lambda") c.dynamics.lambda = num();
    else if (key == "dynamics.stride") c.dynamics.stride = integer();
    else if (key == "dynamics.n") c.dynamics.grid.n = integer();
    else if (key == "dynamics.r_max") c.dynamics.grid.r_max = num();
    else if (key == "dynamics.gamma") c.dynamics.grid.gamma = num();
    else if (key == "sweep.d" || key == "sweep.a" || key == "sweep.p") {
      const auto items = detail::split_list(v);
      if (key == "sweep.d") {
        c.sweep.d.clear();
        for (const auto& s : items) c.sweep.d.push_back(static_cast<int>(detail::parse_int(key, s)));
      } else {
        auto& dst = key == "sweep.a" ? c.sweep.a : c.sweep.p;
        dst.clear();
        for (const auto& s : items) dst.push_back(detail::parse_double(key, s));
      }
    }
    else if (key == "output.dir") c.out_dir = v;
    else if (key == "run.seed") c.seed = static_cast<std::uint64_t>(detail::parse_uint(key, v));
    else raise(ErrorKind::Config, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(ErrorKind::Config, "cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

inline std::string serialize_config(const RunConfig& c) {
  using detail::fmt17;
  std::ostringstream o;
  o << "[model]\n"
    << "d = " << c.params.d << "\n"
    << "a = " << fmt17(c.params.a) << "\n"
    << "p = " << fmt17(c.params.p) << "\n"
    << "omega = " << fmt17(c.params.omega) << "\n\n"
    << "[grid]\n"
    << "n = " << c.grid.n << "\n"
    << "r_max = " << fmt17(c.grid.r_max) << "\n"
    << "gamma = " << fmt17(c.grid.gamma) << "\n\n"
    << "[solver]\n"
    << "tol = " << fmt17(c.solver.tol) << "\n"
    << "max_iter = " << c.solver.max_iter << "\n"
    << "tau = " << fmt17(c.solver.tau) << "\n"
    << "shoot_tol = " << fmt17(c.solver.shoot_tol) << "\n"
    << "ell_max = " << c.solver.ell_max << "\n"
    << "pohozaev_gate = " << fmt17(c.solver.pohozaev_gate) << "\n\n"
    << "[dynamics]\n"
    << "T = " << fmt17(c.dynamics.T) << "\n"
    << "dt = " << fmt17(c.dynamics.dt) << "\n"
    << "lambda = " << fmt17(c.dynamics.lambda) << "\n"
    << "stride = " << c.dynamics.stride << "\n"
    << "n = " << c.dynamics.grid.n << "\n"
    << "r_max = " << fmt17(c.dynamics.grid.r_max) << "\n"
    << "gamma = " << fmt17(c.dynamics.grid.gamma) << "\n\n"
    << "[sweep]\n"
    << "d = " << detail::join(c.sweep.d) << "\n"
    << "a = " << detail::join(c.sweep.a) << "\n"
    << "p = " << detail::join(c.sweep.p) << "\n\n"
    << "[output]\n"
    << "dir = " << c.out_dir << "\n\n"
    << "[run]\n"
    << "seed = " << c.seed << "\n";
  return o.str();
}

/// Grid for a model from a GridSpec, filling in defaulted R_max and gamma.
inline GridPtr grid_for(const ModelParams& m, const GridSpec& spec) {
  const double r = spec.r_max > 0.0 ? spec.r_max : default_r_max(m);
  const double gamma = spec.gamma > 0.0 ? spec.gamma : default_gamma(m.a);
  return build_grid(m.d, r, spec.n, gamma);
}

}  // namespace degenls
