#include "catch_amalgamated.hpp"

#include <cmath>

#include "degenls/functionals.hpp"
#include "degenls/ground_state.hpp"

using namespace degenls;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
Profile exact_sech(int n = 4096, double r = 30.0) {
  const auto g = build_grid(1, r, n, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  std::vector<double> s(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = g->node(i);
    v[static_cast<std::size_t>(i)] = std::sqrt(2.0) / std::cosh(x);
    s[static_cast<std::size_t>(i)] = -std::sqrt(2.0) * std::tanh(x) / std::cosh(x);
    c[static_cast<std::size_t>(i)] = std::sqrt(2.0) / std::cosh(x) * (std::tanh(x) * std::tanh(x) - 1.0 / (std::cosh(x) * std::cosh(x)));
  }
  auto p = make_profile(g, std::move(v));
  p.slopes = std::move(s);
  p.curvatures = std::move(c);
  return p;
}
}  // namespace

TEST_CASE("identities on the exact soliton", "[functionals]") {
  const ModelParams m{1, 0.0, 3.0, 1.0};
  const auto r = evaluate_identities(m, exact_sech());
  CHECK_THAT(r.mass, WithinRel(4.0, 1e-8));
  CHECK_THAT(r.kinetic, WithinRel(4.0 / 3.0, 1e-6));
  CHECK_THAT(r.potential, WithinRel(16.0 / 3.0, 1e-8));
  CHECK(r.pohozaev_1 < 1e-6);
  CHECK(r.pohozaev_2 < 1e-6);
  CHECK_THAT(r.energy, WithinAbs(-2.0 / 3.0, 1e-6));
  CHECK(std::abs(r.P) < 1e-6 * r.kinetic);
}

TEST_CASE("identities on computed waves", "[functionals]") {
  for (const ModelParams m : {ModelParams{2, 0.25, 3.0, 1.0}, ModelParams{3, 0.25, 2.0, 1.0}, ModelParams{1, 0.75, 2.5, 1.0}}) {
    const auto g = build_grid(m.d, default_r_max(m), 4096, default_gamma(m.a));
    const auto r = evaluate_identities(m, shoot_profile(m, g).profile);
    CAPTURE(m.d, m.a, m.p);
    CHECK(r.pohozaev_1 < 1e-6);
    CHECK(r.pohozaev_2 < 1e-6);
    CHECK(std::abs(r.P) < 1e-6 * r.kinetic);
  }
}

TEST_CASE("L2-invariant dilation", "[functionals]") {
  const auto s = exact_sech();
  const ModelParams m{1, 0.0, 3.0, 1.0};
  SECTION("unit factor is the identity") {
    const auto same = l2_scale(s, 1.0);
    for (std::size_t i = 0; i < s.values.size(); i += 101) CHECK_THAT(same.values[i], WithinAbs(s.values[i], 1e-14));
  }
  SECTION("mass invariance and Lp scaling") {
    const ModelParams m7{1, 0.0, 7.0, 1.0};
    const auto before = profile_moments(s, 0.0, 7.0);
    const auto after = profile_moments(l2_scale(s, 1.1), 0.0, 7.0);
    CHECK_THAT(after.mass, WithinRel(before.mass, 1e-8));
    CHECK_THAT(after.potential, WithinRel(std::pow(1.1, virial_alpha(m7)) * before.potential, 1e-7));
  }
  SECTION("bad factor") { CHECK_THROWS_AS(l2_scale(s, 0.0), Error); }
  (void)m;
}

TEST_CASE("scaled energy", "[functionals]") {
  const auto s = exact_sech();
  const ModelParams m{1, 0.0, 3.0, 1.0};
  const auto e1 = scaled_energy(m, s, 1.0);
  CHECK_THAT(e1.closed_form, WithinAbs(-2.0 / 3.0, 1e-7));
  CHECK_THAT(e1.direct, WithinAbs(-2.0 / 3.0, 1e-6));
  // f'(1) = 0 for f(l) = alpha l^{2-2a} - 2(1-a) l^alpha
  for (const ModelParams q : {m, ModelParams{2, 0.25, 4.0, 1.0}, ModelParams{1, 0.5, 7.0, 1.0}}) {
    const double h = 1e-5;
    const double fd = (dilation_shape(q, 1.0 + h) - dilation_shape(q, 1.0 - h)) / (2.0 * h);
    CHECK_THAT(fd, WithinAbs(0.0, 1e-8));
  }
  SECTION("supercritical dilation lowers the energy") {
    const ModelParams m7{1, 0.0, 7.0, 1.0};
    const auto g = build_grid(1, default_r_max(m7), 4096, 1.0);
    const auto w = shoot_profile(m7, g).profile;
    const auto e = scaled_energy(m7, w, 1.1);
    const auto base = scaled_energy(m7, w, 1.0);
    CHECK(e.direct < base.direct);
    CHECK_THAT(e.direct, WithinRel(e.closed_form, 1e-5));
  }
}
