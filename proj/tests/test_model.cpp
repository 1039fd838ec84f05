#include "catch_amalgamated.hpp"

#include <cmath>

#include "degenls/functionals.hpp"
#include "degenls/ground_state.hpp"
#include "degenls/model.hpp"

using namespace degenls;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("existence window arithmetic", "[model]") {
  CHECK(exists_window({1, 0.0, 3.0, 1.0}));
  CHECK_FALSE(exists_window({3, 0.5, 5.0, 1.0}));
  CHECK(exists_window({2, 0.5, 2.5, 1.0}));
  CHECK_THROWS_AS(require_window({3, 0.5, 5.0, 1.0}), Error);
  try {
    require_window({3, 0.5, 5.0, 1.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ExistenceWindow);
  }
}

TEST_CASE("structural parameter checks", "[model]") {
  CHECK_THROWS(check_params({0, 0.0, 3.0, 1.0}));
  CHECK_THROWS(check_params({1, 1.0, 3.0, 1.0}));
  CHECK_THROWS(check_params({1, -0.1, 3.0, 1.0}));
  CHECK_THROWS(check_params({1, 0.0, 1.0, 1.0}));
  CHECK_THROWS(check_params({1, 0.0, 3.0, 0.0}));
}

TEST_CASE("threshold classification", "[model]") {
  const auto s = classify_by_threshold({1, 0.0, 3.0, 1.0});
  CHECK(s.verdict == Verdict::Stable);
  CHECK_THAT(s.threshold, WithinAbs(5.0, 1e-15));
  CHECK(classify_by_threshold({1, 0.0, 7.0, 1.0}).verdict == Verdict::Unstable);
  CHECK(classify_by_threshold({1, 0.0, 5.0, 1.0}).verdict == Verdict::Degenerate);
  CHECK_THAT(critical_power({1, 0.5, 2.0, 1.0}), WithinAbs(3.0, 1e-15));
  CHECK_THAT(critical_power({1, 0.25, 2.0, 1.0}), WithinAbs(4.0, 1e-15));
}

TEST_CASE("closed-form exponents", "[model]") {
  const ModelParams m{1, 0.0, 3.0, 1.0};
  CHECK_THAT(mass_exponent(m), WithinAbs(0.5, 1e-15));
  CHECK_THAT(virial_alpha(m), WithinAbs(1.0, 1e-15));
  CHECK_THAT(pohozaev_coefficient(m), WithinAbs(0.25, 1e-15));
  CHECK_THAT(effective_dimension({2, 0.5, 2.0, 1.0}), WithinAbs(4.0, 1e-15));
  CHECK_THAT(default_gamma(0.75), WithinAbs(4.0, 1e-15));
}

TEST_CASE("omega rescaling", "[model]") {
  const ModelParams m1{1, 0.0, 3.0, 1.0};
  const auto grid = build_grid(1, 30.0, 4096, 1.0);
  const auto shot = shoot_profile(m1, grid);
  const double mass1 = evaluate_identities(m1, shot.profile).mass;
  REQUIRE_THAT(mass1, WithinRel(4.0, 1e-8));

  SECTION("unit frequency is the identity") {
    const auto same = omega_rescale(shot.profile, m1);
    for (std::size_t i = 0; i < same.values.size(); i += 97) {
      CHECK(same.values[i] == shot.profile.values[i]);
      CHECK(same.grid->node(static_cast<int>(i)) == grid->node(static_cast<int>(i)));
    }
  }
  SECTION("mass law at omega = 4") {
    const ModelParams m4{1, 0.0, 3.0, 4.0};
    const auto r = omega_rescale(shot.profile, m4);
    CHECK_THAT(evaluate_identities(m4, r).mass, WithinRel(8.0, 1e-8));
  }
  SECTION("mass ratio follows the exponent for a degenerate model") {
    const ModelParams ma{2, 0.5, 2.5, 1.0};
    const auto g = build_grid(2, default_r_max(ma), 4096, default_gamma(0.5));
    const auto s = shoot_profile(ma, g);
    const ModelParams mb{2, 0.5, 2.5, 2.5};
    const double ratio = evaluate_identities(mb, omega_rescale(s.profile, mb)).mass /
                         evaluate_identities(ma, s.profile).mass;
    CHECK_THAT(ratio, WithinRel(std::pow(2.5, mass_exponent(ma)), 1e-10));
  }
  SECTION("interpolated onto a target grid") {
    const ModelParams m4{1, 0.0, 3.0, 4.0};
    const auto target = build_grid(1, 15.0, 4096, 1.0);
    const auto r = omega_rescale(shot.profile, m4, target);
    double err = 0.0;
    for (int i = 0; i < target->size(); ++i) {
      const double x = target->node(i);
      err = std::max(err, std::abs(r.values[static_cast<std::size_t>(i)] - 2.0 * std::sqrt(2.0) / std::cosh(2.0 * x)));
    }
    CHECK(err < 1e-6);
  }
  SECTION("rejects a source not at unit frequency") {
    auto p = shot.profile;
    p.omega = 2.0;
    CHECK_THROWS_AS(omega_rescale(p, m1), Error);
  }
}
