#include "catch_amalgamated.hpp"

#include <cmath>
#include <numeric>

#include "degenls/discretization.hpp"
#include "degenls/grid.hpp"
#include "degenls/linalg.hpp"

using namespace degenls;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
double volume_total(const RadialGrid& g) {
  const auto w = g.volumes();
  return std::accumulate(w.begin(), w.end(), 0.0);
}
}  // namespace

TEST_CASE("grid construction", "[grid]") {
  SECTION("uniform one-dimensional grid") {
    const auto g = build_grid(1, 10.0, 16, 1.0);
    CHECK_THAT(volume_total(*g), WithinRel(10.0, 1e-14));
    const double h = 10.0 / 16;
    for (int i = 0; i < 16; ++i) {
      CHECK_THAT(g->node(i), WithinAbs((i + 0.5) * h, 1e-13));
      CHECK_THAT(g->edges()[static_cast<std::size_t>(i)], WithinAbs(i * h, 1e-13));
    }
  }
  SECTION("volumes telescope to R^d / d") {
    for (double gamma : {1.0, 1.5, 4.0}) {
      const auto g = build_grid(3, 7.0, 300, gamma);
      CHECK_THAT(volume_total(*g), WithinRel(7.0 * 7.0 * 7.0 / 3.0, 1e-12));
    }
  }
  SECTION("power-law placement with gamma = 2 (cell-centred nodes)") {
    const auto g = build_grid(1, 1.0, 1024, 2.0);
    // nodes at ((i + 1/2) / N)^gamma: first ratio (1/3)^2
    CHECK_THAT(g->node(0) / g->node(1), WithinRel(1.0 / 9.0, 1e-12));
    CHECK_THAT(g->node(500) / g->node(1000), WithinRel(std::pow(500.5 / 1000.5, 2.0), 1e-12));
  }
  SECTION("preconditions") {
    CHECK_THROWS_AS(build_grid(1, 10.0, 10, 1.0), Error);
    CHECK_THROWS_AS(build_grid(1, -1.0, 64, 1.0), Error);
    CHECK_THROWS_AS(build_grid(1, 10.0, 64, 0.5), Error);
    CHECK_THROWS_AS(build_grid(0, 10.0, 64, 1.0), Error);
  }
}

TEST_CASE("radial quadrature", "[grid]") {
  // int_0^R rho^{d-1} e^{-rho^2} for d = 2: (1 - e^{-R^2}) / 2
  const auto g = build_grid(2, 8.0, 2048, 2.0);
  std::vector<double> f(static_cast<std::size_t>(g->size()));
  for (int i = 0; i < g->size(); ++i) f[static_cast<std::size_t>(i)] = std::exp(-g->node(i) * g->node(i));
  CHECK_THAT(radial_integral(*g, f), WithinRel(0.5, 1e-9));
  // non-integer effective power: gamma = 4/3 on d = 1
  const auto h = build_grid(1, 20.0, 2048, 4.0 / 3.0);
  std::vector<double> e(static_cast<std::size_t>(h->size()));
  for (int i = 0; i < h->size(); ++i) e[static_cast<std::size_t>(i)] = std::exp(-h->node(i));
  CHECK_THAT(radial_integral(*h, e), WithinRel(1.0 - std::exp(-20.0), 2e-8));
}

TEST_CASE("operator assembly", "[discretization]") {
  const auto g = build_grid(2, 10.0, 256, 1.5);
  SECTION("constant vector has zero net flux on interior rows") {
    for (double a : {0.0, 0.3, 0.75}) {
      const auto op = assemble_operator(g, a, Sector::even());
      const std::vector<double> one(256, 1.0);
      const auto r = op.apply(one);
      for (int i = 0; i + 1 < 256; ++i) CHECK_THAT(r[static_cast<std::size_t>(i)], WithinAbs(0.0, 1e-10));
      CHECK(r.back() > 0.0);  // Dirichlet closure at R_max
    }
  }
  SECTION("a = 0, d = 1 reduces to the second difference with Neumann origin") {
    const auto u = build_grid(1, 16.0, 64, 1.0);
    const auto op = assemble_operator(u, 0.0, Sector::even());
    const double h = 16.0 / 64;
    const auto d = op.diag();
    const auto lo = op.sub_diag();
    const auto up = op.super_diag();
    CHECK_THAT(d[0], WithinRel(1.0 / (h * h), 1e-12));
    for (int i = 1; i < 63; ++i) {
      CHECK_THAT(d[static_cast<std::size_t>(i)], WithinRel(2.0 / (h * h), 1e-12));
      CHECK_THAT(lo[static_cast<std::size_t>(i - 1)], WithinRel(-1.0 / (h * h), 1e-12));
      CHECK_THAT(up[static_cast<std::size_t>(i)], WithinRel(-1.0 / (h * h), 1e-12));
    }
  }
  SECTION("symmetric form has the same spectrum as a positive operator") {
    const auto op = assemble_operator(g, 0.25, Sector::radial(2), std::vector<double>(256, 1.0));
    std::vector<double> dd, off;
    op.symmetric_form(dd, off);
    CHECK(linalg::count_below(dd, off, 0.0) == 0);
  }
  SECTION("sector validation") {
    CHECK_THROWS_AS(assemble_operator(g, 0.0, Sector::odd()), Error);
    CHECK_THROWS_AS(assemble_operator(g, 0.0, Sector::even(), std::vector<double>(5, 0.0)), Error);
    CHECK(sector_multiplicity(3, Sector::radial(2)) == 5);
    CHECK(sector_multiplicity(2, Sector::radial(3)) == 2);
    CHECK(sectors_up_to(1, 3).size() == 2);
    CHECK(sectors_up_to(3, 3).size() == 4);
  }
}

TEST_CASE("weighted inner product and gradient energy", "[discretization]") {
  const auto g = build_grid(3, 5.0, 512, 1.0);
  const std::vector<double> one(512, 1.0);
  CHECK_THAT(weighted_inner(*g, one, one), WithinRel(125.0 / 3.0, 1e-12));
  CHECK(gradient_energy(*g, 0.4, one) == 0.0);

  const auto h = build_grid(1, 20.0, 4096, 1.0);
  std::vector<double> sech(4096);
  for (int i = 0; i < 4096; ++i) sech[static_cast<std::size_t>(i)] = std::sqrt(2.0) / std::cosh(h->node(i));
  CHECK_THAT(gradient_energy(*h, 0.0, sech), WithinAbs(2.0 / 3.0, 1e-4));
  // the quadratic form equals interior plus boundary energy
  const auto op = assemble_operator(h, 0.0, Sector::even());
  const double q = op.quadratic_form(sech);
  CHECK_THAT(q, WithinRel(gradient_energy(*h, 0.0, sech) + boundary_energy(*h, 0.0, std::span<const double>(sech)), 1e-12));
}

TEST_CASE("tridiagonal kernels", "[linalg]") {
  const std::vector<double> sub{1.0, 1.0, 1.0}, diag{4.0, 4.0, 4.0, 4.0}, sup{1.0, 1.0, 1.0};
  const std::vector<double> rhs{5.0, 6.0, 6.0, 5.0};
  const auto x = linalg::solve_tridiagonal(sub, diag, sup, rhs);
  for (double v : x) CHECK_THAT(v, WithinAbs(1.0, 1e-14));
  // eigenvalues of tridiag(-1, 2, -1), n = 4: 2 - 2 cos(k pi / 5)
  const std::vector<double> d2{2.0, 2.0, 2.0, 2.0}, o2{-1.0, -1.0, -1.0};
  const auto ep = linalg::smallest_eigenpairs(d2, o2, 2);
  CHECK_THAT(ep.values[0], WithinAbs(2.0 - 2.0 * std::cos(M_PI / 5.0), 1e-13));
  CHECK_THAT(ep.values[1], WithinAbs(2.0 - 2.0 * std::cos(2.0 * M_PI / 5.0), 1e-13));
  CHECK(linalg::count_below(d2, o2, 1.0) == 1);
  CHECK(linalg::count_below(d2, o2, 1.5) == 2);
}
