#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hfqm/analytic_oracle.hpp"
#include "support.hpp"

using namespace hfqm;
using namespace hfqm::oracle;
using std::numbers::pi;

TEST_CASE("unique 1D bound state energy", "[oracle]") {
  CHECK(bound_state_energy_1d(2.0) == -2.0);
  CHECK(bound_state_energy_1d(1.0) == -0.5);
  CHECK_THROWS_AS(bound_state_energy_1d(0.0), std::invalid_argument);
}

TEST_CASE("finite-box bound state", "[oracle]") {
  const double k = finite_box_bound_k(5.0, 1.0);
  CHECK(std::abs(k / std::tanh(k * 5.0) - 1.0) <= 1e-12);
  CHECK(finite_box_sign_changes(5.0, 1.0) == 1);
  CHECK(finite_box_sign_changes(2.0, 3.0) == 1);

  // E(L) decreases monotonically toward -s²/2 as L doubles.
  double prev_gap = INFINITY, prev_e = 0.0;
  for (double L : {5.0, 10.0, 20.0, 40.0}) {
    const double e = finite_box_bound_energy(L, 1.0);
    const double gap = e + 0.5;
    CHECK(gap >= 0.0);
    CHECK((gap < prev_gap || gap == 0.0));
    if (L > 5.0) CHECK(e <= prev_e);
    prev_gap = gap;
    prev_e = e;
  }
  CHECK(prev_gap < 1e-12);
  // No bound state when s·L < 1.
  CHECK_THROWS_AS(finite_box_bound_k(0.5, 1.0), BracketError);
}

TEST_CASE("odd closed forms", "[oracle]") {
  auto b = box_spectrum({pi, 3.0, Sign::barrier, Parity::odd}, 3);
  CHECK(b[0].k == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(b[0].energy == Catch::Approx(0.5).epsilon(1e-15));
  CHECK(b[1].k == Catch::Approx(3.0).epsilon(1e-15));
  auto w = box_spectrum({pi, 3.0, Sign::well, Parity::odd}, 2);
  CHECK(w[0].k == Catch::Approx(2.0).epsilon(1e-15));
  CHECK(w[0].energy == Catch::Approx(2.0).epsilon(1e-15));
  CHECK(w[1].k == Catch::Approx(4.0).epsilon(1e-15));

  auto d = odd_dirichlet(2.0, 3);
  for (std::size_t m = 0; m < 3; ++m) CHECK(std::sin(d[m].k * 2.0) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("even box roots satisfy their equation", "[oracle][property]") {
  for (auto sign : {Sign::barrier, Sign::well})
    for (double s : {0.5, 3.0, 10.0}) {
      BoxProblem p{5.0, s, sign, Parity::even};
      auto roots = box_spectrum(p, 10);
      REQUIRE(roots.size() == 10);
      for (std::size_t j = 0; j < roots.size(); ++j) {
        CHECK(std::abs(even_residual(p, roots[j].k)) <= 1e-10);
        CHECK(roots[j].energy == 0.5 * roots[j].k * roots[j].k);
        if (j > 0) CHECK(roots[j].k > roots[j - 1].k);
      }
    }
  CHECK_THROWS_AS(box_spectrum({5.0, 3.0, Sign::barrier, Parity::even}, 0), std::invalid_argument);
  CHECK_THROWS_AS(box_spectrum({-1.0, 3.0, Sign::barrier, Parity::even}, 1), std::invalid_argument);
}

TEST_CASE("barrier parities interlace", "[oracle][property]") {
  // Even roots sit in ((j+½)π/L, (j+1)π/L); the Dirichlet odd levels are mπ/L.
  const double L = 5.0;
  auto even = box_spectrum({L, 3.0, Sign::barrier, Parity::even}, 10);
  auto odd = odd_dirichlet(L, 10);
  for (std::size_t j = 0; j < 10; ++j) {
    CHECK(even[j].k < odd[j].k);
    if (j + 1 < 10) CHECK(odd[j].k < even[j + 1].k);
  }
}

TEST_CASE("barrier even roots tend to free-box roots as the strength vanishes", "[oracle][property]") {
  const double L = 5.0;
  for (double s : {1e-2, 1e-4, 1e-6}) {
    auto roots = box_spectrum({L, s, Sign::barrier, Parity::even}, 6);
    for (std::size_t j = 0; j < roots.size(); ++j) {
      const double free_k = (static_cast<double>(j) + 0.5) * pi / L;
      // k ≈ k₀ + s/(k₀L) to first order.
      CHECK(std::abs(roots[j].k - free_k) <= 2.0 * s / (free_k * L));
    }
  }
}

TEST_CASE("square-well matching", "[oracle]") {
  SECTION("vanishing wall gives the free box") {
    SquareWellProblem p{5.0, 0.3, 1e-12, Sign::barrier};
    auto even = square_well_spectrum(p, Parity::even, 4);
    auto odd = square_well_spectrum(p, Parity::odd, 4);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(even[j].k == Catch::Approx((j + 0.5) * pi / 5.0).epsilon(1e-9));
      CHECK(odd[j].k == Catch::Approx((j + 1.0) * pi / 5.0).epsilon(1e-9));
    }
  }
  SECTION("fixed transparency net approaches the delta box") {
    const double target = box_spectrum({5.0, 3.0, Sign::barrier, Parity::even}, 1)[0].k;
    double prev = INFINITY;
    for (double w : {0.4, 0.2, 0.1, 0.05}) {
      SquareWellProblem p{5.0, w, 3.0 / (2.0 * w), Sign::barrier};
      CHECK(p.tau() == Catch::Approx(3.0));
      const auto k = square_well_spectrum(p, Parity::even, 1)[0].k;
      CHECK(std::abs(square_well_matching(p, Parity::even, k, false)) <= 1e-10);
      const double gap = std::abs(k - target);
      CHECK(gap < prev);
      prev = gap;
    }
  }
  SECTION("well bound state lies in (-V0, 0)") {
    SquareWellProblem p{5.0, 0.5, 2.0, Sign::well};
    auto s = square_well_spectrum(p, Parity::even, 1);
    REQUIRE(s.size() == 1);
    CHECK(s[0].bound);
    CHECK(s[0].energy > -2.0);
    CHECK(s[0].energy < 0.0);
    CHECK(std::abs(square_well_matching(p, Parity::even, s[0].k, true)) <= 1e-10);
  }
  SECTION("invalid wells") {
    CHECK_THROWS_AS(square_well_spectrum({5.0, 5.0, 1.0, Sign::well}, Parity::even, 1), std::invalid_argument);
    CHECK_THROWS_AS(square_well_spectrum({5.0, 0.1, 0.0, Sign::well}, Parity::even, 1), std::invalid_argument);
  }
}

TEST_CASE("normalization constants", "[oracle]") {
  auto n = normalization_and_origin(pi, 1.0, Parity::even);
  CHECK(n.A == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(n.psi0 == Catch::Approx(0.0).margin(1e-15));
  CHECK(normalization_and_origin(2.3, 1.7, Parity::odd).psi0 == 0.0);

  // The closed-form constants give unit norm on [-L, L].
  const double L = 5.0;
  const auto k = box_spectrum({L, 3.0, Sign::barrier, Parity::even}, 2)[1].k;
  auto f = even_eigenfunction(k, L);
  CHECK(testing_support::simpson([&](double x) { return f(x) * f(x); }, -L, L) == Catch::Approx(1.0).epsilon(1e-8));
  const double kb = finite_box_bound_k(L, 2.0);
  auto b = bound_eigenfunction(kb, L);
  CHECK(b(0.0) > 0.0);
  CHECK(testing_support::simpson([&](double x) { return b(x) * b(x); }, -L, L) == Catch::Approx(1.0).epsilon(1e-8));
  auto o = odd_eigenfunction(3.0 * pi / L, L);
  CHECK(o(0.0) == 0.0);
  CHECK(testing_support::simpson([&](double x) { return o(x) * o(x); }, -L, L) == Catch::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("multidimensional formulas", "[oracle]") {
  CHECK(n_bound_2d(2.0 * pi * pi * pi) == 2.0);
  CHECK(std::abs(e2d_renormalized(4.0 * pi, 1.0) + std::exp(-1.0)) <= 1e-12);
  CHECK(e2d_renormalized(4.0 * pi, 1.0) == Catch::Approx(-0.367879).margin(1e-6));
  for (double tau : {0.1, 1.0, 7.5}) CHECK(tau_renormalized(tau, 2.5, 2.5) == tau);
  CHECK(n_bound_3d(3.0, 0.1) == Catch::Approx(std::sqrt(3.0 * 3.0 / (2.0 * pi * 0.1)) / pi));
  CHECK(e2d_bare(2.0, 0.5) == Catch::Approx(-2.0 * std::exp(-pi)));
  CHECK_THROWS_AS(n_bound_2d(0.0), std::invalid_argument);
  CHECK_THROWS_AS(n_bound_3d(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(tau_renormalized(1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(e2d_renormalized(1.0, -1.0), std::invalid_argument);
}
