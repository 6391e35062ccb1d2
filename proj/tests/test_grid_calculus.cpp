#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hfqm/derivative.hpp"
#include "hfqm/grid.hpp"
#include "support.hpp"

using namespace hfqm;

TEST_CASE("make_grid", "[grid]") {
  auto g = make_grid(5, 0.5);
  const std::vector<double> pts{-1.0, -0.5, 0.0, 0.5, 1.0};
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(g->point(j) == pts[j]);
    CHECK(g->weight(j) == 0.5);
  }
  double sum = 0.0;
  for (double d : g->weights()) sum += d;
  CHECK(sum == 2.5);
  CHECK(g->circumference() == 2.5);
  CHECK(g->origin() == 2);
  CHECK_THROWS(make_grid(4, 0.5));
  CHECK_THROWS(make_grid(5, 0.0));
  CHECK_THROWS(make_grid(5, -1.0));
  CHECK_THROWS(make_grid(1, 1.0));
}

TEST_CASE("embed", "[grid]") {
  auto g = make_grid(5, 0.5);
  auto u = embed([](double x) { return 1.0 / std::abs(x); }, g, nonzero_point);
  CHECK(u[2] == 0.0);
  CHECK(u[0] == 1.0);
  auto sq = embed([](double x) { return x * x; }, g);
  const std::vector<double> want{1.0, 0.25, 0.0, 0.25, 1.0};
  for (std::size_t j = 0; j < 5; ++j) CHECK(sq[j] == want[j]);
  auto step = embed([](double x) { return x >= 0.0 ? 1.0 : 0.0; }, g);
  CHECK(step[0] == 0.0);
  CHECK(step[2] == 1.0);
  CHECK(step[4] == 1.0);
  CHECK_THROWS(embed([](double x) { return 1.0 / x; }, g));
}

TEST_CASE("pointwise integral", "[grid]") {
  auto g = make_grid(5, 0.5);
  CHECK(pointwise_integral(indicator(g, 3)) == 0.5);
  auto g2 = make_grid(201, 0.01);
  auto u = embed([](double x) { return x * x; }, g2);
  const double exact = testing_support::simpson([](double x) { return x * x; }, -1.0, 1.0);
  CHECK(std::abs(exact - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(pointwise_integral(u) - exact) < 0.02);
  CHECK(pointwise_integral(embed([](double x) { return x; }, g2)) == 0.0);
}

TEST_CASE("inner product and delta basis", "[grid]") {
  auto g = make_grid(11, 0.3);
  for (std::size_t a = 0; a < 11; ++a)
    for (std::size_t b = 0; b < 11; ++b) CHECK(inner_product(sqrt_delta(g, a), sqrt_delta(g, b)) == (a == b ? 1.0 : 0.0));

  auto big = make_grid(1001, 0.01);
  const double c = big->circumference();
  auto s = embed([c](double x) { return std::sin(2 * std::numbers::pi * x / c); }, big);
  auto co = embed([c](double x) { return std::cos(2 * std::numbers::pi * x / c); }, big);
  CHECK(std::abs(inner_product(s, co)) < 1e-12);

  auto gen = testing_support::rng(10);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 50; ++t) {
    RealGridFunction u(g);
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = nd(gen);
    CHECK(inner_product(u, u) > 0.0);
  }
  CHECK(inner_product(RealGridFunction(g), RealGridFunction(g)) == 0.0);
  CHECK_THROWS_AS(inner_product(RealGridFunction(g), RealGridFunction(make_grid(11, 0.2))), GridMismatch);
}

TEST_CASE("complex inner product conjugates the second argument", "[grid]") {
  auto g = make_grid(3, 1.0);
  using cd = std::complex<double>;
  ComplexGridFunction u(g, {cd(0, 1), 0, 0});
  ComplexGridFunction v(g, {cd(1, 0), 0, 0});
  CHECK(inner_product(u, v) == cd(0, 1));
  CHECK(inner_product(v, u) == cd(0, -1));
}

TEST_CASE("delta reproduces point values", "[grid]") {
  auto g = make_grid(21, 0.37);
  auto gen = testing_support::rng(11);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  RealGridFunction u(g);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = ud(gen);
  for (std::size_t a = 0; a < g->size(); ++a) {
    CHECK(integrate_product(delta(g, a), u) == u[a]);
    CHECK(integrate_product(u, delta(g, a)) == u[a]);
    CHECK(delta(g, a)[a] == 1.0 / g->weight(a));
  }
  auto d0 = delta(g, g->origin());
  CHECK(integrate_product(d0, d0) == 1.0 / g->weight(g->origin()));
  const double r = 1.0 / g->weight(g->origin());
  CHECK(multiply(d0, d0)[g->origin()] == r * r);
}

TEST_CASE("multiply", "[grid]") {
  auto g = make_grid(7, 0.5);
  auto u = embed([](double x) { return std::exp(x); }, g);
  auto one = embed([](double) { return 1.0; }, g);
  auto p = multiply(u, one);
  for (std::size_t j = 0; j < 7; ++j) CHECK(p[j] == u[j]);
  auto z = multiply(indicator(g, 1), indicator(g, 2));
  for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("reconstruction and Parseval over the delta basis", "[grid][property]") {
  auto gen = testing_support::rng(12);
  std::uniform_real_distribution<double> ud(-3.0, 3.0);
  for (std::size_t n : {5u, 31u, 101u}) {
    auto g = make_grid(n, 0.25);  // 1/sqrt(d) = 2: every product is exact
    RealGridFunction u(g);
    for (std::size_t j = 0; j < n; ++j) u[j] = std::ldexp(std::round(ud(gen) * 64), -6);
    auto r = reconstruct_from_deltas(u);
    for (std::size_t j = 0; j < n; ++j) CHECK(r[j] == u[j]);
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      const double c = inner_product(u, sqrt_delta(g, a));
      s += c * c;
    }
    CHECK(s == inner_product(u, u));
  }
}

TEST_CASE("numerosity", "[grid]") {
  auto g = make_grid(5, 0.5);
  CHECK(numerosity(*g, [](double x) { return x == 0.0 || x == 0.5; }) == 2);
  CHECK(numerosity(*g, [](double) { return false; }) == 0);
  CHECK(numerosity(*g, [](double) { return true; }) == 5);
}

TEST_CASE("derivative operator invariants", "[derivative]") {
  for (std::size_t n : {3u, 5u, 51u, 201u}) {
    auto g = make_grid(n, 0.05);
    auto d = build_derivative(g);
    CHECK(weighted_antisymmetry_defect(d.matrix(), *g) == 0.0);
    CHECK(d.bandwidth() == 1);
    CHECK(d.matrix().periodic_bandwidth() <= d.bandwidth());
    auto c = d(embed([](double) { return 3.25; }, g));
    for (double v : c) CHECK(v == 0.0);
    CHECK(d.matrix().at(0, 1) == 1.0 / (2 * 0.05));
    CHECK(d.matrix().at(0, n - 1) == -1.0 / (2 * 0.05));
  }
}

TEST_CASE("derivative null space is the constants for odd n", "[derivative]") {
  for (std::size_t n = 3; n <= 31; n += 2) {
    auto g = make_grid(n, 0.1);
    auto d = build_derivative(g).matrix();
    CHECK(testing_support::dense_rank(d.to_dense(), n, 1e-9) == n - 1);
    CHECK(circulant_nullity(d) == 1);
  }
  for (std::size_t n = 4; n <= 30; n += 2) {
    auto g = Grid::make_any_parity(n, 0.1);
    auto d = build_derivative(g).matrix();
    CHECK(testing_support::dense_rank(d.to_dense(), n, 1e-9) == n - 2);
  }
}

TEST_CASE("integration by parts", "[derivative][property]") {
  auto gen = testing_support::rng(13);
  std::normal_distribution<double> nd;
  for (std::size_t n : {51u, 201u, 1001u}) {
    auto g = make_grid(n, 0.05);
    auto d = build_derivative(g);
    for (int t = 0; t < 20; ++t) {
      RealGridFunction u(g), v(g);
      for (std::size_t j = 0; j < n; ++j) {
        u[j] = nd(gen);
        v[j] = nd(gen);
      }
      const double lhs = pointwise_integral(multiply(d(u), v)) + pointwise_integral(multiply(u, d(v)));
      CHECK(std::abs(lhs) <= 1e-13 * norm(u) * norm(v));
    }
  }
}

TEST_CASE("derivative consistency is second order", "[derivative]") {
  auto err = [](std::size_t n, double h) {
    auto g = make_grid(n, h);
    const double c = g->circumference();
    const double w = 2 * std::numbers::pi / c;
    auto du = build_derivative(g)(embed([w](double x) { return std::sin(w * x); }, g));
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) e = std::max(e, std::abs(du[j] - w * std::cos(w * g->point(j))));
    return e;
  };
  const double e1 = err(101, 0.1), e2 = err(201, 0.05), e3 = err(401, 0.025);
  CHECK(e1 / e2 >= 3.5);
  CHECK(e1 / e2 <= 4.5);
  CHECK(e2 / e3 >= 3.5);
  CHECK(e2 / e3 <= 4.5);
  CHECK(e1 <= 0.01);
}

TEST_CASE("laplacian spectra match circulant closed forms", "[derivative]") {
  const std::size_t n = 41;
  const double h = 0.2;
  auto g = make_grid(n, h);
  for (auto variant : {LaplacianVariant::compact, LaplacianVariant::paper_literal}) {
    auto m = laplacian(g, variant).scaled(-0.5);
    CHECK(is_circulant(m));
    CHECK(weighted_symmetry_defect(m, g->weights()) == 0.0);
    // Symbol of a symmetric circulant row: λ_m = Σ_k c_k cos(2π m k / n).
    for (std::size_t mm = 0; mm < n; ++mm) {
      double lam = 0.0;
      for (const auto& e : m.row(0)) lam += e.value * std::cos(2 * std::numbers::pi * double(mm * e.col % n) / n);
      const double s1 = std::sin(std::numbers::pi * mm / n), s2 = std::sin(2 * std::numbers::pi * mm / n);
      const double want = variant == LaplacianVariant::compact ? 2.0 / (h * h) * s1 * s1 : s2 * s2 / (2 * h * h);
      CHECK(std::abs(lam - want) <= 1e-12 * (1.0 / (h * h)));
    }
  }
  CHECK(laplacian(g, LaplacianVariant::compact).periodic_bandwidth() == 1);
  CHECK(laplacian(g, LaplacianVariant::paper_literal).periodic_bandwidth() == 2);
}

TEST_CASE("compact laplacian of a quadratic is exactly 2 away from the seam", "[derivative]") {
  auto g = make_grid(21, 0.25);
  auto u = embed([](double x) { return x * x; }, g);
  auto lu = laplacian(g, LaplacianVariant::compact).apply<double>(u.values());
  for (std::size_t j = 1; j + 1 < 21; ++j) CHECK(lu[j] == 2.0);
}

TEST_CASE("laplacians are negative semidefinite", "[derivative][property]") {
  auto gen = testing_support::rng(14);
  std::normal_distribution<double> nd;
  auto g = make_grid(101, 0.1);
  for (auto variant : {LaplacianVariant::compact, LaplacianVariant::paper_literal}) {
    auto m = laplacian(g, variant);
    for (int t = 0; t < 50; ++t) {
      RealGridFunction u(g);
      for (std::size_t j = 0; j < u.size(); ++j) u[j] = nd(gen);
      RealGridFunction lu(g, m.apply<double>(u.values()));
      CHECK(inner_product(lu, u) <= 1e-10 * inner_product(u, u) / (0.01));
    }
  }
}

TEST_CASE("pointwise integral extends the Riemann integral", "[grid][property]") {
  auto f = [](double x) { return std::abs(x) < 1.0 ? (1.0 - x * x) * (1.0 - x * x) : 0.0; };
  const double exact = testing_support::simpson(f, -1.0, 1.0);
  double prev = 1e9;
  for (std::size_t n : {41u, 81u, 161u, 321u}) {
    const double h = 4.0 / (n - 1) * 1.5;
    const double e = std::abs(pointwise_integral(embed(f, make_grid(n, h))) - exact);
    CHECK(e <= prev);
    prev = e;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("Euclidean-valued grid functions", "[grid]") {
  auto g = make_grid(5, 0.5);
  GridFunction<EuclideanScalar> u(g);
  u[2] = EuclideanScalar::monomial(1.0, -1);
  auto s = pointwise_integral(u);
  CHECK(s == EuclideanScalar::monomial(0.5, -1));
  CHECK(classify(s).infinite());
}
