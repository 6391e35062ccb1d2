#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hfqm/distributions.hpp"
#include "support.hpp"

using namespace hfqm;
using E = EuclideanScalar;

namespace {

SymbolicContext context() { return {make_grid(4001, 0.0005), LaplacianVariant::compact}; }

SmoothFunction quadratic() { return {[](double x) { return x * x; }, [](double) { return 2.0; }, "x^2"}; }

double quad_pairing(const std::function<double(double)>& f, const TestFunction& phi) {
  return testing_support::simpson([&](double x) { return f(x) * phi(x); }, phi.center - phi.radius,
                                  phi.center + phi.radius);
}

}  // namespace

TEST_CASE("test family", "[distributions]") {
  auto fam = standard_test_family();
  CHECK(fam.size() == 5);
  for (const auto& phi : fam) {
    CHECK(phi(phi.center + phi.radius) == 0.0);
    CHECK(phi(phi.center) == Catch::Approx(phi.amplitude * std::exp(-1.0)));
    // Analytic second derivative against a central difference.
    const double x = phi.center + 0.3 * phi.radius, s = 1e-4;
    const double fd = (phi(x + s) - 2 * phi(x) + phi(x - s)) / (s * s);
    CHECK(phi.second_derivative(x) == Catch::Approx(fd).epsilon(1e-5));
  }
  auto g = make_grid(11, 0.1);
  CHECK_THROWS_AS(pairing(delta(g, 5), fam[0]), SupportViolation);
}

TEST_CASE("grid pairings", "[distributions]") {
  auto fam = standard_test_family();
  auto g = make_grid(17, 0.25);
  for (const auto& phi : fam) CHECK(pairing(delta(g, g->origin()), phi) == phi(0.0));

  auto fine = make_grid(2001, 0.001);
  auto f = embed([](double x) { return std::cos(3 * x); }, fine);
  for (const auto& phi : fam)
    CHECK(std::abs(pairing(f, phi) - quad_pairing([](double x) { return std::cos(3 * x); }, phi)) <= 1e-9);

  auto gen = testing_support::rng(40);
  auto u = embed([](double x) { return x; }, fine);
  auto v = delta(fine, 700);
  for (int t = 0; t < 20; ++t) {
    const double a = testing_support::dyadic(gen), b = testing_support::dyadic(gen);
    auto w = RealGridFunction(fine);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = a * u[j] + b * v[j];
    for (const auto& phi : fam) {
      const double lhs = pairing(w, phi);
      const double rhs = a * pairing(u, phi) + b * pairing(v, phi);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("boundedness and association, symbolic", "[distributions]") {
  auto ctx = context();
  auto fam = standard_test_family();
  const auto d0 = SymbolicState::delta_at(0.0);
  CHECK(is_bounded(d0, fam, ctx));
  CHECK(is_bounded(SymbolicState{}, fam, ctx));
  const auto big = SymbolicState::delta_at(0.0, E::monomial(1.0, -1));
  CHECK_FALSE(is_bounded(big, fam, ctx));
  CHECK_THROWS_AS(associate(big, fam[0], ctx), UnboundedPairing);

  for (const auto& phi : fam) {
    CHECK(associate(d0, phi, ctx) == phi(0.0));
    CHECK(associate(SymbolicState{}, phi, ctx) == 0.0);
    auto u = SymbolicState::smooth(quadratic()) + SymbolicState::delta_at(0.0, E::epsilon());
    CHECK(std::abs(associate(u, phi, ctx) - quad_pairing([](double x) { return x * x; }, phi)) <= 1e-9);
  }
}

TEST_CASE("boundedness on Euclidean-valued grid functions", "[distributions]") {
  auto g = make_grid(17, 0.25);
  auto fam = standard_test_family();
  GridFunction<E> u(g);
  u[g->origin()] = E::monomial(1.0, -1);
  CHECK_FALSE(is_bounded(u, fam));
  GridFunction<E> v(g);
  v[g->origin()] = E(4.0) + E::epsilon();
  CHECK(is_bounded(v, fam));
  CHECK(associate(v, fam[0]) == fam[0](0.0));
  GridFunction<E> w = v;
  w[3] += E::epsilon();
  CHECK(equivalent(v, w, fam));
}

TEST_CASE("equivalence of distributions", "[distributions]") {
  auto ctx = context();
  auto fam = standard_test_family();
  const auto f = SymbolicState::smooth(quadratic());
  CHECK(equivalent(f, f, fam, ctx));
  CHECK(equivalent(f, f + SymbolicState::delta_at(0.0, E::epsilon()), fam, ctx));
  SmoothFunction shifted{[](double x) { return x * x + 0.3; }, [](double) { return 2.0; }, "x^2+0.3"};
  CHECK_FALSE(equivalent(f, SymbolicState::smooth(shifted), fam, ctx));
  CHECK_FALSE(equivalent(SymbolicState::delta_at(0.0), SymbolicState::delta_at(0.1), fam, ctx));
}

TEST_CASE("equivalence is an equivalence relation on random samples", "[distributions][property]") {
  auto ctx = context();
  auto fam = standard_test_family();
  auto gen = testing_support::rng(41);
  std::uniform_int_distribution<int> pick(0, 3);
  auto sample = [&]() {
    SymbolicState s;
    switch (pick(gen)) {
      case 0: s = SymbolicState::smooth(quadratic()); break;
      case 1: s = SymbolicState::delta_at(0.0); break;
      case 2: s = SymbolicState::delta_at(0.25, E(2.0)); break;
      default: break;
    }
    if (pick(gen) < 2) s += SymbolicState::delta_at(-0.5, E::monomial(testing_support::dyadic(gen), 1 + pick(gen)));
    return s;
  };
  for (int t = 0; t < 60; ++t) {
    auto a = sample(), b = sample(), c = sample();
    CHECK(equivalent(a, a, fam, ctx));
    CHECK(equivalent(a, b, fam, ctx) == equivalent(b, a, fam, ctx));
    if (equivalent(a, b, fam, ctx) && equivalent(b, c, fam, ctx)) CHECK(equivalent(a, c, fam, ctx));
  }
}

TEST_CASE("association is linear on bounded inputs", "[distributions][property]") {
  auto ctx = context();
  auto fam = standard_test_family();
  auto gen = testing_support::rng(42);
  const auto u = SymbolicState::smooth(quadratic()) + SymbolicState::delta_at(0.2, E(1.5) + E::epsilon());
  const auto v = SymbolicState::delta_at(0.0, E(-2.0));
  for (int t = 0; t < 20; ++t) {
    const double a = testing_support::dyadic(gen), b = testing_support::dyadic(gen);
    const auto w = E(a) * u + E(b) * v;
    for (const auto& phi : fam) {
      const double rhs = a * associate(u, phi, ctx) + b * associate(v, phi, ctx);
      CHECK(std::abs(associate(w, phi, ctx) - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("connection to the standard equation", "[distributions]") {
  auto fam = standard_test_family();
  SECTION("exact grid eigenpair has a small weak residual") {
    auto g = make_grid(1001, 0.05);
    auto h = assemble_hamiltonian(g, LaplacianVariant::compact, Potential::delta_at(g->origin(), -2.0));
    auto dec = eigendecompose(h);
    auto rep = standard_connection_residual(h, dec.eigenfunction(0), dec.eigenvalues[0], fam);
    CHECK(rep.eigen_residual <= 1e-8);
    CHECK(rep.records.size() == fam.size());
  }
  SECTION("bound state approaches the oracle eigenfunction") {
    auto w = [](double x) { return std::sqrt(2.0) * std::exp(-2.0 * std::abs(x)); };
    double prev = INFINITY;
    for (std::size_t n : {501u, 1001u, 2001u}) {
      auto g = make_grid(n, 50.0 / static_cast<double>(n - 1));
      auto h = assemble_hamiltonian(g, LaplacianVariant::compact, Potential::delta_at(g->origin(), -2.0));
      auto dec = eigendecompose(h);
      const double m = oracle_mismatch(dec.eigenfunction(0), w, fam);
      CHECK(m < prev);
      prev = m;
    }
    CHECK(prev < 1e-2);
  }
  SECTION("free plane wave") {
    auto g = make_grid(1001, 0.05);
    const double c = g->circumference();
    auto dec = eigendecompose(assemble_hamiltonian(g, LaplacianVariant::compact, Potential{}));
    auto w = [c](double x) { return std::sqrt(2.0 / c) * std::cos(2.0 * std::numbers::pi * x / c); };
    auto psi = closest_in_eigenspace(dec, 1, w);
    CHECK(oracle_mismatch(psi, w, standard_test_family(10.0)) <= 1e-6);
  }
}
