#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hfqm/analytic_oracle.hpp"
#include "hfqm/stages.hpp"

using namespace hfqm;

namespace {

Net make_net(const std::vector<double>& scales, const std::function<double(double)>& f) {
  std::vector<std::string> labels;
  for (double s : scales) labels.push_back("s=" + std::to_string(s));
  return run_indexed_net(labels, scales, [&](std::size_t k) { return f(scales[k]); });
}

std::vector<double> inverse_counts() {
  std::vector<double> s;
  for (double n = 10; n <= 1280; n *= 2) s.push_back(1.0 / n);
  return s;
}

}  // namespace

TEST_CASE("constant and infinitesimal nets", "[stages]") {
  // ∮χ_0 with d fixed: the same value on every stage.
  std::vector<Stage> stages{{51, 0.05}, {201, 0.05}, {1001, 0.05}};
  auto net = run_net(stages, [](const GridPtr& g) { return pointwise_integral(indicator(g, g->origin())); });
  for (double v : net.values()) CHECK(v == 0.05);
  auto est = estimate_limit(net, 1e-12);
  CHECK(est.value == 0.05);
  CHECK(est.converged);
  CHECK_FALSE(est.rate.has_value());
  CHECK(net.entries[1].scale == 1.0 / 201);

  auto inv = make_net(inverse_counts(), [](double s) { return s; });
  for (const auto& e : inv.entries) CHECK(e.value == e.scale);
  est = estimate_limit(inv, 1e-2);
  CHECK(est.converged);
  CHECK(est.extrapolated);
  CHECK(std::abs(est.value) <= 1e-15);
  REQUIRE(est.rate.has_value());
  CHECK(*est.rate == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("an oscillating net has no Cauchy limit", "[stages]") {
  const auto scales = inverse_counts();
  std::vector<std::string> labels(scales.size(), "n");
  auto net = run_indexed_net(labels, scales, [](std::size_t k) { return k % 2 ? -1.0 : 1.0; });
  auto est = estimate_limit(net, 1e-6);
  CHECK_FALSE(est.converged);
  CHECK_FALSE(est.extrapolated);
  CHECK(est.value == net.values().back());
}

TEST_CASE("eventually constant nets return the constant exactly", "[stages][property]") {
  for (double c : {-3.5, 0.0, 1.0 / 3.0, 1e10}) {
    auto net = make_net(inverse_counts(), [c](double s) { return s > 0.02 ? c + s : c; });
    auto est = estimate_limit(net, 1e-14);
    CHECK(est.value == c);
    CHECK(est.converged);
  }
}

TEST_CASE("limit estimation respects sums and products", "[stages][property]") {
  const double tol = 1e-3;
  auto a = [](double s) { return 1.0 + s; };
  auto b = [](double s) { return 2.0 - 3.0 * s * s; };
  auto ea = estimate_limit(make_net(inverse_counts(), a), tol);
  auto eb = estimate_limit(make_net(inverse_counts(), b), tol);
  auto es = estimate_limit(make_net(inverse_counts(), [&](double s) { return a(s) + b(s); }), tol);
  auto ep = estimate_limit(make_net(inverse_counts(), [&](double s) { return a(s) * b(s); }), tol);
  REQUIRE(ea.converged);
  REQUIRE(eb.converged);
  CHECK(std::abs(es.value - (ea.value + eb.value)) <= 2 * tol);
  CHECK(std::abs(ep.value - ea.value * eb.value) <= 2 * tol);
}

TEST_CASE("free ground energy is zero on every stage", "[stages]") {
  std::vector<Stage> stages{{101, 0.1}, {201, 0.05}, {401, 0.025}};
  auto net = run_net(stages, [](const GridPtr& g) { return ground_energy(g, LaplacianVariant::compact, Potential{}); });
  for (double v : net.values()) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("bound-state refinement net converges at order at least one", "[stages]") {
  std::vector<Stage> stages{{501, 0.1}, {1001, 0.05}, {2001, 0.025}, {4001, 0.0125}};
  auto net = run_net(stages, [](const GridPtr& g) {
    return ground_energy(g, LaplacianVariant::compact, Potential::delta_at(g->origin(), -2.0));
  });
  auto v = net.values();
  for (std::size_t k = 2; k < v.size(); ++k) CHECK(std::abs(v[k] - v[k - 1]) < std::abs(v[k - 1] - v[k - 2]));
  auto est = estimate_limit(net, 1e-3);
  REQUIRE(est.rate.has_value());
  CHECK(*est.rate >= 1.0);
  CHECK(std::abs(est.value + 2.0) <= 1e-3);
}

TEST_CASE("approximation net of square wells", "[stages]") {
  const Stage stage{2001, 0.025};
  const std::vector<double> widths{0.4, 0.2, 0.1, 0.05};
  auto net = approximation_net(-2.0, widths, stage);
  auto g = Grid::make(stage);
  const double e_delta = ground_energy(g, LaplacianVariant::compact, Potential::delta_at(g->origin(), -2.0));
  double prev = INFINITY;
  for (double v : net.values()) {
    CHECK(std::abs(v - e_delta) < prev);
    prev = std::abs(v - e_delta);
  }
  // The grid follows the continuum thin well, which itself sits O(|τ|·w)
  // above the delta value at these widths.
  for (std::size_t k = 0; k < widths.size(); ++k) {
    oracle::SquareWellProblem p{25.0, widths[k], 1.0 / widths[k], oracle::Sign::well};
    const double cont = oracle::square_well_spectrum(p, oracle::Parity::even, 1)[0].energy;
    CHECK(std::abs(net.entries[k].value - cont) <= 0.01 * std::abs(cont));
  }
  auto est = estimate_limit(net, 0.05);

  // Narrower wells on a finer stage bring the terminal value within 2%.
  auto fine = approximation_net(-2.0, {0.05, 0.025, 0.0125, 0.00625}, {4001, 0.00625});
  CHECK(std::abs(estimate_limit(fine, 0.05).value + 2.0) / 2.0 <= 0.02);

  // Sum of two converging nets.
  auto other = approximation_net(-1.0, widths, stage);
  std::vector<std::string> labels(widths.size(), "w");
  auto sum = run_indexed_net(labels, widths,
                             [&](std::size_t k) { return net.entries[k].value + other.entries[k].value; });
  const double tol = 0.05;
  CHECK(std::abs(estimate_limit(sum, tol).value - (est.value + estimate_limit(other, tol).value)) <= 2 * tol);

  CHECK_THROWS_AS(approximation_net(-2.0, {0.1, 0.2, 0.05}, stage), std::invalid_argument);
  auto coarse = approximation_net(-2.0, {0.4, 0.2, 0.1, 0.01}, stage);
  CHECK_FALSE(coarse.entries.back().ok);
  CHECK(coarse.entries.back().error.find("below the grid spacing") != std::string::npos);
}

TEST_CASE("chi potential shift vanishes linearly in h", "[stages]") {
  // The shift is ≈ h/C once h·C ≪ 1, so the ring is kept short.
  std::vector<Stage> stages{{401, 0.025}, {801, 0.0125}, {1601, 0.00625}};
  auto net = chi_potential_net(stages);
  auto v = net.values();
  CHECK(v[0] > v[1]);
  CHECK(v[1] > v[2]);
  auto est = estimate_limit(net, 1e-3);
  REQUIRE(est.rate.has_value());
  CHECK(*est.rate == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("stage validation, budget and failures", "[stages]") {
  auto flat = [](const GridPtr&) { return 1.0; };
  CHECK_THROWS_AS(run_net({{101, 0.1}, {51, 0.1}, {201, 0.1}}, flat), std::invalid_argument);
  CHECK_THROWS_AS(run_net({{101, 0.1}, {101, 0.1}, {201, 0.1}}, flat), std::invalid_argument);

  auto net = run_net({{101, 0.1}, {201, 0.1}, {401, 0.1}, {4003, 0.1}}, flat);
  CHECK_FALSE(net.entries.back().ok);
  CHECK(net.entries.back().error.find("budget") != std::string::npos);
  CHECK(net.successful().size() == 3);
  CHECK_THROWS_AS(run_net({{101, 0.1}, {4003, 0.1}, {4005, 0.1}}, flat), NetFailure);

  auto bad = run_net({{11, 0.1}, {21, 0.1}, {31, 0.1}, {41, 0.1}}, [](const GridPtr& g) {
    if (g->size() == 21) throw SolverError("stage failed");
    return 1.0 * g->size();
  });
  CHECK(bad.entries[1].error == "stage failed");
  CHECK(bad.values() == std::vector<double>{11.0, 31.0, 41.0});
  CHECK_THROWS_AS(estimate_limit(Net{}, 1.0), std::invalid_argument);
}

TEST_CASE("concurrent nets are deterministic", "[stages]") {
  std::vector<Stage> stages{{201, 0.1}, {401, 0.05}, {801, 0.025}, {1601, 0.0125}};
  auto problem = [](const GridPtr& g) {
    return ground_energy(g, LaplacianVariant::compact, Potential::delta_at(g->origin(), -1.0));
  };
  auto serial = run_net(stages, problem, {1, 3});
  auto parallel = run_net(stages, problem, {4, 3});
  CHECK(serial.values() == parallel.values());
}
