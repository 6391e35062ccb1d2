// Physical versus ideal states: a Gaussian has finite kinetic energy, the
// delta-basis vector and the delta in a well do not.

#include <cmath>
#include <cstdio>
#include <variant>

#include "hfqm/hfqm.hpp"

using namespace hfqm;

namespace {

void show(const char* name, const StateClass& c) {
  const auto& w = std::get<EuclideanScalar>(c.witness);
  std::printf("%-22s %-9s <H> = %s\n", name, std::string(to_string(c.tag)).c_str(), w.to_string().c_str());
}

}  // namespace

int main() {
  SymbolicContext ctx{make_grid(801, 0.025), LaplacianVariant::compact};
  SmoothFunction gauss{[](double x) { return std::exp(-x * x); },
                       [](double x) { return (4 * x * x - 2) * std::exp(-x * x); }, "gauss"};
  show("gaussian", classify_state(SymbolicState::smooth(gauss), 0.0, ctx));
  show("sqrt delta at 0", classify_state(SymbolicState::sqrt_delta_at(0.0), 0.0, ctx));
  show("delta at 0, tau = -2", classify_state(SymbolicState::delta_at(0.0), -2.0, ctx));

  // Same question answered by refinement: E(h) for phi(x)/|x| grows like 1/h^p.
  std::vector<EnergySample> net;
  for (double h : {0.04, 0.02, 0.01}) {
    auto g = make_grid(2 * static_cast<std::size_t>(std::lround(8.0 / h)) + 1, h);
    auto kin = assemble_hamiltonian(g, LaplacianVariant::compact, Potential{});
    auto u = embed([h](double x) { return std::exp(-x * x) / std::max(std::abs(x), h); }, g);
    net.push_back({h, energy_expectation(kin, u)});
    std::printf("  h = %-6g <H> = %.4f\n", h, net.back().energy);
  }
  auto c = classify_state(net);
  std::printf("exp(-x^2)/|x| by refinement: %s (%s)\n", std::string(to_string(c.tag)).c_str(), c.note.c_str());
}
