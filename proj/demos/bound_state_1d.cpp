// Attractive point interaction on the periodic line: one bound state whose
// energy approaches -tau^2/2 as the grid refines, and whose shape matches
// sqrt(|tau|)·exp(-|tau||x|).

#include <cmath>
#include <cstdio>

#include "hfqm/hfqm.hpp"

using namespace hfqm;

int main() {
  const double tau = -2.0;
  std::printf("%8s %8s %14s %12s %10s\n", "n", "h", "E_min", "E + 2", "shape err");
  for (double h : {0.1, 0.05, 0.025, 0.0125}) {
    const auto n = 2 * static_cast<std::size_t>(std::lround(25.0 / h)) + 1;
    auto g = make_grid(n, h);
    auto hm = assemble_hamiltonian(g, LaplacianVariant::compact, Potential::delta_at(g->origin(), tau));
    auto dec = eigendecompose(hm);
    auto psi = dec.eigenfunction(0);
    if (psi[g->origin()] < 0) psi *= -1.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double exact = std::sqrt(-tau) * std::exp(tau * std::abs(g->point(j)));
      worst = std::max(worst, std::abs(psi[j] - exact));
    }
    std::printf("%8zu %8.4f %14.8f %12.3e %10.2e\n", n, h, dec.eigenvalues[0], dec.eigenvalues[0] + 2.0, worst);
  }
}
