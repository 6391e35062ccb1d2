// Repulsive point interaction in a box |x| < 5 (walls of height 1e6).
// Even levels are compared with roots of k cot(kL) = -tau, odd levels with
// the Dirichlet values (m pi / L)^2 / 2, which the barrier cannot see.

#include <cmath>
#include <cstdio>
#include <vector>

#include "hfqm/hfqm.hpp"

using namespace hfqm;

int main() {
  const double L = 5.0, tau = 3.0, h = 0.01;
  auto g = make_grid(1101, h);
  auto dec = eigendecompose(assemble_hamiltonian(
      g, LaplacianVariant::compact, Potential::delta_at(g->origin(), tau) + box_walls(L, 1e6)));

  std::vector<double> even, odd;
  for (std::size_t j = 0; even.size() < 4 || odd.size() < 4; ++j) {
    double s = 0.0;
    for (std::size_t a = 0; a < g->size(); ++a) s += dec.eigenvectors[j][a] * dec.eigenvectors[j][g->mirror(a)];
    (s > 0 ? even : odd).push_back(dec.eigenvalues[j]);
  }
  auto roots = oracle::box_spectrum({L, tau, oracle::Sign::barrier, oracle::Parity::even}, 4);
  auto dir = oracle::odd_dirichlet(L, 4);
  std::printf("%3s %12s %12s   %12s %12s\n", "m", "even grid", "even exact", "odd grid", "odd exact");
  for (std::size_t m = 0; m < 4; ++m)
    std::printf("%3zu %12.6f %12.6f   %12.6f %12.6f\n", m, even[m], roots[m].energy, odd[m], dir[m].energy);
}
