// Point interaction on a small 2D periodic lattice. The ground energy of a
// fixed attractive tau keeps falling as h shrinks; no continuum value is
// claimed, the renormalized closed form is printed alongside for scale.

#include <cmath>
#include <cstdio>

#include "hfqm/hfqm.hpp"

using namespace hfqm;

int main() {
  const double side = 4.0, tau = -2.0;
  std::printf("%4s %8s %14s\n", "n", "h", "E_ground");
  for (std::size_t n : {9u, 15u, 21u, 27u}) {
    const double h = side / static_cast<double>(n);
    auto hm = assemble_hamiltonian_2d(make_grid(n, h), LaplacianVariant::compact, tau);
    std::printf("%4zu %8.4f %14.6f\n", n, h, linalg::lowest_eigenvalues(hm.matrix, 1).front());
    std::fflush(stdout);
  }
  std::printf("closed form: N_2D(2 pi^3) = %.17g, E_ren(4 pi, 1) = %.12f\n",
              oracle::n_bound_2d(2 * std::pow(std::numbers::pi, 3)), oracle::e2d_renormalized(4 * std::numbers::pi, 1.0));
}
