#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hfqm/euclidean_scalar.hpp"
#include "hfqm/seed.hpp"

namespace testing_support {

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(hfqm::seed_from_env() ^ (salt * 0x9e3779b97f4a7c15ULL)); }

/// Small dyadic coefficient k/4 with |k| <= 16, so sums and short products
/// are exact in binary floating point.
inline double dyadic(std::mt19937_64& g) {
  std::uniform_int_distribution<int> d(-16, 16);
  return d(g) / 4.0;
}

/// Random scalar with exponents in [lo, hi].
inline hfqm::EuclideanScalar random_scalar(std::mt19937_64& g, int lo, int hi) {
  hfqm::EuclideanScalar s;
  std::uniform_int_distribution<int> keep(0, 2);
  for (int k = lo; k <= hi; ++k)
    if (keep(g) != 0) s += hfqm::EuclideanScalar::monomial(dyadic(g), k);
  return s;
}

inline hfqm::EuclideanScalar random_nonzero(std::mt19937_64& g, int lo, int hi) {
  for (;;) {
    auto s = random_scalar(g, lo, hi);
    if (!s.is_zero()) return s;
  }
}

/// Rank by Gaussian elimination with partial pivoting.
inline std::size_t dense_rank(std::vector<double> a, std::size_t n, double tol) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < n; ++c) {
    std::size_t p = rank;
    for (std::size_t r = rank; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[p * n + c])) p = r;
    if (std::abs(a[p * n + c]) <= tol) continue;
    for (std::size_t j = 0; j < n; ++j) std::swap(a[p * n + j], a[rank * n + j]);
    for (std::size_t r = rank + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[rank * n + c];
      for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[rank * n + j];
    }
    ++rank;
  }
  return rank;
}

/// Composite Simpson rule on [a, b] with m (even) panels.
template <class F>
double simpson(F f, double a, double b, int m = 20000) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace testing_support
