#pragma once

// Real symmetric eigensolvers.
//
//  * Cyclic-tridiagonal matrices (tridiagonal plus the two periodic corner
//    entries): eigenvalues by bisection on the inertia count of A - σI
//    (LDLᵀ with the corner carried as a bordered last column), eigenvectors
//    by inverse iteration on a zig-zag reordering that turns the cycle into a
//    pentadiagonal band.
//  * Anything else: row-cyclic Jacobi rotations on the dense matrix.
//
// Eigenvalues come back ascending. Vectors are Euclidean-orthonormal and
// sign-fixed so the first component with magnitude above 1e-8·max is positive.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hfqm/linalg/band_lu.hpp"
#include "hfqm/linalg/sparse_matrix.hpp"

namespace hfqm::linalg {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenSystem {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  ///< empty when not requested
  std::string method;
};

/// Symmetric tridiagonal part plus corner: a_i = A(i,i), e_i = A(i,i+1),
/// corner = A(0,n-1).
struct CyclicTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
  double corner = 0.0;

  [[nodiscard]] std::size_t size() const { return diag.size(); }

  [[nodiscard]] double norm_inf() const {
    const std::size_t n = size();
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = std::abs(diag[i]);
      if (i > 0) s += std::abs(off[i - 1]);
      if (i + 1 < n) s += std::abs(off[i]);
      if (i == 0 || i == n - 1) s += std::abs(corner);
      m = std::max(m, s);
    }
    return m;
  }

  /// Gershgorin interval containing the spectrum.
  [[nodiscard]] std::pair<double, double> gershgorin() const {
    const std::size_t n = size();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      if (i > 0) r += std::abs(off[i - 1]);
      if (i + 1 < n) r += std::abs(off[i]);
      if (i == 0 || i == n - 1) r += std::abs(corner);
      lo = std::min(lo, diag[i] - r);
      hi = std::max(hi, diag[i] + r);
    }
    return {lo, hi};
  }

  [[nodiscard]] std::vector<double> apply(const std::vector<double>& x) const {
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = diag[i] * x[i];
      if (i > 0) s += off[i - 1] * x[i - 1];
      if (i + 1 < n) s += off[i] * x[i + 1];
      if (i == 0) s += corner * x[n - 1];
      if (i == n - 1) s += corner * x[0];
      y[i] = s;
    }
    return y;
  }
};

/// Extracts the cyclic-tridiagonal structure if the matrix has no other
/// nonzeros (and n >= 3).
inline std::optional<CyclicTridiagonal> as_cyclic_tridiagonal(const SparseMatrix& m) {
  const std::size_t n = m.size();
  if (n < 3) return std::nullopt;
  CyclicTridiagonal t{std::vector<double>(n, 0.0), std::vector<double>(n - 1, 0.0), 0.0};
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : m.row(i)) {
      std::size_t j = e.col;
      if (j == i) t.diag[i] = e.value;
      else if (j == i + 1) t.off[i] = e.value;
      else if (i == j + 1) continue;  // symmetric partner
      else if (i == 0 && j == n - 1) t.corner = e.value;
      else if (i == n - 1 && j == 0) continue;
      else return std::nullopt;
    }
  return t;
}

/// Number of eigenvalues strictly below sigma (Sylvester inertia of A - σI).
inline std::size_t count_below(const CyclicTridiagonal& t, double sigma, double pivmin) {
  const std::size_t n = t.size();
  std::size_t neg = 0;
  double d = t.diag[0] - sigma;
  double w = t.corner;  // entry (i, n-1) of the partially reduced matrix
  double schur = t.diag[n - 1] - sigma;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++neg;
    const double wi = (i == n - 2) ? w + t.off[n - 2] : w;
    schur -= wi * wi / d;
    if (i + 2 < n) {
      const double e = t.off[i];
      w = -e * w / d;
      d = t.diag[i + 1] - sigma - e * e / d;
    }
  }
  if (std::abs(schur) < pivmin) schur = -pivmin;
  if (schur < 0.0) ++neg;
  if (!std::isfinite(schur)) throw SolverError("inertia count overflowed");
  return neg;
}

/// All eigenvalues by bisection, ascending.
inline std::vector<double> bisection_eigenvalues(const CyclicTridiagonal& t, std::size_t count) {
  const std::size_t n = t.size();
  count = std::min(count, n);
  const double norm = std::max(t.norm_inf(), std::numeric_limits<double>::min());
  const double eps = std::numeric_limits<double>::epsilon();
  const double pivmin = eps * eps * norm;
  auto [glo, ghi] = t.gershgorin();
  const double pad = 2.0 * eps * norm + pivmin;
  glo -= pad;
  ghi += pad;

  std::vector<double> lo(count, glo), hi(count, ghi), values(count);
  const double abs_floor = 1e-3 * eps * norm;
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0) lo[k] = std::max(lo[k], values[k - 1]);
    double a = lo[k], b = hi[k];
    for (int iter = 0; iter < 256; ++iter) {
      const double tol = std::max(abs_floor, 2.0 * eps * std::max(std::abs(a), std::abs(b)));
      if (b - a <= tol) break;
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const std::size_t c = count_below(t, mid, pivmin);
      if (c > k) {
        b = mid;
        for (std::size_t j = k + 1; j < std::min(c, count); ++j) hi[j] = std::min(hi[j], mid);
      } else {
        a = mid;
      }
    }
    values[k] = 0.5 * (a + b);
  }
  return values;
}

namespace detail {

inline std::vector<std::size_t> zigzag_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t p = 0; p < n; ++p) order[p] = (p % 2 == 0) ? p / 2 : n - 1 - p / 2;
  return order;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double normalize(std::vector<double>& x) {
  double nrm = std::sqrt(dot(x, x));
  if (nrm > 0.0)
    for (double& v : x) v /= nrm;
  return nrm;
}

inline void fix_sign(std::vector<double>& x) {
  double biggest = 0.0;
  for (double v : x) biggest = std::max(biggest, std::abs(v));
  for (double v : x) {
    if (std::abs(v) > 1e-8 * biggest) {
      if (v < 0.0)
        for (double& u : x) u = -u;
      return;
    }
  }
}

/// Deterministic start vector (splitmix64 stream per index).
inline std::vector<double> start_vector(std::size_t n, std::uint64_t seed) {
  std::vector<double> x(n);
  std::uint64_t s = seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL;
  for (double& v : x) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    v = static_cast<double>(z >> 11) * 0x1.0p-53 - 0.5;
  }
  return x;
}

/// Modified Gram-Schmidt of `x` against vectors[first..last).
inline void orthogonalize(std::vector<double>& x, const std::vector<std::vector<double>>& vectors, std::size_t first,
                          std::size_t last) {
  for (std::size_t j = first; j < last; ++j) {
    double c = dot(x, vectors[j]);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * vectors[j][i];
  }
}

}  // namespace detail

/// Inverse iteration for the given (ascending) eigenvalues. Vectors whose
/// eigenvalues lie within `cluster_gap` of their predecessor are
/// Gram-Schmidt orthogonalized against the rest of their cluster.
inline std::vector<std::vector<double>> inverse_iteration(const CyclicTridiagonal& t,
                                                          const std::vector<double>& values) {
  const std::size_t n = t.size();
  const double eps = std::numeric_limits<double>::epsilon();
  const double norm = std::max(t.norm_inf(), std::numeric_limits<double>::min());
  const double cluster_gap = 1e-5 * norm;
  const double residual_target = 10.0 * static_cast<double>(n) * eps * norm;
  const auto order = detail::zigzag_order(n);
  std::vector<std::size_t> position(n);
  for (std::size_t p = 0; p < n; ++p) position[order[p]] = p;

  std::vector<std::vector<double>> vectors;
  vectors.reserve(values.size());
  std::size_t cluster_start = 0;
  double prev_shift = 0.0;

  for (std::size_t k = 0; k < values.size(); ++k) {
    double shift = values[k];
    if (k > 0 && values[k] - values[k - 1] > cluster_gap) cluster_start = k;
    if (k > cluster_start) {
      const double sep = 10.0 * eps * std::max(std::abs(shift), norm * 1e-3);
      if (shift - prev_shift < sep) shift = prev_shift + sep;
    }
    prev_shift = shift;

    BandLU lu(n, 2, 2);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pi = position[i];
      lu.at(pi, pi) += t.diag[i] - shift;
      if (i + 1 < n) {
        const std::size_t pj = position[i + 1];
        lu.at(pi, pj) += t.off[i];
        lu.at(pj, pi) += t.off[i];
      }
    }
    lu.at(position[0], position[n - 1]) += t.corner;
    lu.at(position[n - 1], position[0]) += t.corner;
    lu.factorize(eps * norm);

    std::vector<double> x = detail::start_vector(n, k);
    std::vector<double> permuted(n);
    for (int iter = 0; iter < 8; ++iter) {
      detail::orthogonalize(x, vectors, cluster_start, k);
      detail::normalize(x);
      for (std::size_t i = 0; i < n; ++i) permuted[position[i]] = x[i];
      lu.solve_in_place(permuted);
      for (std::size_t i = 0; i < n; ++i) x[i] = permuted[position[i]];
      detail::orthogonalize(x, vectors, cluster_start, k);
      if (detail::normalize(x) == 0.0) throw SolverError("inverse iteration collapsed");
      if (iter >= 1) {
        auto ax = t.apply(x);
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) r += (ax[i] - values[k] * x[i]) * (ax[i] - values[k] * x[i]);
        if (std::sqrt(r) <= residual_target) break;
      }
    }
    detail::orthogonalize(x, vectors, cluster_start, k);
    detail::normalize(x);
    vectors.push_back(std::move(x));
  }
  for (auto& v : vectors) detail::fix_sign(v);
  return vectors;
}

/// Row-cyclic Jacobi on a dense symmetric matrix (row-major, n×n). Stops when
/// the off-diagonal Frobenius norm is <= tol·‖A‖_F.
inline EigenSystem jacobi_eigen(std::vector<double> a, std::size_t n, bool want_vectors, double tol = 1e-12,
                                int max_sweeps = 100) {
  std::vector<double> v;
  if (want_vectors) {
    v.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  }
  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= tol * frob) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p], aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v[k * n + p], vkq = v[k * n + q];
            v[k * n + p] = c * vkp - s * vkq;
            v[k * n + q] = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > tol * frob) throw SolverError("Jacobi did not converge");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });
  EigenSystem out;
  out.method = "jacobi";
  for (std::size_t k : idx) out.values.push_back(a[k * n + k]);
  if (want_vectors) {
    for (std::size_t k : idx) {
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = v[i * n + k];
      detail::fix_sign(col);
      out.vectors.push_back(std::move(col));
    }
  }
  return out;
}

/// Re-orthonormalizes vectors whose eigenvalues sit within `gap` of each
/// other (modified Gram-Schmidt in index order).
inline void reorthonormalize_clusters(EigenSystem& es, double gap) {
  std::size_t start = 0;
  for (std::size_t k = 0; k < es.vectors.size(); ++k) {
    if (k > 0 && es.values[k] - es.values[k - 1] > gap) start = k;
    if (k == start) continue;
    detail::orthogonalize(es.vectors[k], es.vectors, start, k);
    detail::normalize(es.vectors[k]);
    detail::fix_sign(es.vectors[k]);
  }
}

/// Replaces bisection values by Rayleigh quotients of the (unit) vectors.
/// The bordered inertia count is only accurate to a modest multiple of
/// eps·‖A‖ away from the ends of the spectrum; the quotient is second-order
/// in the vector error.
inline void rayleigh_refine(const CyclicTridiagonal& t, EigenSystem& es) {
  const std::size_t n = es.values.size();
  for (std::size_t k = 0; k < n; ++k) es.values[k] = detail::dot(es.vectors[k], t.apply(es.vectors[k]));
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return es.values[a] < es.values[b]; });
  EigenSystem sorted;
  sorted.method = es.method;
  for (std::size_t k : order) {
    sorted.values.push_back(es.values[k]);
    sorted.vectors.push_back(std::move(es.vectors[k]));
  }
  es.values = std::move(sorted.values);
  es.vectors = std::move(sorted.vectors);
}

enum class EigenMethod { automatic, bisection, jacobi };

/// Full symmetric eigensolve. `automatic` picks bisection when the matrix is
/// cyclic tridiagonal and Jacobi otherwise.
inline EigenSystem symmetric_eigen(const SparseMatrix& m, bool want_vectors,
                                   EigenMethod method = EigenMethod::automatic) {
  const std::size_t n = m.size();
  if (n == 0) return {};
  if (method != EigenMethod::jacobi) {
    if (auto t = as_cyclic_tridiagonal(m)) {
      EigenSystem out;
      out.method = "sturm_bisection";
      out.values = bisection_eigenvalues(*t, n);
      if (want_vectors) {
        out.vectors = inverse_iteration(*t, out.values);
        reorthonormalize_clusters(out, 1e-9);
        rayleigh_refine(*t, out);
      }
      return out;
    }
    if (method == EigenMethod::bisection) throw SolverError("matrix is not cyclic tridiagonal");
  }
  auto out = jacobi_eigen(m.to_dense(), n, want_vectors);
  reorthonormalize_clusters(out, 1e-9);
  return out;
}

/// The `count` smallest eigenvalues; bisection when possible.
inline std::vector<double> lowest_eigenvalues(const SparseMatrix& m, std::size_t count) {
  if (auto t = as_cyclic_tridiagonal(m)) return bisection_eigenvalues(*t, count);
  auto es = jacobi_eigen(m.to_dense(), m.size(), false);
  es.values.resize(std::min(count, es.values.size()));
  return es.values;
}

}  // namespace hfqm::linalg
