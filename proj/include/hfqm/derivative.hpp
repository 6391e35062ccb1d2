#pragma once

// Generalized derivative on the periodic grid and the two Laplacians.
//
// D is the periodic central difference: (Du)_j = (u_{j+1} - u_{j-1}) / (2h).
// Under uniform weights it is exactly antisymmetric, kills constants, and for
// odd n its null space is the constants alone. For even n the alternating
// (sawtooth) vector is a second null vector.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>

#include "hfqm/grid.hpp"
#include "hfqm/linalg/sparse_matrix.hpp"

namespace hfqm {

enum class LaplacianVariant {
  paper_literal,  ///< D∘D, bandwidth 2, decouples even/odd sublattices
  compact,        ///< 3-point periodic second difference, bandwidth 1
};

inline std::string_view to_string(LaplacianVariant v) {
  return v == LaplacianVariant::compact ? "compact" : "paper_literal";
}

inline LaplacianVariant parse_laplacian_variant(std::string_view s) {
  if (s == "compact") return LaplacianVariant::compact;
  if (s == "paper_literal" || s == "literal") return LaplacianVariant::paper_literal;
  throw std::invalid_argument("unknown laplacian variant '" + std::string(s) + "'");
}

class DerivativeOperator {
 public:
  DerivativeOperator(GridPtr grid, linalg::SparseMatrix m, std::size_t bandwidth)
      : grid_(std::move(grid)), matrix_(std::move(m)), bandwidth_(bandwidth) {}

  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] const linalg::SparseMatrix& matrix() const { return matrix_; }
  /// Declared stencil radius; entries with periodic distance > bandwidth are zero.
  [[nodiscard]] std::size_t bandwidth() const { return bandwidth_; }

  template <GridScalar T>
  GridFunction<T> operator()(const GridFunction<T>& u) const {
    u.require_same_grid(*grid_);
    return GridFunction<T>(grid_, matrix_.apply<T>(u.values()));
  }

 private:
  GridPtr grid_;
  linalg::SparseMatrix matrix_;
  std::size_t bandwidth_;
};

inline DerivativeOperator build_derivative(const GridPtr& grid) {
  const std::size_t n = grid->size();
  const double c = 1.0 / (2.0 * grid->spacing());
  linalg::SparseMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    m.add(j, (j + 1) % n, c);
    m.add(j, (j + n - 1) % n, -c);
  }
  m.prune();  // n == 2 makes both neighbours coincide
  return {grid, std::move(m), 1};
}

inline linalg::SparseMatrix laplacian(const GridPtr& grid, LaplacianVariant variant) {
  const std::size_t n = grid->size();
  if (variant == LaplacianVariant::paper_literal) {
    const auto d = build_derivative(grid);
    return d.matrix() * d.matrix();
  }
  const double h = grid->spacing();
  const double c = 1.0 / (h * h);
  linalg::SparseMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    m.add(j, (j + 1) % n, c);
    m.add(j, (j + n - 1) % n, c);
    m.add(j, j, -2.0 * c);
  }
  m.prune();
  return m;
}

/// max_{a,b} |d_a·D_ab + d_b·D_ba|; zero for an operator obeying the weak
/// Leibniz rule ∮(Du)v = -∮u(Dv).
inline double weighted_antisymmetry_defect(const linalg::SparseMatrix& d, const Grid& grid) {
  double worst = 0.0;
  for (std::size_t a = 0; a < d.size(); ++a)
    for (const auto& e : d.row(a)) {
      std::size_t b = e.col;
      worst = std::max(worst, std::abs(grid.weight(a) * e.value + grid.weight(b) * d.at(b, a)));
    }
  return worst;
}

/// max_{a,b} |d_a·M_ab - d_b·M_ba|; zero for a W-symmetric operator.
inline double weighted_symmetry_defect(const linalg::SparseMatrix& m, std::span<const double> weights) {
  double worst = 0.0;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (const auto& e : m.row(a)) {
      std::size_t b = e.col;
      worst = std::max(worst, std::abs(weights[a] * e.value - weights[b] * m.at(b, a)));
    }
  return worst;
}

/// True when every row is the cyclic shift of row 0.
inline bool is_circulant(const linalg::SparseMatrix& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 1; i < n; ++i)
    for (const auto& e : m.row(0)) {
      if (m.at(i, (e.col + i) % n) != e.value) return false;
    }
  for (std::size_t i = 1; i < n; ++i)
    if (m.row(i).size() != m.row(0).size()) return false;
  return true;
}

/// Null-space dimension of a circulant matrix via its symbol
/// σ(m) = Σ_k c_k·exp(2πi·m·k/n): the number of m with |σ(m)| <= tol·max|σ|.
inline std::size_t circulant_nullity(const linalg::SparseMatrix& m, double tol = 1e-12) {
  if (!is_circulant(m)) throw std::invalid_argument("circulant_nullity needs a circulant matrix");
  const std::size_t n = m.size();
  std::vector<double> mag(n);
  double biggest = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s{};
    for (const auto& e : m.row(0)) {
      double angle = 2.0 * std::numbers::pi * static_cast<double>((k * e.col) % n) / static_cast<double>(n);
      s += e.value * std::polar(1.0, angle);
    }
    mag[k] = std::abs(s);
    biggest = std::max(biggest, mag[k]);
  }
  std::size_t count = 0;
  for (double v : mag)
    if (v <= tol * biggest) ++count;
  return count;
}

}  // namespace hfqm
