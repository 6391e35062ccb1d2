#pragma once

// Finite-stage ultrafunction space: a symmetric periodic grid containing 0,
// positive point weights d(a), and grid functions u = Σ_a u(a)·χ_a.

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hfqm/euclidean_scalar.hpp"

namespace hfqm {

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Point count n and spacing h of one refinement stage.
struct Stage {
  std::size_t n = 0;
  double h = 0.0;

  [[nodiscard]] double halfwidth() const { return static_cast<double>(n - 1) * h / 2.0; }
  [[nodiscard]] double circumference() const { return static_cast<double>(n) * h; }
  friend bool operator==(const Stage&, const Stage&) = default;
};

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Points x_j = (j - (n-1)/2)·h, uniform weights d_j = h, periodic topology
/// (circle of circumference n·h).
class Grid {
 public:
  /// n must be odd and >= 3, h > 0.
  static GridPtr make(std::size_t n, double h) {
    if (n < 3) throw std::invalid_argument("grid needs n >= 3 points, got " + std::to_string(n));
    if (n % 2 == 0) throw std::invalid_argument("grid point count must be odd, got " + std::to_string(n));
    return make_any_parity(n, h);
  }

  /// Skips the parity check. Only for diagnostics that demonstrate what
  /// breaks with even n (0 is then not a grid point).
  static GridPtr make_any_parity(std::size_t n, double h) {
    if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid spacing must be positive and finite");
    return GridPtr(new Grid(n, h));
  }

  static GridPtr make(const Stage& s) { return make(s.n, s.h); }

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double spacing() const { return h_; }
  [[nodiscard]] Stage stage() const { return {n_, h_}; }
  [[nodiscard]] double point(std::size_t j) const { return points_[j]; }
  [[nodiscard]] double weight(std::size_t j) const { return weights_[j]; }
  [[nodiscard]] std::span<const double> points() const { return points_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] double circumference() const { return static_cast<double>(n_) * h_; }
  [[nodiscard]] double halfwidth() const { return static_cast<double>(n_ - 1) * h_ / 2.0; }
  [[nodiscard]] bool weights_uniform() const { return true; }

  [[nodiscard]] bool has_origin() const { return n_ % 2 == 1; }

  /// Index j0 with x_{j0} = 0.
  [[nodiscard]] std::size_t origin() const {
    if (!has_origin()) throw std::logic_error("even grid has no origin point");
    return (n_ - 1) / 2;
  }

  /// Grid index whose point lies within tol·h of x, if any.
  [[nodiscard]] std::optional<std::size_t> index_of(double x, double tol = 1e-9) const {
    double offset = static_cast<double>(n_ - 1) / 2.0;
    double jr = x / h_ + offset;
    double j = std::round(jr);
    if (j < 0 || j > static_cast<double>(n_ - 1) || std::abs(jr - j) > tol) return std::nullopt;
    return static_cast<std::size_t>(j);
  }

  /// Mirror index of j under x -> -x.
  [[nodiscard]] std::size_t mirror(std::size_t j) const { return n_ - 1 - j; }

  friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_ && a.h_ == b.h_; }

 private:
  Grid(std::size_t n, double h) : n_(n), h_(h), points_(n), weights_(n, h) {
    double offset = static_cast<double>(n - 1) / 2.0;
    for (std::size_t j = 0; j < n; ++j) points_[j] = (static_cast<double>(j) - offset) * h;
  }

  std::size_t n_;
  double h_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

inline GridPtr make_grid(std::size_t n, double h) { return Grid::make(n, h); }

// ---------------------------------------------------------------------------
// Scalar support.

template <class T>
concept GridScalar = std::same_as<T, double> || std::same_as<T, std::complex<double>> ||
                     std::same_as<T, EuclideanScalar> || std::same_as<T, ComplexEuclidean>;

inline double conj_value(double v) { return v; }
inline std::complex<double> conj_value(const std::complex<double>& v) { return std::conj(v); }
inline EuclideanScalar conj_value(const EuclideanScalar& v) { return v; }
inline ComplexEuclidean conj_value(const ComplexEuclidean& v) { return conj(v); }

template <GridScalar T>
T promote_weight(double w) {
  if constexpr (std::same_as<T, ComplexEuclidean>) return ComplexEuclidean(EuclideanScalar(w));
  else return T(w);
}

// ---------------------------------------------------------------------------

template <GridScalar T>
class GridFunction {
 public:
  using value_type = T;

  explicit GridFunction(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size()) {}

  GridFunction(GridPtr grid, std::vector<T> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size())
      throw std::invalid_argument("grid function needs " + std::to_string(grid_->size()) + " values, got " +
                                  std::to_string(values_.size()));
  }

  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] std::span<const T> values() const { return values_; }
  [[nodiscard]] std::span<T> values() { return values_; }
  T& operator[](std::size_t j) { return values_[j]; }
  const T& operator[](std::size_t j) const { return values_[j]; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  GridFunction& operator+=(const GridFunction& o) {
    require_same_grid(o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
  }
  GridFunction& operator-=(const GridFunction& o) {
    require_same_grid(o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    return *this;
  }
  GridFunction& operator*=(const T& s) {
    for (auto& v : values_) v = v * s;
    return *this;
  }

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(const T& s, GridFunction a) { return a *= s; }

  void require_same_grid(const GridFunction& o) const { require_same_grid(*o.grid_); }
  void require_same_grid(const Grid& g) const {
    if (!(*grid_ == g)) throw GridMismatch("grid functions live on different grids");
  }

  /// Converts real values to complex ones (or keeps them).
  template <GridScalar U>
  [[nodiscard]] GridFunction<U> as() const {
    std::vector<U> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(U(v));
    return GridFunction<U>(grid_, std::move(out));
  }

 private:
  GridPtr grid_;
  std::vector<T> values_;
};

using RealGridFunction = GridFunction<double>;
using ComplexGridFunction = GridFunction<std::complex<double>>;

// ---------------------------------------------------------------------------
// Operations.

/// f°: f at in-domain grid points, 0 elsewhere. Non-finite values at
/// in-domain points are rejected.
inline RealGridFunction embed(const std::function<double(double)>& f, const GridPtr& grid,
                              const std::function<bool(double)>& domain = {}) {
  RealGridFunction u(grid);
  for (std::size_t j = 0; j < grid->size(); ++j) {
    double x = grid->point(j);
    if (domain && !domain(x)) continue;
    double v = f(x);
    if (!std::isfinite(v))
      throw std::domain_error("embedded function is not finite at x = " + detail::format_double(x));
    u[j] = v;
  }
  return u;
}

/// Domain predicate excluding the origin, for f with a singularity at 0.
inline bool nonzero_point(double x) { return x != 0.0; }

namespace detail {

/// Neumaier-compensated running sum.
struct CompensatedSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  [[nodiscard]] double value() const { return s + c; }
};

/// a·b·w as an unevaluated pair hi + lo, exact up to O(2^-106).
struct ProductTerm {
  double hi = 0.0, lo = 0.0;
};

inline ProductTerm product(double a, double b, double w) {
  const double p = a * b;
  const double e = std::fma(a, b, -p);
  const double q = p * w;
  return {q, std::fma(p, w, -q) + e * w};
}

/// Sums terms(j) in mirror pairs (j, n-1-j), so contributions of odd
/// functions cancel exactly, with each pair sum carried error-free.
template <class F>
double mirror_sum(std::size_t n, F terms) {
  CompensatedSum acc;
  for (std::size_t j = 0, m = n - 1; j <= m && m < n; ++j, --m) {
    const ProductTerm a = terms(j);
    if (j == m) {
      acc.add(a.hi);
      acc.add(a.lo);
      break;
    }
    const ProductTerm b = terms(m);
    const double s = a.hi + b.hi;
    const double bb = s - a.hi;
    const double t = (a.hi - (s - bb)) + (b.hi - bb);
    acc.add(s);
    acc.add(t + (a.lo + b.lo));
  }
  return acc.value();
}

}  // namespace detail

/// ∮u dx = Σ_j u_j·d_j. Real and complex sums are formed from exact
/// products and compensated, so the result is (nearly) correctly rounded.
template <GridScalar T>
T pointwise_integral(const GridFunction<T>& u) {
  const auto& g = *u.grid();
  if constexpr (std::same_as<T, double>) {
    return detail::mirror_sum(u.size(), [&](std::size_t j) { return detail::product(u[j], 1.0, g.weight(j)); });
  } else if constexpr (std::same_as<T, std::complex<double>>) {
    const double re =
        detail::mirror_sum(u.size(), [&](std::size_t j) { return detail::product(u[j].real(), 1.0, g.weight(j)); });
    const double im =
        detail::mirror_sum(u.size(), [&](std::size_t j) { return detail::product(u[j].imag(), 1.0, g.weight(j)); });
    return {re, im};
  } else {
    T sum{};
    for (std::size_t j = 0; j < u.size(); ++j) sum += u[j] * promote_weight<T>(g.weight(j));
    return sum;
  }
}

/// ∮u·v dx, with the products u_j·v_j·d_j fused (no intermediate rounding of
/// u·v). For u = δ_a this returns v(a) exactly.
template <GridScalar T>
T integrate_product(const GridFunction<T>& u, const GridFunction<T>& v) {
  u.require_same_grid(v);
  const auto& g = *u.grid();
  if constexpr (std::same_as<T, double>) {
    return detail::mirror_sum(u.size(), [&](std::size_t j) { return detail::product(u[j], v[j], g.weight(j)); });
  } else {
    return pointwise_integral(multiply(u, v));
  }
}

/// ⟨u, v⟩ = Σ_j u_j·conj(v_j)·d_j.
template <GridScalar T>
T inner_product(const GridFunction<T>& u, const GridFunction<T>& v) {
  u.require_same_grid(v);
  const auto& g = *u.grid();
  const std::size_t n = u.size();
  if constexpr (std::same_as<T, double>) {
    return detail::mirror_sum(n, [&](std::size_t j) { return detail::product(u[j], v[j], g.weight(j)); });
  } else if constexpr (std::same_as<T, std::complex<double>>) {
    auto pair = [](detail::ProductTerm a, detail::ProductTerm b) {
      const double s = a.hi + b.hi;
      const double bb = s - a.hi;
      return detail::ProductTerm{s, (a.hi - (s - bb)) + (b.hi - bb) + a.lo + b.lo};
    };
    const double re = detail::mirror_sum(n, [&](std::size_t j) {
      return pair(detail::product(u[j].real(), v[j].real(), g.weight(j)),
                  detail::product(u[j].imag(), v[j].imag(), g.weight(j)));
    });
    const double im = detail::mirror_sum(n, [&](std::size_t j) {
      return pair(detail::product(u[j].imag(), v[j].real(), g.weight(j)),
                  detail::product(-u[j].real(), v[j].imag(), g.weight(j)));
    });
    return {re, im};
  } else {
    T sum{};
    for (std::size_t j = 0; j < n; ++j) sum += u[j] * conj_value(v[j]) * promote_weight<T>(g.weight(j));
    return sum;
  }
}

inline double norm(const RealGridFunction& u) { return std::sqrt(inner_product(u, u)); }
inline double norm(const ComplexGridFunction& u) { return std::sqrt(inner_product(u, u).real()); }

/// χ_a: 1 at index a, 0 elsewhere.
inline RealGridFunction indicator(const GridPtr& grid, std::size_t a) {
  if (a >= grid->size()) throw std::out_of_range("grid index out of range");
  RealGridFunction u(grid);
  u[a] = 1.0;
  return u;
}

/// δ_a = χ_a / d(a). Reproducing: ∮δ_a·u = u(a).
inline RealGridFunction delta(const GridPtr& grid, std::size_t a) {
  RealGridFunction u = indicator(grid, a);
  u[a] = 1.0 / grid->weight(a);
  return u;
}

/// √δ_a = χ_a / √d(a); the orthonormal delta basis.
inline RealGridFunction sqrt_delta(const GridPtr& grid, std::size_t a) {
  RealGridFunction u = indicator(grid, a);
  u[a] = 1.0 / std::sqrt(grid->weight(a));
  return u;
}

/// Pointwise product; total on the grid-function algebra.
template <GridScalar T>
GridFunction<T> multiply(const GridFunction<T>& u, const GridFunction<T>& v) {
  u.require_same_grid(v);
  GridFunction<T> out(u.grid());
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[j] * v[j];
  return out;
}

/// |{grid points satisfying the predicate}|.
inline std::size_t numerosity(const Grid& grid, const std::function<bool(double)>& in_set) {
  std::size_t count = 0;
  for (double x : grid.points())
    if (in_set(x)) ++count;
  return count;
}

/// Σ_a (∮u·δ_a) χ_a.
template <GridScalar T>
GridFunction<T> reconstruct_from_deltas(const GridFunction<T>& u) {
  GridFunction<T> out(u.grid());
  for (std::size_t a = 0; a < u.size(); ++a) {
    auto d = delta(u.grid(), a).template as<T>();
    out[a] = integrate_product(u, d);
  }
  return out;
}

}  // namespace hfqm
