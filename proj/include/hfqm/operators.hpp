#pragma once

// Hamiltonians H = -½·Laplacian + V on the grid, their W-orthonormal spectral
// decomposition, unitary evolution, measurement, and the energy bound for the
// delta well.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hfqm/derivative.hpp"
#include "hfqm/grid.hpp"
#include "hfqm/linalg/sparse_matrix.hpp"
#include "hfqm/linalg/symmetric_eigen.hpp"
#include "hfqm/symbolic.hpp"

namespace hfqm {

using linalg::SolverError;

class NonHermitian : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnnormalizedState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Potential {
 public:
  struct Sampled {
    std::function<double(double)> f;
    std::string label;
  };
  struct DeltaAt {
    std::size_t index;
    double strength;
  };
  struct Indicator {
    std::function<bool(double)> contains;
    double height;
    std::string label;
  };
  using Term = std::variant<Sampled, DeltaAt, Indicator>;

  Potential() = default;

  static Potential sampled(std::function<double(double)> f, std::string label = "sampled") {
    return Potential(Sampled{std::move(f), std::move(label)});
  }
  static Potential delta_at(std::size_t index, double tau) { return Potential(DeltaAt{index, tau}); }
  static Potential indicator(std::function<bool(double)> contains, double height, std::string label = "indicator") {
    return Potential(Indicator{std::move(contains), height, std::move(label)});
  }

  /// Sum of potentials: the term lists are concatenated.
  friend Potential operator+(Potential a, const Potential& b) {
    a.terms_.insert(a.terms_.end(), b.terms_.begin(), b.terms_.end());
    return a;
  }

  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }

  /// Only DeltaAt terms, all at `index`; their summed strength.
  [[nodiscard]] std::optional<double> pure_delta_strength(std::size_t index) const {
    double tau = 0.0;
    for (const auto& t : terms_) {
      const auto* d = std::get_if<DeltaAt>(&t);
      if (!d || d->index != index) return std::nullopt;
      tau += d->strength;
    }
    return tau;
  }

  /// Diagonal contribution on `grid`.
  [[nodiscard]] std::vector<double> diagonal(const Grid& grid) const {
    std::vector<double> v(grid.size(), 0.0);
    for (const auto& t : terms_) {
      if (const auto* s = std::get_if<Sampled>(&t)) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
          double y = s->f(grid.point(j));
          if (!std::isfinite(y))
            throw std::invalid_argument("potential '" + s->label + "' is not finite at x = " +
                                        std::to_string(grid.point(j)));
          v[j] += y;
        }
      } else if (const auto* d = std::get_if<DeltaAt>(&t)) {
        if (d->index >= grid.size())
          throw std::out_of_range("delta index " + std::to_string(d->index) + " outside grid of size " +
                                  std::to_string(grid.size()));
        if (std::isnan(d->strength)) throw std::invalid_argument("delta strength is NaN");
        v[d->index] += d->strength / grid.weight(d->index);
      } else {
        const auto& ind = std::get<Indicator>(t);
        if (std::isnan(ind.height)) throw std::invalid_argument("indicator height is NaN");
        for (std::size_t j = 0; j < grid.size(); ++j)
          if (ind.contains(grid.point(j))) v[j] += ind.height;
      }
    }
    return v;
  }

  [[nodiscard]] std::string describe() const {
    if (terms_.empty()) return "none";
    std::ostringstream os;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) os << " + ";
      const auto& t = terms_[i];
      if (const auto* s = std::get_if<Sampled>(&t)) os << s->label;
      else if (const auto* d = std::get_if<DeltaAt>(&t))
        os << "delta(index=" << d->index << ", tau=" << detail::format_double(d->strength) << ")";
      else {
        const auto& ind = std::get<Indicator>(t);
        os << ind.label << "(height=" << detail::format_double(ind.height) << ")";
      }
    }
    return os.str();
  }

 private:
  explicit Potential(Term t) { terms_.push_back(std::move(t)); }
  std::vector<Term> terms_;
};

/// Symmetric square well/barrier of half-width w and height v0 (v0 < 0 for
/// a well). Points exactly on the edge get v0/2, so on a grid where w is a
/// multiple of h the sampled potential integrates to exactly 2·w·v0.
inline Potential square_well(double half_width, double v0) {
  if (!(half_width > 0.0)) throw std::invalid_argument("square well half-width must be positive");
  const double tol = 1e-9 * std::max(half_width, 1.0);
  std::ostringstream label;
  label << "square_well(w=" << detail::format_double(half_width) << ", v0=" << detail::format_double(v0) << ")";
  return Potential::sampled(
      [half_width, v0, tol](double x) {
        const double ax = std::abs(x);
        if (std::abs(ax - half_width) <= tol) return 0.5 * v0;
        return ax < half_width ? v0 : 0.0;
      },
      label.str());
}

/// Hard walls of height `height` on |x| >= L (an infinite box at finite stage).
inline Potential box_walls(double L, double height) {
  const double tol = 1e-9 * std::max(L, 1.0);
  std::ostringstream label;
  label << "walls(|x|>=" << detail::format_double(L) << ")";
  return Potential::indicator([L, tol](double x) { return std::abs(x) >= L - tol; }, height, label.str());
}

struct Hamiltonian {
  GridPtr grid;   ///< axis grid; the state space is grid^dimension
  int dimension = 1;
  LaplacianVariant variant = LaplacianVariant::compact;
  linalg::SparseMatrix matrix;
  std::vector<double> weights;  ///< d(a) per state index
  std::string potential;        ///< description for reports

  [[nodiscard]] std::size_t size() const { return matrix.size(); }

  template <GridScalar T>
  [[nodiscard]] GridFunction<T> apply(const GridFunction<T>& u) const {
    if (dimension != 1) throw std::logic_error("grid-function application is 1D only");
    u.require_same_grid(*grid);
    return GridFunction<T>(grid, matrix.apply<T>(u.values()));
  }
};

inline Hamiltonian assemble_hamiltonian(const GridPtr& grid, LaplacianVariant variant, const Potential& v) {
  Hamiltonian h;
  h.grid = grid;
  h.variant = variant;
  h.matrix = laplacian(grid, variant).scaled(-0.5);
  h.matrix.add_diagonal(v.diagonal(*grid));
  h.weights.assign(grid->weights().begin(), grid->weights().end());
  h.potential = v.describe();
  return h;
}

/// Tensor-product Hamiltonian on grid × grid with τ/d²(0) at the origin.
inline Hamiltonian assemble_hamiltonian_2d(const GridPtr& grid, LaplacianVariant variant, double tau) {
  const std::size_t n = grid->size();
  if (n > 41) throw std::invalid_argument("2D grids are limited to n <= 41 per axis");
  if (std::isnan(tau)) throw std::invalid_argument("delta strength is NaN");
  const auto lap = laplacian(grid, variant);
  Hamiltonian h;
  h.grid = grid;
  h.dimension = 2;
  h.variant = variant;
  h.matrix = linalg::SparseMatrix(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t a = i * n + j;
      for (const auto& e : lap.row(i)) h.matrix.add(a, e.col * n + j, -0.5 * e.value);
      for (const auto& e : lap.row(j)) h.matrix.add(a, i * n + e.col, -0.5 * e.value);
    }
  const std::size_t o = grid->origin();
  const double d0 = grid->weight(o) * grid->weight(o);
  if (tau != 0.0) h.matrix.add(o * n + o, o * n + o, tau / d0);
  h.matrix.prune();
  h.weights.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h.weights[i * n + j] = grid->weight(i) * grid->weight(j);
  std::ostringstream label;
  label << "delta2d(tau=" << detail::format_double(tau) << ")";
  h.potential = label.str();
  return h;
}

struct SpectralDecomposition {
  GridPtr grid;
  int dimension = 1;
  std::vector<double> weights;
  std::vector<double> eigenvalues;                ///< ascending
  std::vector<std::vector<double>> eigenvectors;  ///< W-orthonormal
  std::string method;

  [[nodiscard]] std::size_t size() const { return eigenvalues.size(); }

  [[nodiscard]] RealGridFunction eigenfunction(std::size_t j) const {
    if (dimension != 1) throw std::logic_error("eigenfunction() is 1D only");
    return RealGridFunction(grid, eigenvectors.at(j));
  }

  /// ⟨ψ, v_j⟩ = Σ ψ(a)·v_j(a)·d(a).
  template <class T>
  [[nodiscard]] T coefficient(std::span<const T> psi, std::size_t j) const {
    T s{};
    const auto& v = eigenvectors[j];
    for (std::size_t a = 0; a < v.size(); ++a) s += psi[a] * (v[a] * weights[a]);
    return s;
  }
};

/// Largest |d_a·H_ab - d_b·H_ba|, relative to max |d_a·H_ab|.
inline double hermiticity_defect(const Hamiltonian& h) {
  double scale = 0.0;
  for (std::size_t a = 0; a < h.size(); ++a)
    for (const auto& e : h.matrix.row(a)) scale = std::max(scale, std::abs(h.weights[a] * e.value));
  if (scale == 0.0) return 0.0;
  return weighted_symmetry_defect(h.matrix, h.weights) / scale;
}

/// Dense Jacobi is cubic; larger problems are refused rather than left running.
inline constexpr std::size_t jacobi_size_limit = 1681;

inline SpectralDecomposition eigendecompose(const Hamiltonian& h,
                                            linalg::EigenMethod method = linalg::EigenMethod::automatic) {
  if (double defect = hermiticity_defect(h); defect > 1e-12) {
    std::ostringstream os;
    os << "Hamiltonian is not W-Hermitian: max relative asymmetry " << defect;
    throw NonHermitian(os.str());
  }
  const std::size_t n = h.size();
  const bool uniform = std::all_of(h.weights.begin(), h.weights.end(), [&](double d) { return d == h.weights[0]; });

  // B = W^{1/2} H W^{-1/2}; identical to H for uniform weights.
  linalg::SparseMatrix b = h.matrix;
  std::vector<double> sq(n);
  for (std::size_t a = 0; a < n; ++a) sq[a] = std::sqrt(h.weights[a]);
  if (!uniform) {
    b = linalg::SparseMatrix(n);
    for (std::size_t a = 0; a < n; ++a)
      for (const auto& e : h.matrix.row(a)) b.add(a, e.col, sq[a] * e.value / sq[e.col]);
  }

  const bool tridiagonal = linalg::as_cyclic_tridiagonal(b).has_value();
  if (method == linalg::EigenMethod::bisection && !tridiagonal)
    throw SolverError("bisection requested but the operator is not cyclic tridiagonal");
  if ((method == linalg::EigenMethod::jacobi || !tridiagonal) && n > jacobi_size_limit)
    throw SolverError("dense Jacobi path limited to " + std::to_string(jacobi_size_limit) + " unknowns, got " +
                      std::to_string(n));

  auto es = linalg::symmetric_eigen(b, true, method);
  SpectralDecomposition dec;
  dec.grid = h.grid;
  dec.dimension = h.dimension;
  dec.weights = h.weights;
  dec.method = es.method;
  dec.eigenvalues = std::move(es.values);
  dec.eigenvectors = std::move(es.vectors);
  for (auto& v : dec.eigenvectors)
    for (std::size_t a = 0; a < n; ++a) v[a] /= sq[a];
  return dec;
}

/// Σ_j e^{-iλ_j t}·c_j·v_j with c_j = ⟨ψ0, v_j⟩ computed once.
class Propagator {
 public:
  Propagator(const SpectralDecomposition& dec, const ComplexGridFunction& psi0) : dec_(&dec), grid_(psi0.grid()) {
    if (dec.dimension != 1) throw std::logic_error("propagation is 1D only");
    psi0.require_same_grid(*dec.grid);
    coeff_.resize(dec.size());
    for (std::size_t j = 0; j < dec.size(); ++j) coeff_[j] = dec.coefficient<std::complex<double>>(psi0.values(), j);
  }

  [[nodiscard]] ComplexGridFunction at(double t) const {
    std::vector<std::complex<double>> out(grid_->size());
    for (std::size_t j = 0; j < coeff_.size(); ++j) {
      const std::complex<double> c = std::polar(1.0, -dec_->eigenvalues[j] * t) * coeff_[j];
      const auto& v = dec_->eigenvectors[j];
      for (std::size_t a = 0; a < out.size(); ++a) out[a] += c * v[a];
    }
    return ComplexGridFunction(grid_, std::move(out));
  }

  [[nodiscard]] const std::vector<std::complex<double>>& coefficients() const { return coeff_; }

 private:
  const SpectralDecomposition* dec_;
  GridPtr grid_;
  std::vector<std::complex<double>> coeff_;
};

inline ComplexGridFunction evolve(const SpectralDecomposition& dec, const ComplexGridFunction& psi, double t) {
  if (t == 0.0) return psi;
  return Propagator(dec, psi).at(t);
}

/// Re⟨Hψ, ψ⟩.
inline double energy_expectation(const Hamiltonian& h, const ComplexGridFunction& psi) {
  auto hp = h.apply(psi);
  return inner_product(hp, psi).real();
}

struct Outcome {
  double value;        ///< st(λ_j); the eigenvalues are already standard
  double probability;  ///< |⟨ψ, v_j⟩|²
};

inline void require_normalized(double norm_value, double tol = 1e-10) {
  if (std::abs(norm_value - 1.0) > tol) {
    std::ostringstream os;
    os << "state is not normalized: ||psi|| = " << std::setprecision(17) << norm_value;
    throw UnnormalizedState(os.str());
  }
}

inline std::vector<Outcome> measurement_probabilities(const ComplexGridFunction& psi,
                                                      const SpectralDecomposition& dec) {
  psi.require_same_grid(*dec.grid);
  require_normalized(norm(psi));
  std::vector<Outcome> out;
  out.reserve(dec.size());
  for (std::size_t j = 0; j < dec.size(); ++j)
    out.push_back({dec.eigenvalues[j], std::norm(dec.coefficient<std::complex<double>>(psi.values(), j))});
  return out;
}

/// Position outcome: |ψ(q)|²·d(q).
inline double position_probability(const ComplexGridFunction& psi, std::size_t q) {
  return std::norm(psi[q]) * psi.grid()->weight(q);
}

struct BoundReport {
  double min_eig;
  double bound;
  bool pass;
};

/// E ≥ τ·u(0)²·d(0)/d(0) ≥ τ/d(0) for unit u, and E ≥ 0 without attraction.
inline BoundReport spectral_bound_check(const SpectralDecomposition& dec, double tau, const Grid& grid) {
  const double min_eig = dec.eigenvalues.empty() ? 0.0 : dec.eigenvalues.front();
  const double bound = tau >= 0.0 ? 0.0 : tau / grid.weight(grid.origin());
  return {min_eig, bound, min_eig >= bound - 1e-9};
}

inline BoundReport spectral_bound_check(const std::vector<double>& eigenvalues, double tau, const Grid& grid) {
  SpectralDecomposition d;
  d.eigenvalues = eigenvalues;
  return spectral_bound_check(d, tau, grid);
}

struct StateClass {
  enum class Tag { physical, ideal };
  Tag tag;
  std::variant<EuclideanScalar, double> witness;
  std::string note;

  [[nodiscard]] bool physical() const { return tag == Tag::physical; }
};

inline std::string_view to_string(StateClass::Tag t) { return t == StateClass::Tag::physical ? "Physical" : "Ideal"; }

/// Symbolic mode: ⟨Hψ, ψ⟩ under the pairing rules, Physical iff finite.
inline StateClass classify_state(const SymbolicState& psi, const EuclideanScalar& tau, const SymbolicContext& ctx) {
  auto e = symbolic_energy(psi, tau, ctx);
  auto c = classify(e);
  return {c.finite ? StateClass::Tag::physical : StateClass::Tag::ideal, e, "symbolic"};
}

struct EnergySample {
  double h;
  double energy;
};

/// Net mode: fits |E| ~ h^{-p} on the last two stages. Growth with p > 0.5 is
/// read as an infinite expectation; the witness is c·ε^{-q}, q = round(p).
inline StateClass classify_state(const std::vector<EnergySample>& net) {
  if (net.size() < 2) throw std::invalid_argument("net classification needs at least two stages");
  const auto& a = net[net.size() - 2];
  const auto& b = net.back();
  if (!(a.h > b.h)) throw std::invalid_argument("stages must refine (h decreasing)");
  const double ea = std::abs(a.energy), eb = std::abs(b.energy);
  double p = 0.0;
  if (ea > 0.0 && eb > 0.0) p = std::log(eb / ea) / std::log(a.h / b.h);
  std::ostringstream note;
  note << "fitted growth exponent p = " << p;
  if (p > 0.5) {
    const int q = std::clamp(static_cast<int>(std::lround(p)), 1, default_truncation_order);
    return {StateClass::Tag::ideal, EuclideanScalar::monomial(b.energy * std::pow(b.h, q), -q), note.str()};
  }
  return {StateClass::Tag::physical, b.energy, note.str()};
}

/// ⟨Hψ, ψ⟩ for a real grid state.
inline double energy_expectation(const Hamiltonian& h, const RealGridFunction& psi) {
  return inner_product(h.apply(psi), psi);
}

}  // namespace hfqm
