#pragma once

// Symbolic (Euclidean-valued) mode of the grid calculus.
//
// No ε⁻¹-sized grid is materialized. States live in a restricted algebra:
// finite combinations of δ_a, √δ_a (at standard points a) and embedded smooth
// functions f°, with Euclidean coefficients. Pairings are supplied by rule,
// with every point weight d(a) identified with ε (one refinement step of the
// stage is one power of ε, i.e. 1/h ↔ ε⁻¹):
//
//   ∮ δ_a·f°      = f(a)
//   ⟨δ_a, δ_b⟩    = δ_ab / ε
//   ⟨f°, g°⟩      = float-stage value, promoted to the ε⁰ coefficient
//
// √δ_a carries ε^{-1/2}. Results whose ε^{1/2}-part does not cancel are
// outside the integer-exponent field and raise UnsupportedState.

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hfqm/derivative.hpp"
#include "hfqm/euclidean_scalar.hpp"
#include "hfqm/grid.hpp"

namespace hfqm {

class UnsupportedState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A smooth real function with optional analytic second derivative.
struct SmoothFunction {
  std::function<double(double)> value;
  std::function<double(double)> second_derivative;  // may be empty
  std::string label;

  [[nodiscard]] double operator()(double x) const { return value(x); }

  /// f''(x); falls back to a central difference with step 1e-4.
  [[nodiscard]] double d2(double x) const {
    if (second_derivative) return second_derivative(x);
    const double s = 1e-4;
    return (value(x + s) - 2.0 * value(x) + value(x - s)) / (s * s);
  }
};

/// w + ε^{1/2}·half, closed under the products the pairing rules need.
struct HalfOrderValue {
  EuclideanScalar whole;
  EuclideanScalar half;

  friend HalfOrderValue operator+(const HalfOrderValue& a, const HalfOrderValue& b) {
    return {a.whole + b.whole, a.half + b.half};
  }
  friend HalfOrderValue operator*(const HalfOrderValue& a, const HalfOrderValue& b) {
    return {a.whole * b.whole + EuclideanScalar::epsilon() * a.half * b.half, a.whole * b.half + a.half * b.whole};
  }
  friend HalfOrderValue operator*(const EuclideanScalar& s, const HalfOrderValue& a) {
    return {s * a.whole, s * a.half};
  }

  /// The integer-exponent value; throws when a ε^{1/2}-part survives.
  [[nodiscard]] EuclideanScalar require_whole(const char* what) const {
    if (!half.is_zero())
      throw UnsupportedState(std::string(what) + " has a half-integer ε-exponent part (" + half.to_string() +
                             ")·ε^(1/2)");
    return whole;
  }
};

class SymbolicState {
 public:
  struct SmoothTerm {
    EuclideanScalar coeff;
    SmoothFunction f;
  };

  SymbolicState() = default;

  static SymbolicState delta_at(double a, EuclideanScalar c = 1.0) {
    SymbolicState s;
    s.deltas_[a] = std::move(c);
    return s;
  }
  static SymbolicState sqrt_delta_at(double a, EuclideanScalar c = 1.0) {
    SymbolicState s;
    s.sqrt_deltas_[a] = std::move(c);
    return s;
  }
  static SymbolicState smooth(SmoothFunction f, EuclideanScalar c = 1.0) {
    SymbolicState s;
    s.smooth_.push_back({std::move(c), std::move(f)});
    return s;
  }

  SymbolicState& operator+=(const SymbolicState& o) {
    for (const auto& [a, c] : o.deltas_) deltas_[a] += c;
    for (const auto& [a, c] : o.sqrt_deltas_) sqrt_deltas_[a] += c;
    smooth_.insert(smooth_.end(), o.smooth_.begin(), o.smooth_.end());
    return *this;
  }
  friend SymbolicState operator+(SymbolicState a, const SymbolicState& b) { return a += b; }
  friend SymbolicState operator*(const EuclideanScalar& s, SymbolicState a) {
    for (auto& [pos, c] : a.deltas_) c = s * c;
    for (auto& [pos, c] : a.sqrt_deltas_) c = s * c;
    for (auto& t : a.smooth_) t.coeff = s * t.coeff;
    return a;
  }
  friend SymbolicState operator-(SymbolicState a, const SymbolicState& b) {
    return a += EuclideanScalar(-1.0) * b;
  }

  [[nodiscard]] const std::map<double, EuclideanScalar>& deltas() const { return deltas_; }
  [[nodiscard]] const std::map<double, EuclideanScalar>& sqrt_deltas() const { return sqrt_deltas_; }
  [[nodiscard]] const std::vector<SmoothTerm>& smooth_terms() const { return smooth_; }

  /// Standard points carrying a δ or √δ term.
  [[nodiscard]] std::vector<double> support_points() const {
    std::map<double, bool> pts;
    for (const auto& [a, c] : deltas_) pts[a] = true;
    for (const auto& [a, c] : sqrt_deltas_) pts[a] = true;
    std::vector<double> out;
    for (const auto& [a, b] : pts) out.push_back(a);
    return out;
  }

  /// Coefficient of χ_a: α_a·ε⁻¹ + β_a·ε^{-1/2}.
  [[nodiscard]] HalfOrderValue point_amplitude(double a) const {
    const auto inv_eps = EuclideanScalar::monomial(1.0, -1);
    HalfOrderValue v;
    if (auto it = deltas_.find(a); it != deltas_.end()) v.whole = it->second * inv_eps;
    if (auto it = sqrt_deltas_.find(a); it != sqrt_deltas_.end()) v.half = it->second * inv_eps;
    return v;
  }

  /// Σ γ_i f_i(x): the smooth part's value (ε-coefficients kept).
  [[nodiscard]] EuclideanScalar smooth_value(double x) const {
    EuclideanScalar s;
    for (const auto& t : smooth_) s += t.coeff * EuclideanScalar(t.f(x));
    return s;
  }

  [[nodiscard]] EuclideanScalar smooth_second_derivative(double x) const {
    EuclideanScalar s;
    for (const auto& t : smooth_) s += t.coeff * EuclideanScalar(t.f.d2(x));
    return s;
  }

 private:
  std::map<double, EuclideanScalar> deltas_;
  std::map<double, EuclideanScalar> sqrt_deltas_;
  std::vector<SmoothTerm> smooth_;
};

/// The float stage on which smooth-smooth pairings are evaluated, and the
/// Laplacian variant whose diagonal fixes the point self-energy.
struct SymbolicContext {
  GridPtr float_stage;
  LaplacianVariant variant = LaplacianVariant::compact;

  /// (-½·Laplacian)_aa · h²: 1 for compact, ¼ for D∘D.
  [[nodiscard]] double kinetic_diagonal_factor() const {
    return variant == LaplacianVariant::compact ? 1.0 : 0.25;
  }
};

/// ∮ψ·φ° under the symbolic pairing rules.
inline EuclideanScalar symbolic_pairing(const SymbolicState& psi, const SmoothFunction& phi,
                                        const SymbolicContext& ctx) {
  const auto eps = EuclideanScalar::epsilon();
  HalfOrderValue total;
  for (double a : psi.support_points()) {
    // χ_a·φ° integrates to φ(a)·d(a) = φ(a)·ε.
    total = total + (eps * EuclideanScalar(phi(a))) * psi.point_amplitude(a);
  }
  for (const auto& t : psi.smooth_terms()) {
    auto f = embed(t.f.value, ctx.float_stage);
    auto g = embed(phi.value, ctx.float_stage);
    total.whole += t.coeff * EuclideanScalar(pointwise_integral(multiply(f, g)));
  }
  return total.require_whole("pairing");
}

/// ⟨ψ, ψ⟩ under the symbolic rules.
inline EuclideanScalar symbolic_norm_squared(const SymbolicState& psi, const SymbolicContext& ctx) {
  const auto eps = EuclideanScalar::epsilon();
  HalfOrderValue total;
  for (double a : psi.support_points()) {
    auto amp = psi.point_amplitude(a);
    HalfOrderValue s{psi.smooth_value(a), {}};
    total = total + eps * (amp * amp);
    total = total + EuclideanScalar(2.0) * eps * (amp * s);
  }
  EuclideanScalar smooth_part;
  for (const auto& t1 : psi.smooth_terms())
    for (const auto& t2 : psi.smooth_terms()) {
      auto f = embed(t1.f.value, ctx.float_stage);
      auto g = embed(t2.f.value, ctx.float_stage);
      smooth_part += t1.coeff * t2.coeff * EuclideanScalar(inner_product(f, g));
    }
  total.whole += smooth_part;
  return total.require_whole("norm");
}

/// ⟨Hψ, ψ⟩ for H = -½·Laplacian + τ·δ_0.
inline EuclideanScalar symbolic_energy(const SymbolicState& psi, const EuclideanScalar& tau,
                                       const SymbolicContext& ctx) {
  const auto eps = EuclideanScalar::epsilon();
  const auto inv_eps = EuclideanScalar::monomial(1.0, -1);
  const double kappa = ctx.kinetic_diagonal_factor();
  HalfOrderValue total;

  for (double a : psi.support_points()) {
    auto amp = psi.point_amplitude(a);
    // Point self-energy: d(a)·|A|²·κ/d(a)² = κ·|A|²/ε.
    total = total + EuclideanScalar(kappa) * inv_eps * (amp * amp);
    // Cross term with the smooth part: 2·A·d(a)·(-½ S''(a)).
    HalfOrderValue cross{-psi.smooth_second_derivative(a), {}};
    total = total + eps * (amp * cross);
  }

  // Smooth-smooth kinetic form at the float stage.
  if (!psi.smooth_terms().empty()) {
    const auto& g = ctx.float_stage;
    const auto lap = laplacian(g, ctx.variant).scaled(-0.5);
    EuclideanScalar kin;
    for (const auto& t1 : psi.smooth_terms())
      for (const auto& t2 : psi.smooth_terms()) {
        auto f = embed(t1.f.value, g);
        auto h = embed(t2.f.value, g);
        RealGridFunction hf(g, lap.apply<double>(f.values()));
        kin += t1.coeff * t2.coeff * EuclideanScalar(inner_product(hf, h));
      }
    total.whole += kin;
  }

  // τ·|ψ(0)|² with ψ(0) = A_0 + S(0).
  if (!tau.is_zero()) {
    HalfOrderValue at0 = psi.point_amplitude(0.0) + HalfOrderValue{psi.smooth_value(0.0), {}};
    total = total + tau * (at0 * at0);
  }
  return total.require_whole("energy expectation");
}

/// |ψ(q)|²·d(q) with d(q) = ε, for a finite amplitude ψ(q).
inline EuclideanScalar symbolic_position_probability(double amplitude) {
  return EuclideanScalar::monomial(amplitude * amplitude, 1);
}

}  // namespace hfqm
