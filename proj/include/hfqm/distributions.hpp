#pragma once

// Generalized distributions as equivalence classes of grid functions under
// pairings with a finite, explicit family of test functions. Every verdict
// (bounded, equivalent) is relative to the supplied family.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hfqm/euclidean_scalar.hpp"
#include "hfqm/grid.hpp"
#include "hfqm/operators.hpp"
#include "hfqm/symbolic.hpp"

namespace hfqm {

class SupportViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnboundedPairing : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Smooth bump A·exp(-1/(1 - r²)), r = (x - c)/R, supported on [c - R, c + R].
struct TestFunction {
  std::string id;
  double center;
  double radius;
  double amplitude = 1.0;

  [[nodiscard]] double operator()(double x) const {
    const double r = (x - center) / radius;
    const double u = 1.0 - r * r;
    return u > 0.0 ? amplitude * std::exp(-1.0 / u) : 0.0;
  }

  [[nodiscard]] double second_derivative(double x) const {
    const double r = (x - center) / radius;
    const double u = 1.0 - r * r;
    if (u <= 0.0) return 0.0;
    const double e = amplitude * std::exp(-1.0 / u);
    return e / (radius * radius) * (4.0 * r * r / (u * u * u * u) - 2.0 / (u * u) - 8.0 * r * r / (u * u * u));
  }

  [[nodiscard]] SmoothFunction as_smooth() const {
    TestFunction self = *this;
    return {[self](double x) { return self(x); }, [self](double x) { return self.second_derivative(x); }, id};
  }
};

using TestFamily = std::vector<TestFunction>;

/// Five bumps, scaled to `extent` (all supports inside |x| < extent).
inline TestFamily standard_test_family(double extent = 1.0) {
  const double s = extent;
  return {
      {"bump0", 0.0, 0.5 * s, 1.0},
      {"bump1", 0.1 * s, 0.6 * s, 2.0},
      {"bump2", -0.2 * s, 0.7 * s, 0.5},
      {"bump3", 0.3 * s, 0.4 * s, 1.5},
      {"bump4", -0.05 * s, 0.9 * s, -1.0},
  };
}

/// Support must lie strictly inside the grid's unwrapped box.
inline void require_support(const TestFunction& phi, const Grid& grid) {
  const double hw = grid.halfwidth();
  if (!(phi.center - phi.radius > -hw && phi.center + phi.radius < hw))
    throw SupportViolation("test function '" + phi.id + "' support [" + std::to_string(phi.center - phi.radius) +
                           ", " + std::to_string(phi.center + phi.radius) + "] is not inside (" +
                           std::to_string(-hw) + ", " + std::to_string(hw) + ")");
}

/// ∮u·φ° = Σ u(a)·φ(a)·d(a).
template <GridScalar T>
T pairing(const GridFunction<T>& u, const TestFunction& phi) {
  const Grid& g = *u.grid();
  require_support(phi, g);
  T s{};
  for (std::size_t a = 0; a < u.size(); ++a) {
    const double w = phi(g.point(a)) * g.weight(a);
    if (w != 0.0) s += u[a] * promote_weight<T>(w);
  }
  return s;
}

/// Symbolic-mode pairing under d(a) = ε.
inline EuclideanScalar pairing(const SymbolicState& u, const TestFunction& phi, const SymbolicContext& ctx) {
  require_support(phi, *ctx.float_stage);
  return symbolic_pairing(u, phi.as_smooth(), ctx);
}

inline bool is_bounded(const SymbolicState& u, const TestFamily& family, const SymbolicContext& ctx) {
  return std::all_of(family.begin(), family.end(),
                     [&](const TestFunction& phi) { return classify(pairing(u, phi, ctx)).finite; });
}

inline bool is_bounded(const GridFunction<EuclideanScalar>& u, const TestFamily& family) {
  return std::all_of(family.begin(), family.end(),
                     [&](const TestFunction& phi) { return classify(pairing(u, phi)).finite; });
}

/// st(∮u·φ°).
inline double associate(const SymbolicState& u, const TestFunction& phi, const SymbolicContext& ctx) {
  auto p = pairing(u, phi, ctx);
  if (!classify(p).finite)
    throw UnboundedPairing("pairing with '" + phi.id + "' is infinite: " + p.to_string());
  return standard_part(p).value;
}

inline double associate(const GridFunction<EuclideanScalar>& u, const TestFunction& phi) {
  auto p = pairing(u, phi);
  if (!classify(p).finite)
    throw UnboundedPairing("pairing with '" + phi.id + "' is infinite: " + p.to_string());
  return standard_part(p).value;
}

/// u ~ v iff every pairing of u - v is infinitesimal.
inline bool equivalent(const SymbolicState& u, const SymbolicState& v, const TestFamily& family,
                       const SymbolicContext& ctx) {
  const auto diff = u - v;
  return std::all_of(family.begin(), family.end(),
                     [&](const TestFunction& phi) { return classify(pairing(diff, phi, ctx)).infinitesimal; });
}

inline bool equivalent(const GridFunction<EuclideanScalar>& u, const GridFunction<EuclideanScalar>& v,
                       const TestFamily& family) {
  auto diff = u;
  diff -= v;
  return std::all_of(family.begin(), family.end(),
                     [&](const TestFunction& phi) { return classify(pairing(diff, phi)).infinitesimal; });
}

struct ResidualRecord {
  std::string phi_id;
  double pairing;
  std::string classification;  ///< "zero" | "small" | "finite" against the tolerance
};

struct ConnectionReport {
  double eigen_residual = 0.0;  ///< max_φ |⟨Hψ - Eψ, φ°⟩|
  std::vector<ResidualRecord> records;
};

/// Weak-form eigen-residual of (ψ, E) for H = -½·Laplacian + τδ₀ (H supplied).
inline ConnectionReport standard_connection_residual(const Hamiltonian& h, const RealGridFunction& psi, double energy,
                                                     const TestFamily& family, double tol = 1e-8) {
  auto r = h.apply(psi);
  for (std::size_t a = 0; a < r.size(); ++a) r[a] -= energy * psi[a];
  ConnectionReport rep;
  for (const auto& phi : family) {
    const double p = pairing(r, phi);
    rep.eigen_residual = std::max(rep.eigen_residual, std::abs(p));
    rep.records.push_back({phi.id, p, p == 0.0 ? "zero" : (std::abs(p) <= tol ? "small" : "finite")});
  }
  return rep;
}

/// max_φ |⟨ψ, φ°⟩ - ⟨w°, φ°⟩| with ψ's overall sign aligned to w°.
inline double oracle_mismatch(const RealGridFunction& psi, const std::function<double(double)>& w,
                              const TestFamily& family) {
  const auto wg = embed(w, psi.grid());
  const double s = inner_product(psi, wg) < 0.0 ? -1.0 : 1.0;
  double worst = 0.0;
  for (const auto& phi : family) worst = std::max(worst, std::abs(s * pairing(psi, phi) - pairing(wg, phi)));
  return worst;
}

/// The member of eigenvalue j's numerical eigenspace closest to w°: the
/// normalized W-projection of w° onto the cluster {v_i : |λ_i - λ_j| ≤ gap}.
inline RealGridFunction closest_in_eigenspace(const SpectralDecomposition& dec, std::size_t j,
                                              const std::function<double(double)>& w, double rel_gap = 1e-9) {
  const auto wg = embed(w, dec.grid);
  double scale = 0.0;
  for (double l : dec.eigenvalues) scale = std::max(scale, std::abs(l));
  const double gap = rel_gap * std::max(scale, 1.0);
  std::vector<double> out(wg.size(), 0.0);
  for (std::size_t i = 0; i < dec.size(); ++i) {
    if (std::abs(dec.eigenvalues[i] - dec.eigenvalues[j]) > gap) continue;
    const double c = dec.coefficient<double>(wg.values(), i);
    for (std::size_t a = 0; a < out.size(); ++a) out[a] += c * dec.eigenvectors[i][a];
  }
  RealGridFunction p(dec.grid, std::move(out));
  const double nrm = norm(p);
  if (nrm == 0.0) throw std::domain_error("oracle function is orthogonal to the eigenspace");
  p *= 1.0 / nrm;
  return p;
}

}  // namespace hfqm
