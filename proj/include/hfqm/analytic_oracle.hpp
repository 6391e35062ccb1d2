#pragma once

// Continuum reference solutions: the delta potential in a box |x| < L with
// ψ(±L) = 0, its square-wall regularization, and the closed-form 2D/3D
// bound-state estimates. Every transcendental equation is solved by
// bracketed bisection.
//
// Convention: H = -½ψ'' + τδ(x)ψ. Even states ψ = A·sin(k(|x| - L)) satisfy
// the jump condition ψ'(0+) - ψ'(0-) = 2τψ(0), i.e. k·cot(kL) = -τ.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hfqm::oracle {

class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double a, double b, double fa, double fb)
      : std::runtime_error(describe(what, a, b, fa, fb)), a_(a), b_(b) {}
  [[nodiscard]] double lower() const { return a_; }
  [[nodiscard]] double upper() const { return b_; }

 private:
  static std::string describe(const std::string& what, double a, double b, double fa, double fb) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": no sign change on [" << a << ", " << b << "] (f(a) = " << fa << ", f(b) = " << fb << ")";
    return os.str();
  }
  double a_, b_;
};

/// Root of f in [a, b] to machine resolution; f(a), f(b) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double a, double b, const std::string& what = "bisect") {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa < 0.0) == (fb < 0.0)) throw BracketError(what, a, b, fa, fb);
  for (int i = 0; i < 400; ++i) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

enum class Sign { barrier, well };
enum class Parity { even, odd };

inline std::string_view to_string(Sign s) { return s == Sign::barrier ? "barrier" : "well"; }
inline std::string_view to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

struct BoxProblem {
  double L;
  double strength;  ///< |τ|
  Sign sign;
  Parity parity;

  void validate() const {
    if (!(L > 0.0)) throw std::invalid_argument("box half-length L must be positive");
    if (!(strength >= 0.0)) throw std::invalid_argument("strength must be non-negative");
  }
  /// Signed transparency.
  [[nodiscard]] double tau() const { return sign == Sign::barrier ? strength : -strength; }
};

struct Mode {
  double k;
  double energy;
  bool bound = false;  ///< E = -k²/2
};

inline double bound_state_energy_1d(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("bound-state strength must be positive");
  return -0.5 * s * s;
}

/// Sign changes of k - s·tanh(kL) on the geometric sweep k = s·2^{-i}.
inline std::size_t finite_box_sign_changes(double L, double s, int steps = 80) {
  auto g = [&](double k) { return k - s * std::tanh(k * L); };
  std::size_t changes = 0;
  double prev = g(s);
  for (int i = 1; i <= steps; ++i) {
    double cur = g(std::ldexp(s, -i));
    if ((cur < 0.0) != (prev < 0.0)) ++changes;
    prev = cur;
  }
  return changes;
}

/// Root k of k·coth(kL) = s (the even bound state of the well in the box).
/// It exists iff s·L > 1 and lies in (0, s].
inline double finite_box_bound_k(double L, double s) {
  if (!(L > 0.0) || !(s > 0.0)) throw std::invalid_argument("finite box bound state needs L, s > 0");
  auto g = [&](double k) { return k - s * std::tanh(k * L); };
  double hi = s;
  if (g(hi) == 0.0) return hi;
  for (int i = 1; i <= 200; ++i) {
    const double lo = std::ldexp(s, -i);
    if (g(lo) < 0.0) return bisect(g, lo, hi, "k coth(kL) = s");
    hi = lo;
  }
  throw BracketError("k coth(kL) = s (requires s*L > 1)", 0.0, s, 0.0, g(s));
}

inline double finite_box_bound_energy(double L, double s) {
  const double k = finite_box_bound_k(L, s);
  return -0.5 * k * k;
}

/// Residual of the even equation in cotangent form: k·cot(kL) ± s.
inline double even_residual(const BoxProblem& p, double k) {
  const double c = k * std::cos(k * p.L) / std::sin(k * p.L);
  return p.sign == Sign::barrier ? c + p.strength : c - p.strength;
}

/// Odd-parity wave numbers by the closed forms (π + 2πn)/L (barrier, n ≥ 0)
/// and 2πn/L (well, n ≥ 1).
inline std::vector<Mode> odd_closed_form(const BoxProblem& p, std::size_t count) {
  std::vector<Mode> out;
  for (std::size_t n = 0; n < count; ++n) {
    const double nn = static_cast<double>(p.sign == Sign::barrier ? n : n + 1);
    const double k = p.sign == Sign::barrier ? (std::numbers::pi + 2.0 * std::numbers::pi * nn) / p.L
                                             : 2.0 * std::numbers::pi * nn / p.L;
    out.push_back({k, 0.5 * k * k});
  }
  return out;
}

/// Odd states of the Dirichlet box: sin(kL) = 0, k = mπ/L, m ≥ 1. The delta
/// does not see them since ψ(0) = 0.
inline std::vector<Mode> odd_dirichlet(double L, std::size_t count) {
  std::vector<Mode> out;
  for (std::size_t m = 1; m <= count; ++m) {
    const double k = static_cast<double>(m) * std::numbers::pi / L;
    out.push_back({k, 0.5 * k * k});
  }
  return out;
}

/// First `count` positive roots of k·cot(kL) = -s (barrier) or +s (well).
/// Each interval (jπ/L, (j+1)π/L) is sampled for sign changes of the
/// pole-free g(k) = k·cos(kL) ± s·sin(kL), then bisected.
inline std::vector<Mode> even_roots(const BoxProblem& p, std::size_t count) {
  const double pm = p.sign == Sign::barrier ? 1.0 : -1.0;
  auto g = [&](double k) { return k * std::cos(k * p.L) + pm * p.strength * std::sin(k * p.L); };
  std::vector<Mode> out;
  const double step = std::numbers::pi / p.L;
  const int sub = 64;
  for (std::size_t j = 0; out.size() < count; ++j) {
    if (j > 100000) throw BracketError("even box roots", 0.0, static_cast<double>(j) * step, 0.0, 0.0);
    const double a = static_cast<double>(j) * step;
    double x0 = a + step * 1e-9;
    double g0 = g(x0);
    for (int s = 1; s <= sub && out.size() < count; ++s) {
      double x1 = a + step * (s == sub ? 1.0 - 1e-9 : static_cast<double>(s) / sub);
      double g1 = g(x1);
      if ((g0 < 0.0) != (g1 < 0.0)) {
        double k = bisect(g, x0, x1, "even box equation");
        out.push_back({k, 0.5 * k * k});
      }
      x0 = x1;
      g0 = g1;
    }
  }
  return out;
}

inline std::vector<Mode> box_spectrum(const BoxProblem& p, std::size_t count) {
  p.validate();
  if (count < 1) throw std::invalid_argument("box_spectrum needs count >= 1");
  return p.parity == Parity::even ? even_roots(p, count) : odd_closed_form(p, count);
}

struct SquareWellProblem {
  double L;
  double half_width;  ///< εw
  double v0;          ///< |V₀| > 0
  Sign sign;

  void validate() const {
    if (!(half_width > 0.0 && half_width < L)) throw std::invalid_argument("square well needs 0 < half_width < L");
    if (!(v0 > 0.0)) throw std::invalid_argument("square well needs V0 > 0");
  }
  [[nodiscard]] double tau() const { return 2.0 * half_width * (sign == Sign::barrier ? v0 : -v0); }
  [[nodiscard]] double potential() const { return sign == Sign::barrier ? v0 : -v0; }
};

namespace detail {

struct Pair {
  double value, slope;
};

/// Inner solution at x = w for energy E under potential v, scaled to O(1).
inline Pair inner_at(double e, double v, double w, Parity parity) {
  const double d = 2.0 * (v - e);
  if (d > 0.0) {
    const double kap = std::sqrt(d);
    const double t = std::tanh(kap * w);
    // cosh(κx) and sinh(κx)/κ, both divided by cosh(κw).
    return parity == Parity::even ? Pair{1.0, kap * t} : Pair{kap > 0 ? t / kap : w, 1.0};
  }
  const double q = std::sqrt(-d);
  if (parity == Parity::even) return {std::cos(q * w), -q * std::sin(q * w)};
  return {q > 0 ? std::sin(q * w) / q : w, std::cos(q * w)};
}

/// Outer solution vanishing at L, at x = w. Scattering: sin(k(L-x));
/// bound: sinh(κ(L-x)) / cosh(κ(L-w)).
inline Pair outer_at(double k, double L, double w, bool bound) {
  if (bound) return {std::tanh(k * (L - w)), -k};
  return {std::sin(k * (L - w)), -k * std::cos(k * (L - w))};
}

}  // namespace detail

/// Wronskian matching function ψ'_o·ψ_i - ψ_o·ψ'_i at x = εw.
inline double square_well_matching(const SquareWellProblem& p, Parity parity, double k, bool bound) {
  const double e = bound ? -0.5 * k * k : 0.5 * k * k;
  auto in = detail::inner_at(e, p.potential(), p.half_width, parity);
  auto out = detail::outer_at(k, p.L, p.half_width, bound);
  return out.slope * in.value - out.value * in.slope;
}

/// Lowest `count` states of the given parity: bound states of a well first
/// (κ scanned over (0, √(2V₀))), then scattering states in k.
inline std::vector<Mode> square_well_spectrum(const SquareWellProblem& p, Parity parity, std::size_t count) {
  p.validate();
  std::vector<Mode> out;
  auto scan = [&](double lo, double hi, std::size_t samples, bool bound) {
    auto g = [&](double k) { return square_well_matching(p, parity, k, bound); };
    double x0 = lo, g0 = g(lo);
    for (std::size_t s = 1; s <= samples && out.size() < count; ++s) {
      double x1 = lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(samples);
      double g1 = g(x1);
      if (g1 == 0.0 || (g0 < 0.0) != (g1 < 0.0)) {
        double k = g1 == 0.0 ? x1 : bisect(g, x0, x1, "square well matching");
        out.push_back({k, bound ? -0.5 * k * k : 0.5 * k * k, bound});
      }
      x0 = x1;
      g0 = g1;
    }
  };
  if (p.sign == Sign::well) {
    const double kmax = std::sqrt(2.0 * p.v0);
    scan(kmax * 1e-9, kmax * (1.0 - 1e-12), 4096, true);
    // Bound states were found from the deep end upward in κ; order by energy.
    std::reverse(out.begin(), out.end());
  }
  const double step = std::numbers::pi / p.L;
  const double k_lo = 1e-9 * step;
  for (std::size_t block = 0; out.size() < count; ++block) {
    if (block > 100000) throw BracketError("square well spectrum", 0.0, static_cast<double>(block) * step, 0.0, 0.0);
    const double a = std::max(k_lo, static_cast<double>(block) * step);
    scan(a, static_cast<double>(block + 1) * step, 256, false);
  }
  if (out.size() > count) out.resize(count);
  return out;
}

struct Normalization {
  double A;
  double psi0;
};

/// A from |A|⁻² = (2kL - sin 2kL)/(2k) for ψ = A·sin(k(|x| - L)) (even) or
/// the same constant for the odd family; ψ⁺(0) = -A·sin(kL), ψ⁻(0) = 0.
inline Normalization normalization_and_origin(double k, double L, Parity parity) {
  if (!(k > 0.0)) throw std::invalid_argument("normalization needs k > 0");
  const double inv_a2 = (2.0 * k * L - std::sin(2.0 * k * L)) / (2.0 * k);
  const double a = 1.0 / std::sqrt(inv_a2);
  return {a, parity == Parity::even ? -a * std::sin(k * L) : 0.0};
}

/// Bound even state ψ = A·sinh(k(|x| - L)); |A|⁻² = (sinh 2kL - 2kL)/(2k).
inline Normalization bound_normalization_and_origin(double k, double L) {
  if (!(k > 0.0)) throw std::invalid_argument("normalization needs k > 0");
  const double inv_a2 = (std::sinh(2.0 * k * L) - 2.0 * k * L) / (2.0 * k);
  const double a = 1.0 / std::sqrt(inv_a2);
  return {a, -a * std::sinh(k * L)};
}

/// Unit-norm even box eigenfunction, sign fixed so that ψ(0) >= 0 when
/// nonzero (otherwise the slope at 0+ is positive).
inline std::function<double(double)> even_eigenfunction(double k, double L) {
  auto n = normalization_and_origin(k, L, Parity::even);
  const double s = n.psi0 < 0.0 ? -1.0 : 1.0;
  const double a = s * n.A;
  return [a, k, L](double x) { return std::abs(x) >= L ? 0.0 : a * std::sin(k * (std::abs(x) - L)); };
}

inline std::function<double(double)> bound_eigenfunction(double k, double L) {
  auto n = bound_normalization_and_origin(k, L);
  const double a = -n.A;  // positive at the origin
  return [a, k, L](double x) { return std::abs(x) >= L ? 0.0 : a * std::sinh(k * (std::abs(x) - L)); };
}

/// Unit-norm odd Dirichlet eigenfunction sin(kx)/√L (k = mπ/L).
inline std::function<double(double)> odd_eigenfunction(double k, double L) {
  const double a = 1.0 / std::sqrt(L);
  return [a, k, L](double x) { return std::abs(x) >= L ? 0.0 : a * std::sin(k * x); };
}

// Closed-form estimates beyond one dimension.

inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
}

/// Number of 2D bound states, (1/π)·√(2τ/π).
inline double n_bound_2d(double tau) {
  require_positive(tau, "tau");
  return std::sqrt(2.0 * tau / std::numbers::pi) / std::numbers::pi;
}

/// Number of 3D bound states, (1/π)·√(3τ/(2π·εw)).
inline double n_bound_3d(double tau, double half_width) {
  require_positive(tau, "tau");
  require_positive(half_width, "half_width");
  return std::sqrt(3.0 * tau / (2.0 * std::numbers::pi * half_width)) / std::numbers::pi;
}

/// Bare 2D binding energy -(1/(2εw²))·e^{-2π/τ}.
inline double e2d_bare(double tau, double half_width) {
  require_positive(tau, "tau");
  require_positive(half_width, "half_width");
  return -std::exp(-2.0 * std::numbers::pi / tau) / (2.0 * half_width * half_width);
}

/// 1/τ_R = 1/τ + ln(σ²/ω²)/(4π), evaluated as τ/(1 + τ·ln(σ²/ω²)/(4π)).
inline double tau_renormalized(double tau, double sigma, double omega) {
  require_positive(tau, "tau");
  require_positive(sigma, "sigma");
  require_positive(omega, "omega");
  const double lg = std::log((sigma * sigma) / (omega * omega));
  return tau / (1.0 + tau * lg / (4.0 * std::numbers::pi));
}

/// Renormalized 2D binding energy -ω²·e^{-4π/τ_R}.
inline double e2d_renormalized(double tau_r, double omega) {
  require_positive(tau_r, "tau_R");
  require_positive(omega, "omega");
  return -omega * omega * std::exp(-4.0 * std::numbers::pi / tau_r);
}

}  // namespace hfqm::oracle
