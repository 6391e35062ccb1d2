#pragma once

// Non-Archimedean scalars: truncated Laurent series in a formal positive
// infinitesimal ε, plus their complexification.
//
// A value is  Σ_{k=-K..K} c_k ε^k  with 64-bit floating coefficients.
// Terms beyond ε^K are silently discarded by every operation. Results that
// would need a term below ε^-K throw ExponentUnderflow instead: dropping the
// most significant part of an infinite number would change its order of
// magnitude.
//
// Ordering uses the exact sign of the stored coefficient at the smallest
// exponent. Coefficients are floating point, so catastrophic cancellation can
// misorder two nearly equal scalars.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hfqm {

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ExponentUnderflow : public std::range_error {
 public:
  using std::range_error::range_error;
};

enum class Magnitude { infinitesimal, finite, infinite };

/// Size class of a scalar. Every infinitesimal is also finite, so both flags
/// are reported.
struct Classification {
  bool infinitesimal = false;
  bool finite = false;

  [[nodiscard]] bool infinite() const { return !finite; }
  [[nodiscard]] Magnitude kind() const {
    if (infinitesimal) return Magnitude::infinitesimal;
    return finite ? Magnitude::finite : Magnitude::infinite;
  }
};

/// st(ξ): the real number infinitely close to a finite ξ, or ±∞.
struct StandardPart {
  enum class Kind { finite, plus_infinity, minus_infinity };

  Kind kind = Kind::finite;
  double value = 0.0;

  static StandardPart real(double v) { return {Kind::finite, v}; }
  static StandardPart plus_infinity() { return {Kind::plus_infinity, HUGE_VAL}; }
  static StandardPart minus_infinity() { return {Kind::minus_infinity, -HUGE_VAL}; }

  [[nodiscard]] bool is_finite() const { return kind == Kind::finite; }
  friend bool operator==(const StandardPart&, const StandardPart&) = default;
};

namespace detail {

inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return std::to_string(v);
  return {buf.data(), end};
}

}  // namespace detail

template <int K>
class BasicEuclidean {
  static_assert(K >= 1, "truncation order must be positive");

 public:
  static constexpr int order = K;
  static constexpr int min_exponent = -K;
  static constexpr int max_exponent = K;

  BasicEuclidean() = default;

  // Implicit, like std::complex<double> from double: reals embed as ε^0 terms.
  BasicEuclidean(double real) {  // NOLINT(google-explicit-constructor)
    c_[index(0)] = real;
    canonicalize();
  }

  static BasicEuclidean epsilon() { return monomial(1.0, 1); }

  /// c·ε^k. Exponents above K truncate to zero; below -K throw.
  static BasicEuclidean monomial(double c, int k) {
    BasicEuclidean r;
    if (k > K || c == 0.0) return r;
    if (k < -K) throw ExponentUnderflow("monomial exponent below -K");
    r.c_[index(k)] = c;
    r.canonicalize();
    return r;
  }

  /// Builds from (exponent, coefficient) pairs; repeated exponents add.
  static BasicEuclidean from_terms(const std::vector<std::pair<int, double>>& terms) {
    BasicEuclidean r;
    for (auto [k, c] : terms) r += monomial(c, k);
    return r;
  }

  [[nodiscard]] double coeff(int k) const {
    if (k < -K || k > K) return 0.0;
    return c_[index(k)];
  }

  /// Nonzero terms in ascending exponent order; empty for zero.
  [[nodiscard]] std::vector<std::pair<int, double>> terms() const {
    std::vector<std::pair<int, double>> out;
    for (int k = -K; k <= K; ++k)
      if (c_[index(k)] != 0.0) out.emplace_back(k, c_[index(k)]);
    return out;
  }

  [[nodiscard]] bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
  }

  /// Smallest exponent with a nonzero coefficient (the order of magnitude).
  [[nodiscard]] std::optional<int> leading_exponent() const {
    for (int k = -K; k <= K; ++k)
      if (c_[index(k)] != 0.0) return k;
    return std::nullopt;
  }

  [[nodiscard]] double leading_coefficient() const {
    auto k = leading_exponent();
    return k ? c_[index(*k)] : 0.0;
  }

  [[nodiscard]] int sign() const {
    double lead = leading_coefficient();
    return (lead > 0.0) - (lead < 0.0);
  }

  BasicEuclidean operator-() const {
    BasicEuclidean r = *this;
    for (double& v : r.c_) v = -v;
    r.canonicalize();
    return r;
  }

  BasicEuclidean& operator+=(const BasicEuclidean& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    canonicalize();
    return *this;
  }
  BasicEuclidean& operator-=(const BasicEuclidean& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    canonicalize();
    return *this;
  }
  BasicEuclidean& operator*=(const BasicEuclidean& o) { return *this = *this * o; }
  BasicEuclidean& operator/=(const BasicEuclidean& o) { return *this = *this / o; }

  friend BasicEuclidean operator+(BasicEuclidean a, const BasicEuclidean& b) { return a += b; }
  friend BasicEuclidean operator-(BasicEuclidean a, const BasicEuclidean& b) { return a -= b; }

  friend BasicEuclidean operator*(const BasicEuclidean& a, const BasicEuclidean& b) {
    // Wide accumulator over exponents [-2K, 2K]; fixed summation order.
    std::array<double, 4 * K + 1> wide{};
    for (int i = -K; i <= K; ++i) {
      double ai = a.c_[index(i)];
      if (ai == 0.0) continue;
      for (int j = -K; j <= K; ++j) {
        double bj = b.c_[index(j)];
        if (bj == 0.0 || i + j > K) continue;
        wide[static_cast<std::size_t>(i + j + 2 * K)] += ai * bj;
      }
    }
    return from_wide(wide);
  }

  /// Exact truncation of the quotient series: b = c·ε^m·(1 + r) is inverted
  /// by the geometric series Σ(-r)^j, evaluated as a recurrence.
  friend BasicEuclidean operator/(const BasicEuclidean& a, const BasicEuclidean& b) {
    auto lead = b.leading_exponent();
    if (!lead) throw DivisionByZero("division by zero Euclidean scalar");
    const int m = *lead;
    const double c = b.c_[index(m)];
    const double inv_c = 1.0 / c;
    if (!std::isfinite(inv_c)) throw DivisionByZero("leading coefficient of divisor underflows");

    // r_j: relative coefficients of b, j = 1..K-m.
    const int r_len = K - m;
    std::vector<double> r(static_cast<std::size_t>(r_len) + 1, 0.0);
    for (int j = 1; j <= r_len; ++j) r[static_cast<std::size_t>(j)] = b.c_[index(m + j)] * inv_c;

    // Quotient exponent e = p - m + t for a-term p and series term t.
    // Keeping e <= K with p >= -K needs t <= 2K + m.
    const int t_max = 2 * K + m;
    std::vector<double> q(static_cast<std::size_t>(t_max) + 1, 0.0);
    q[0] = 1.0;
    for (int t = 1; t <= t_max; ++t) {
      double s = 0.0;
      for (int i = 1; i <= std::min(t, r_len); ++i)
        s -= r[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(t - i)];
      q[static_cast<std::size_t>(t)] = s;
    }

    std::array<double, 4 * K + 1> wide{};
    for (int p = -K; p <= K; ++p) {
      double ap = a.c_[index(p)];
      if (ap == 0.0) continue;
      for (int t = 0; t <= t_max; ++t) {
        int e = p - m + t;
        if (e > K) break;
        if (e < -2 * K) continue;
        wide[static_cast<std::size_t>(e + 2 * K)] += ap * q[static_cast<std::size_t>(t)] * inv_c;
      }
    }
    // Exponents below -2K cannot arise from nonzero a and |m| <= K except
    // through p - m < -2K, impossible since p >= -K and m <= K.
    return from_wide(wide);
  }

  friend bool operator==(const BasicEuclidean& a, const BasicEuclidean& b) { return a.c_ == b.c_; }

  friend std::strong_ordering operator<=>(const BasicEuclidean& a, const BasicEuclidean& b) {
    // Sign of the leading coefficient of a - b, computed without a
    // temporary so underflow of the difference cannot occur.
    for (int k = -K; k <= K; ++k) {
      double d = a.c_[index(k)] - b.c_[index(k)];
      if (d < 0.0) return std::strong_ordering::less;
      if (d > 0.0) return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

  /// "c_{-m}ε^-m + … + c_0 + c_1ε + …" with unit coefficients omitted.
  [[nodiscard]] std::string to_string() const {
    auto ts = terms();
    if (ts.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto [k, c] : ts) {
      double mag = std::abs(c);
      if (first) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      first = false;
      if (k == 0 || mag != 1.0) out += detail::format_double(mag);
      if (k != 0) {
        out += "ε";
        if (k != 1) out += "^" + std::to_string(k);
      }
    }
    return out;
  }

  /// Inverse of to_string. Accepts "ε" or "eps" for the generator.
  static BasicEuclidean parse(std::string_view text) {
    BasicEuclidean result;
    std::size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    };
    auto fail = [&](const char* what) {
      throw std::invalid_argument(std::string("cannot parse Euclidean scalar '") + std::string(text) +
                                  "': " + what);
    };
    const std::string_view eps_utf8 = "ε";

    skip_ws();
    if (pos == text.size()) fail("empty input");
    bool expect_term = true;
    double sign = 1.0;
    while (pos < text.size()) {
      skip_ws();
      if (pos >= text.size()) break;
      if (!expect_term) {
        if (text[pos] == '+') sign = 1.0;
        else if (text[pos] == '-') sign = -1.0;
        else fail("expected '+' or '-' between terms");
        ++pos;
        expect_term = true;
        continue;
      }
      if (text[pos] == '-' || text[pos] == '+') {
        if (text[pos] == '-') sign = -sign;
        ++pos;
        skip_ws();
      }
      double coeff = 1.0;
      bool have_number = false;
      if (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), coeff);
        if (ec != std::errc{}) fail("bad coefficient");
        pos = static_cast<std::size_t>(ptr - text.data());
        have_number = true;
      }
      int exponent = 0;
      bool have_eps = false;
      if (text.substr(pos, eps_utf8.size()) == eps_utf8) {
        pos += eps_utf8.size();
        have_eps = true;
      } else if (text.substr(pos, 3) == "eps") {
        pos += 3;
        have_eps = true;
      }
      if (have_eps) {
        exponent = 1;
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), exponent);
          if (ec != std::errc{}) fail("bad exponent");
          pos = static_cast<std::size_t>(ptr - text.data());
        }
      }
      if (!have_number && !have_eps) fail("expected a term");
      result += monomial(sign * coeff, exponent);
      sign = 1.0;
      expect_term = false;
    }
    if (expect_term) fail("dangling operator");
    return result;
  }

 private:
  static constexpr std::size_t index(int k) { return static_cast<std::size_t>(k + K); }

  static BasicEuclidean from_wide(const std::array<double, 4 * K + 1>& wide) {
    BasicEuclidean r;
    for (int e = -2 * K; e < -K; ++e)
      if (wide[static_cast<std::size_t>(e + 2 * K)] != 0.0)
        throw ExponentUnderflow("result needs a term below ε^-K");
    for (int e = -K; e <= K; ++e) r.c_[index(e)] = wide[static_cast<std::size_t>(e + 2 * K)];
    r.canonicalize();
    return r;
  }

  void canonicalize() {
    for (double& v : c_) {
      if (!std::isfinite(v)) throw std::domain_error("non-finite Euclidean coefficient");
      if (v == 0.0) v = 0.0;  // folds -0.0
    }
  }

  std::array<double, 2 * K + 1> c_{};
};

/// Default desk-scale truncation order.
inline constexpr int default_truncation_order = 4;
using EuclideanScalar = BasicEuclidean<default_truncation_order>;

template <int K>
std::strong_ordering compare(const BasicEuclidean<K>& a, const BasicEuclidean<K>& b) {
  return a <=> b;
}

template <int K>
Classification classify(const BasicEuclidean<K>& a) {
  auto lead = a.leading_exponent();
  if (!lead) return {true, true};
  return {*lead > 0, *lead >= 0};
}

template <int K>
StandardPart standard_part(const BasicEuclidean<K>& a) {
  auto lead = a.leading_exponent();
  if (lead && *lead < 0)
    return a.leading_coefficient() > 0 ? StandardPart::plus_infinity() : StandardPart::minus_infinity();
  return StandardPart::real(a.coeff(0));
}

template <int K>
bool infinitely_close(const BasicEuclidean<K>& a, const BasicEuclidean<K>& b) {
  return classify(a - b).infinitesimal;
}

template <int K>
BasicEuclidean<K> abs(const BasicEuclidean<K>& a) {
  return a.sign() < 0 ? -a : a;
}

// ---------------------------------------------------------------------------
// Complexification 𝔼 + i𝔼.

template <int K>
struct BasicComplexEuclidean {
  BasicEuclidean<K> re;
  BasicEuclidean<K> im;

  BasicComplexEuclidean() = default;
  BasicComplexEuclidean(BasicEuclidean<K> r, BasicEuclidean<K> i = {}) : re(std::move(r)), im(std::move(i)) {}  // NOLINT
  BasicComplexEuclidean(double r) : re(r) {}  // NOLINT

  static BasicComplexEuclidean i() { return {BasicEuclidean<K>{}, BasicEuclidean<K>{1.0}}; }

  BasicComplexEuclidean operator-() const { return {-re, -im}; }
  BasicComplexEuclidean& operator+=(const BasicComplexEuclidean& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  BasicComplexEuclidean& operator-=(const BasicComplexEuclidean& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  BasicComplexEuclidean& operator*=(const BasicComplexEuclidean& o) { return *this = *this * o; }

  friend BasicComplexEuclidean operator+(BasicComplexEuclidean a, const BasicComplexEuclidean& b) { return a += b; }
  friend BasicComplexEuclidean operator-(BasicComplexEuclidean a, const BasicComplexEuclidean& b) { return a -= b; }
  friend BasicComplexEuclidean operator*(const BasicComplexEuclidean& a, const BasicComplexEuclidean& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend BasicComplexEuclidean operator/(const BasicComplexEuclidean& a, const BasicComplexEuclidean& b) {
    BasicEuclidean<K> den = b.re * b.re + b.im * b.im;
    BasicComplexEuclidean num = a * conj(b);
    return {num.re / den, num.im / den};
  }
  friend bool operator==(const BasicComplexEuclidean&, const BasicComplexEuclidean&) = default;

  friend BasicComplexEuclidean conj(const BasicComplexEuclidean& z) { return {z.re, -z.im}; }
  [[nodiscard]] BasicEuclidean<K> norm_squared() const { return re * re + im * im; }

  [[nodiscard]] std::string to_string() const {
    return "(" + re.to_string() + ") + i(" + im.to_string() + ")";
  }
};

using ComplexEuclidean = BasicComplexEuclidean<default_truncation_order>;

/// Finite iff both components are finite; infinitesimal iff both are.
template <int K>
Classification classify(const BasicComplexEuclidean<K>& z) {
  auto a = classify(z.re);
  auto b = classify(z.im);
  return {a.infinitesimal && b.infinitesimal, a.finite && b.finite};
}

}  // namespace hfqm
