#pragma once

// LU factorization with partial pivoting for general band matrices
// (kl sub-diagonals, ku super-diagonals). Row interchanges are applied to the
// trailing part only, so solves interleave pivots with the forward sweep.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hfqm::linalg {

class BandLU {
 public:
  BandLU(std::size_t n, std::size_t kl, std::size_t ku)
      : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), a_(n * width_, 0.0), piv_(n) {}

  [[nodiscard]] std::size_t size() const { return n_; }

  /// Entry (i, j) before factorization; |i - j| must respect the band.
  double& at(std::size_t i, std::size_t j) {
    if (j + kl_ < i || j > i + ku_ + kl_) throw std::out_of_range("entry outside band");
    return a_[i * width_ + (j + kl_ - i)];
  }

  /// Factorizes in place. Exactly singular pivots are replaced by
  /// `tiny_pivot`, which is what inverse iteration wants.
  void factorize(double tiny_pivot) {
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t last_row = std::min(n_ - 1, k + kl_);
      const std::size_t last_col = std::min(n_ - 1, k + kl_ + ku_);
      std::size_t p = k;
      double best = std::abs(el(k, k));
      for (std::size_t i = k + 1; i <= last_row; ++i) {
        double v = std::abs(el(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      piv_[k] = p;
      if (p != k)
        for (std::size_t j = k; j <= last_col; ++j) std::swap(el(k, j), el(p, j));
      if (el(k, k) == 0.0) el(k, k) = tiny_pivot;
      const double pivot = el(k, k);
      for (std::size_t i = k + 1; i <= last_row; ++i) {
        double l = el(i, k) / pivot;
        el(i, k) = l;
        if (l == 0.0) continue;
        for (std::size_t j = k + 1; j <= last_col; ++j) el(i, j) -= l * el(k, j);
      }
    }
  }

  void solve_in_place(std::span<double> b) const {
    for (std::size_t k = 0; k < n_; ++k) {
      if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
      const std::size_t last_row = std::min(n_ - 1, k + kl_);
      for (std::size_t i = k + 1; i <= last_row; ++i) b[i] -= el(i, k) * b[k];
    }
    for (std::size_t kk = n_; kk-- > 0;) {
      const std::size_t last_col = std::min(n_ - 1, kk + kl_ + ku_);
      double s = b[kk];
      for (std::size_t j = kk + 1; j <= last_col; ++j) s -= el(kk, j) * b[j];
      b[kk] = s / el(kk, kk);
    }
  }

 private:
  double& el(std::size_t i, std::size_t j) { return a_[i * width_ + (j + kl_ - i)]; }
  [[nodiscard]] double el(std::size_t i, std::size_t j) const { return a_[i * width_ + (j + kl_ - i)]; }

  std::size_t n_, kl_, ku_, width_;
  std::vector<double> a_;
  std::vector<std::size_t> piv_;
};

}  // namespace hfqm::linalg
