#pragma once

// Row-compressed real matrix used for derivative operators and Hamiltonians.
// Rows are kept sorted by column; products sum in ascending column order so
// results are bitwise reproducible.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hfqm::linalg {

class SparseMatrix {
 public:
  struct Entry {
    std::size_t col;
    double value;
  };

  SparseMatrix() = default;
  explicit SparseMatrix(std::size_t n) : rows_(n) {}

  [[nodiscard]] std::size_t size() const { return rows_.size(); }

  /// Adds v to entry (i, j).
  void add(std::size_t i, std::size_t j, double v) {
    if (i >= size() || j >= size()) throw std::out_of_range("sparse matrix index out of range");
    auto& row = rows_[i];
    auto it = std::lower_bound(row.begin(), row.end(), j, [](const Entry& e, std::size_t c) { return e.col < c; });
    if (it != row.end() && it->col == j) it->value += v;
    else row.insert(it, Entry{j, v});
  }

  [[nodiscard]] double at(std::size_t i, std::size_t j) const {
    const auto& row = rows_.at(i);
    auto it = std::lower_bound(row.begin(), row.end(), j, [](const Entry& e, std::size_t c) { return e.col < c; });
    return (it != row.end() && it->col == j) ? it->value : 0.0;
  }

  [[nodiscard]] std::span<const Entry> row(std::size_t i) const { return rows_[i]; }

  template <class T>
  void apply(std::span<const T> x, std::span<T> y) const {
    for (std::size_t i = 0; i < size(); ++i) {
      T s{};
      for (const auto& e : rows_[i]) s += x[e.col] * e.value;
      y[i] = s;
    }
  }

  template <class T>
  [[nodiscard]] std::vector<T> apply(std::span<const T> x) const {
    std::vector<T> y(size());
    apply<T>(x, std::span<T>(y));
    return y;
  }

  [[nodiscard]] SparseMatrix operator*(const SparseMatrix& b) const {
    SparseMatrix c(size());
    for (std::size_t i = 0; i < size(); ++i)
      for (const auto& e : rows_[i])
        for (const auto& f : b.rows_[e.col]) c.add(i, f.col, e.value * f.value);
    c.prune();
    return c;
  }

  [[nodiscard]] SparseMatrix scaled(double s) const {
    SparseMatrix c = *this;
    for (auto& row : c.rows_)
      for (auto& e : row) e.value *= s;
    return c;
  }

  void add_diagonal(std::span<const double> d) {
    for (std::size_t i = 0; i < size(); ++i)
      if (d[i] != 0.0) add(i, i, d[i]);
  }

  /// Drops exact zeros created by cancellation.
  void prune() {
    for (auto& row : rows_)
      row.erase(std::remove_if(row.begin(), row.end(), [](const Entry& e) { return e.value == 0.0; }), row.end());
  }

  /// Largest periodic index distance min(|i-j|, n-|i-j|) among stored entries.
  [[nodiscard]] std::size_t periodic_bandwidth() const {
    std::size_t n = size(), b = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& e : rows_[i]) {
        std::size_t d = i > e.col ? i - e.col : e.col - i;
        b = std::max(b, std::min(d, n - d));
      }
    return b;
  }

  [[nodiscard]] std::vector<double> to_dense() const {
    std::size_t n = size();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& e : rows_[i]) a[i * n + e.col] = e.value;
    return a;
  }

  /// Max |a_ij| over stored entries.
  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for (const auto& row : rows_)
      for (const auto& e : row) m = std::max(m, std::abs(e.value));
    return m;
  }

  /// Max absolute row sum (infinity norm).
  [[nodiscard]] double norm_inf() const {
    double m = 0.0;
    for (const auto& row : rows_) {
      double s = 0.0;
      for (const auto& e : row) s += std::abs(e.value);
      m = std::max(m, s);
    }
    return m;
  }

 private:
  std::vector<std::vector<Entry>> rows_;
};

}  // namespace hfqm::linalg
