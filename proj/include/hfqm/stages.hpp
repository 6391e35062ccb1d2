#pragma once

// Stage-indexed nets of values and their limit estimates. Stages form a
// chain (each refines the previous); a net is sampled on finitely many of
// them, possibly concurrently, and reported in stage order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hfqm/derivative.hpp"
#include "hfqm/grid.hpp"
#include "hfqm/linalg/symmetric_eigen.hpp"
#include "hfqm/operators.hpp"

namespace hfqm {

class NetFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t max_stage_points_1d = 4001;
inline constexpr std::size_t max_stage_points_2d = 41;  // per axis

struct NetEntry {
  std::string stage;  ///< human-readable descriptor
  double scale;       ///< resolution measure, decreasing along the net
  double value = 0.0;
  bool ok = false;
  std::string error;
};

struct Net {
  std::vector<NetEntry> entries;

  [[nodiscard]] std::vector<NetEntry> successful() const {
    std::vector<NetEntry> out;
    for (const auto& e : entries)
      if (e.ok) out.push_back(e);
    return out;
  }
  [[nodiscard]] std::vector<double> values() const {
    std::vector<double> out;
    for (const auto& e : entries)
      if (e.ok) out.push_back(e.value);
    return out;
  }
};

struct NetOptions {
  unsigned workers = 1;
  std::size_t min_successes = 3;
};

/// Evaluates `value(k)` for k < count, on up to `workers` threads. Failures
/// are recorded per entry; fewer than `min_successes` good entries throws.
inline Net run_indexed_net(const std::vector<std::string>& labels, const std::vector<double>& scales,
                           const std::function<double(std::size_t)>& value, const NetOptions& opt = {}) {
  const std::size_t count = labels.size();
  if (scales.size() != count) throw std::invalid_argument("labels and scales differ in length");
  Net net;
  net.entries.resize(count);
  for (std::size_t k = 0; k < count; ++k) net.entries[k] = {labels[k], scales[k], 0.0, false, {}};
  auto work = [&](std::size_t k) {
    try {
      net.entries[k].value = value(k);
      net.entries[k].ok = std::isfinite(net.entries[k].value);
      if (!net.entries[k].ok) net.entries[k].error = "non-finite stage value";
    } catch (const std::exception& e) {
      net.entries[k].error = e.what();
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) work(k);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < count; k += workers) work(k);
      });
    for (auto& t : pool) t.join();
  }
  const auto good = net.successful().size();
  if (good < opt.min_successes) {
    std::ostringstream os;
    os << "net has " << good << " successful stages, needs " << opt.min_successes;
    for (const auto& e : net.entries)
      if (!e.ok) os << "; [" << e.stage << "] " << e.error;
    throw NetFailure(os.str());
  }
  return net;
}

inline std::string describe(const Stage& s) {
  std::ostringstream os;
  os << "n=" << s.n << " h=" << detail::format_double(s.h);
  return os.str();
}

/// Stages must refine: n non-decreasing, h non-increasing, not both equal.
inline void require_refining(const std::vector<Stage>& stages) {
  for (std::size_t k = 1; k < stages.size(); ++k) {
    const auto& a = stages[k - 1];
    const auto& b = stages[k];
    if (b.n < a.n || b.h > a.h || (b.n == a.n && b.h == a.h))
      throw std::invalid_argument("stages are not strictly refining at position " + std::to_string(k) + " (" +
                                  describe(a) + " -> " + describe(b) + ")");
  }
}

/// Samples `problem` on grid stages. The scale is h, or 1/n when h is fixed.
inline Net run_net(const std::vector<Stage>& stages, const std::function<double(const GridPtr&)>& problem,
                   const NetOptions& opt = {}, std::size_t max_points = max_stage_points_1d) {
  require_refining(stages);
  const bool fixed_h = std::all_of(stages.begin(), stages.end(), [&](const Stage& s) { return s.h == stages[0].h; });
  std::vector<std::string> labels;
  std::vector<double> scales;
  for (const auto& s : stages) {
    labels.push_back(describe(s));
    scales.push_back(fixed_h ? 1.0 / static_cast<double>(s.n) : s.h);
  }
  return run_indexed_net(
      labels, scales,
      [&](std::size_t k) {
        const auto& s = stages[k];
        if (s.n > max_points)
          throw std::length_error("stage " + describe(s) + " exceeds the budget of " + std::to_string(max_points) +
                                  " points");
        return problem(Grid::make(s));
      },
      opt);
}

struct LimitEstimate {
  double value;
  bool converged;
  std::optional<double> rate;  ///< empirical order in the scale
  bool extrapolated = false;
};

/// Last value, Richardson-corrected when the last two differences shrink
/// geometrically (ratio r in (0, ½], so the correction never exceeds
/// |Δ_last|). Converged iff |Δ_last| ≤ tol.
inline LimitEstimate estimate_limit(const Net& net, double tol) {
  const auto good = net.successful();
  if (good.size() < 3) throw std::invalid_argument("limit estimation needs at least 3 successful stages");
  const std::size_t k = good.size() - 1;
  const double last = good[k].value;
  const double d_last = good[k].value - good[k - 1].value;
  const double d_prev = good[k - 1].value - good[k - 2].value;
  LimitEstimate est{last, std::abs(d_last) <= tol, std::nullopt};
  if (d_last != 0.0 && d_prev != 0.0) {
    const double r = d_last / d_prev;
    if (r > 0.0 && r <= 0.5) {
      est.value = last + d_last * r / (1.0 - r);
      est.extrapolated = true;
    }
    const double s_prev = good[k - 1].scale, s_last = good[k].scale;
    if (r > 0.0 && s_prev > 0.0 && s_last > 0.0 && s_prev != s_last)
      est.rate = std::log(d_prev / d_last) / std::log(s_prev / s_last);
  }
  return est;
}

/// Lowest eigenvalue of H = -½·Laplacian + V on the grid.
inline double ground_energy(const GridPtr& grid, LaplacianVariant variant, const Potential& v) {
  auto h = assemble_hamiltonian(grid, variant, v);
  if (!linalg::as_cyclic_tridiagonal(h.matrix) && h.size() > jacobi_size_limit)
    throw SolverError("dense Jacobi path limited to " + std::to_string(jacobi_size_limit) + " unknowns");
  return linalg::lowest_eigenvalues(h.matrix, 1).front();
}

/// Ground energies of square wells 2·w·V₀ = τ on a fixed stage, one per width.
inline Net approximation_net(double tau, const std::vector<double>& widths, const Stage& stage,
                             LaplacianVariant variant = LaplacianVariant::compact, const NetOptions& opt = {}) {
  for (std::size_t k = 1; k < widths.size(); ++k)
    if (!(widths[k] < widths[k - 1])) throw std::invalid_argument("approximation widths must decrease");
  if (stage.n > max_stage_points_1d) throw std::length_error("stage exceeds the 1D budget");
  const auto grid = Grid::make(stage);
  std::vector<std::string> labels;
  for (double w : widths) labels.push_back("w=" + detail::format_double(w));
  return run_indexed_net(
      labels, widths,
      [&](std::size_t k) {
        const double w = widths[k];
        if (w < stage.h * (1.0 - 1e-12))
          throw std::invalid_argument("width " + detail::format_double(w) + " is below the grid spacing " +
                                      detail::format_double(stage.h));
        return ground_energy(grid, variant, square_well(w, tau / (2.0 * w)));
      },
      opt);
}

/// Ground-state shift caused by Indicator({0}, 1) (equal to δ₀ with τ = d(0)).
inline Net chi_potential_net(const std::vector<Stage>& stages, LaplacianVariant variant = LaplacianVariant::compact,
                             const NetOptions& opt = {}) {
  return run_net(
      stages,
      [variant](const GridPtr& g) {
        auto chi = Potential::indicator([](double x) { return x == 0.0; }, 1.0, "chi0");
        return ground_energy(g, variant, chi) - ground_energy(g, variant, Potential{});
      },
      opt);
}

}  // namespace hfqm
