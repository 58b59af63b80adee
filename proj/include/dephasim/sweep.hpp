#pragma once

// gamma*T sweeps of the driven qubit pair, transition and maximum detection,
// window comparison between two sweeps, and the qutrit criterion scan.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "dephasim/dephasing.hpp"
#include "dephasim/error.hpp"
#include "dephasim/ket.hpp"
#include "dephasim/measures.hpp"
#include "dephasim/state.hpp"

namespace dephasim {

/// Concurrence at or below this counts as separable.
inline constexpr double kEntanglementThreshold = 1e-9;
/// Bracket width at which transition bisection stops.
inline constexpr double kTransitionTolerance = 1e-6;

enum class SweepMode { qubit_sweep, qutrit_criterion };

struct SweepConfig {
  std::string initial_state;
  double omega_ratio = 31.25;
  double gamma_t_max = 4.0;
  std::size_t samples = 2000;
  std::string output_path;
  SweepMode mode = SweepMode::qubit_sweep;
  /// 0 selects std::thread::hardware_concurrency().
  std::size_t workers = 0;
};

inline void check(const SweepConfig& config) {
  if (config.samples < 2) throw Error(ErrorCode::InvalidArgument, "samples must be at least 2");
  if (!(config.gamma_t_max > 0.0) || !std::isfinite(config.gamma_t_max))
    throw Error(ErrorCode::InvalidArgument, "gamma_t_max must be positive");
  if (!(config.omega_ratio >= 0.0) || !std::isfinite(config.omega_ratio))
    throw Error(ErrorCode::InvalidArgument, "omega_ratio must be non-negative");
}

struct SweepRow {
  double gamma_t = 0.0;
  double concurrence = 0.0;
  double mutual_information = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct LocalMaximum {
  double gamma_t = 0.0;
  double concurrence = 0.0;
  double mutual_information = 0.0;
  std::size_t index = 0;  // grid index; not serialized
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<double> transitions;
  std::vector<LocalMaximum> maxima;
};

using ConcurrenceProfile = std::function<double(double gamma_t)>;

/// Evaluates (C_s, I) of the stationary state for one initial state and
/// drive ratio. Immutable after construction; safe to share across threads.
class StationaryEvaluator {
 public:
  StationaryEvaluator(const DensityMatrix& rho0, double omega_ratio)
      : rho0_(rho0),
        base_{omega_ratio, 1.0, 0.0},
        driven_(build_liouvillian(rho0.dims(), base_, true)) {}

  static StationaryEvaluator from_config(const SweepConfig& config) {
    return StationaryEvaluator(
        pure_density(parse_ket_expression(config.initial_state, Dims{2, 2})), config.omega_ratio);
  }

  DensityMatrix state(double gamma_t) const {
    ModelParams params = base_;
    params.gamma_t = gamma_t;
    return stationary_state(rho0_, driven_, params);
  }

  SweepRow row(double gamma_t) const {
    const StationaryXForm x = extract_xform(state(gamma_t));
    return SweepRow{gamma_t, concurrence_xform(x), mutual_information_xform(x)};
  }

  double concurrence(double gamma_t) const { return row(gamma_t).concurrence; }

 private:
  DensityMatrix rho0_;
  ModelParams base_;
  Superoperator driven_;
};

inline std::vector<double> uniform_grid(double upper, std::size_t samples) {
  std::vector<double> grid(samples);
  for (std::size_t k = 0; k < samples; ++k)
    grid[k] = upper * static_cast<double>(k) / static_cast<double>(samples - 1);
  return grid;
}

namespace detail {
inline bool entangled(double c, double threshold) { return c > threshold; }

inline std::size_t resolve_workers(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested == 0 ? std::thread::hardware_concurrency() : requested;
  return std::clamp<std::size_t>(n, 1, std::max<std::size_t>(jobs, 1));
}

/// Runs job(k) for k in [0, count) on a small pool; results must be written
/// by index so that output does not depend on scheduling.
template <class Job>
void parallel_for(std::size_t count, std::size_t workers, const Job& job) {
  workers = resolve_workers(workers, count);
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count && !failed; k = next++) {
        try {
          job(k);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}
}  // namespace detail

/// Grid-bracketed threshold crossings of C_s, each refined by bisection on
/// `profile`. The separable-side end of the final bracket is reported.
inline std::vector<double> detect_transitions(const SweepResult& result,
                                              const ConcurrenceProfile& profile,
                                              double threshold = kEntanglementThreshold) {
  std::vector<double> out;
  const auto& rows = result.rows;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const bool left = detail::entangled(rows[i].concurrence, threshold);
    if (left == detail::entangled(rows[i + 1].concurrence, threshold)) continue;
    double lo = rows[i].gamma_t;
    double hi = rows[i + 1].gamma_t;
    while (hi - lo > kTransitionTolerance) {
      const double mid = 0.5 * (lo + hi);
      if (detail::entangled(profile(mid), threshold) == left)
        lo = mid;
      else
        hi = mid;
    }
    out.push_back(left ? hi : lo);
  }
  return out;
}

inline std::vector<double> detect_transitions(const SweepConfig& config,
                                              const SweepResult& result,
                                              double threshold = kEntanglementThreshold) {
  const StationaryEvaluator evaluator = StationaryEvaluator::from_config(config);
  return detect_transitions(
      result, [&](double gt) { return evaluator.concurrence(gt); }, threshold);
}

/// Interior grid points whose concurrence strictly exceeds both neighbours.
inline std::vector<LocalMaximum> detect_local_maxima(const SweepResult& result) {
  std::vector<LocalMaximum> out;
  const auto& rows = result.rows;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    if (rows[i].concurrence > rows[i - 1].concurrence &&
        rows[i].concurrence > rows[i + 1].concurrence)
      out.push_back({rows[i].gamma_t, rows[i].concurrence, rows[i].mutual_information, i});
  }
  return out;
}

/// Samples (C_s, I) over the uniform gamma*T grid, then detects transitions
/// and maxima. Identical configs give bit-identical results for any worker
/// count.
inline SweepResult run_sweep(const SweepConfig& config) {
  check(config);
  if (config.mode != SweepMode::qubit_sweep)
    throw Error(ErrorCode::InvalidArgument, "run_sweep needs qubit-sweep mode");
  const StationaryEvaluator evaluator = StationaryEvaluator::from_config(config);

  const std::vector<double> grid = uniform_grid(config.gamma_t_max, config.samples);
  SweepResult result;
  result.rows.resize(grid.size());
  detail::parallel_for(grid.size(), config.workers,
                       [&](std::size_t k) { result.rows[k] = evaluator.row(grid[k]); });

  result.transitions = detect_transitions(
      result, [&](double gt) { return evaluator.concurrence(gt); }, kEntanglementThreshold);
  result.maxima = detect_local_maxima(result);
  return result;
}

/// Maximal gamma*T interval of constant entanglement status. `complete` when
/// both ends are detected transitions rather than grid ends.
struct Window {
  double begin = 0.0;
  double end = 0.0;
  bool entangled = false;
  bool complete = false;

  double length() const noexcept { return end - begin; }
};

inline std::vector<Window> windows(const SweepResult& result,
                                   double threshold = kEntanglementThreshold) {
  std::vector<Window> out;
  if (result.rows.empty()) return out;
  bool state = detail::entangled(result.rows.front().concurrence, threshold);
  double begin = result.rows.front().gamma_t;
  bool bounded = false;
  for (double t : result.transitions) {
    out.push_back({begin, t, state, bounded});
    state = !state;
    begin = t;
    bounded = true;
  }
  out.push_back({begin, result.rows.back().gamma_t, state, false});
  return out;
}

struct WindowOverlap {
  std::vector<bool> both_entangled;  // per grid point
  std::size_t overlap_points = 0;
  std::size_t a_entangled_points = 0;
  std::size_t b_entangled_points = 0;
};

inline WindowOverlap compare_windows(const SweepResult& a, const SweepResult& b,
                                     double threshold = kEntanglementThreshold) {
  if (a.rows.size() != b.rows.size())
    throw Error(ErrorCode::GridMismatch, "sweeps have " + std::to_string(a.rows.size()) +
                                             " and " + std::to_string(b.rows.size()) +
                                             " samples");
  WindowOverlap out;
  out.both_entangled.resize(a.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const double ta = a.rows[k].gamma_t;
    const double tb = b.rows[k].gamma_t;
    if (std::abs(ta - tb) > 1e-12 * std::max(1.0, std::abs(ta)))
      throw Error(ErrorCode::GridMismatch, "grid point " + std::to_string(k) + " differs: " +
                                               std::to_string(ta) + " vs " + std::to_string(tb));
    const bool ea = detail::entangled(a.rows[k].concurrence, threshold);
    const bool eb = detail::entangled(b.rows[k].concurrence, threshold);
    out.a_entangled_points += ea;
    out.b_entangled_points += eb;
    out.both_entangled[k] = ea && eb;
    out.overlap_points += ea && eb;
  }
  return out;
}

/// Dephasing fixed point of a two-qutrit initial state and its criterion.
struct QutritScan {
  DensityMatrix stationary;
  CriterionReport report;
};

inline QutritScan run_qutrit_scan(const SweepConfig& config) {
  const DensityMatrix rho0 = pure_density(parse_ket_expression(config.initial_state, Dims{3, 3}));
  DensityMatrix stationary = dephasing_fixed_point(rho0);
  const CriterionReport report = qutrit_sufficient_entangled(stationary);
  return QutritScan{std::move(stationary), report};
}

}  // namespace dephasim
