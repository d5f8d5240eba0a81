#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "platoonfd/aggregation.hpp"
#include "platoonfd/tfd.hpp"

namespace platoonfd {

/// Box bounds on (v_f [km/h], k_cr [veh/km], k_jam [veh/km]).
struct CalibrationBounds {
  std::array<double, 3> lower{60.0, 5.0, 60.0};
  std::array<double, 3> upper{160.0, 60.0, 250.0};
};

struct OptimizerSettings {
  std::size_t max_evaluations = 5000;  // per local search
  std::size_t grid_points = 3;         // starting points per axis
  double tolerance = 1e-12;            // on the objective spread of the simplex
  double step = 0.1;                   // initial simplex edge, fraction of the box
};

struct CalibrationProblem {
  BinnedSeries binned;
  CalibrationBounds bounds;
  OptimizerSettings settings;
};

struct CalibrationResult {
  TfdParams params;
  double objective_value;
  std::size_t evaluations;
  bool converged;
};

// ---------------------------------------------------------------------------
// Box-constrained Nelder-Mead on a 3-parameter function. Trial points are
// projected onto the box; the search runs in coordinates scaled to [0, 1].

struct SimplexResult {
  std::array<double, 3> x;
  double value;
  std::size_t evaluations;
  bool converged;
};

using Objective3 = std::function<double(const std::array<double, 3>&)>;

SimplexResult nelder_mead_box(const Objective3& f, const std::array<double, 3>& start,
                              const std::array<double, 3>& lower,
                              const std::array<double, 3>& upper,
                              const OptimizerSettings& settings);

/// Minimizes the TFD objective within the bounds, restarting the simplex
/// search from a fixed grid of interior points and keeping the best result
/// (lowest objective, then lexicographically smallest parameters). Points
/// with k_cr >= k_jam are given a large finite penalty.
///
/// Throws Error(Infeasible) when the box holds no point with k_cr < k_jam.
/// Returns converged = false when a local search hit max_evaluations or the
/// series has fewer points than free parameters.
CalibrationResult calibrate(const CalibrationProblem& problem);

struct SensitivityRow {
  double delta = 0.0;
  std::optional<DriverMode> driver_mode;
  std::size_t bins = 0;
  std::optional<CalibrationResult> result;
  std::string error;  // set when aggregation or calibration failed
};

/// Re-aggregates the raw states at every delta (density axis) and calibrates
/// each. One row per delta, in input order; failures are recorded per row.
std::vector<SensitivityRow> sensitivity_sweep(std::span<const TrafficState> states,
                                              std::span<const double> deltas,
                                              const CalibrationBounds& bounds = {},
                                              const OptimizerSettings& settings = {});

}  // namespace platoonfd
