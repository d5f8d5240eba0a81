#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "platoonfd/estimator.hpp"
#include "platoonfd/trajectory.hpp"

namespace platoonfd {

enum class BinAxis { Density, Speed };

/// Uniform partition of the positive half-line into (i*delta, (i+1)*delta].
/// `delta` is in reporting units: veh/km on the density axis, km/h on the
/// speed axis. `bins` is the number of bins spanned by the data (M).
struct BinGrid {
  double delta = 0.3;
  BinAxis axis = BinAxis::Density;
  std::size_t bins = 0;
};

/// Index i of the half-open bin (i*delta, (i+1)*delta] holding `value`; an
/// exact zero goes to bin 0. Values within a relative 1e-9 of a bin edge are
/// snapped onto it so decimal inputs such as 1.2 / 0.3 land on the intended
/// side. Throws Error(NonPositiveValue) for negative values and
/// Error(InvalidArgument) for a non-positive delta.
std::size_t bin_index(double value, double delta);

/// Bin-averaged point in reporting units (veh/km, km/h, veh/h).
struct BinnedPoint {
  std::size_t bin = 0;
  double k_mean = 0.0;
  double v_mean = 0.0;
  double q_mean = 0.0;
  std::size_t count = 0;
};

struct BinnedSeries {
  BinGrid grid;
  std::optional<DriverMode> driver_mode;
  std::vector<BinnedPoint> points;  // non-empty bins only, ascending bin index

  [[nodiscard]] std::size_t total_count() const;
};

/// Running per-bin sums. Accumulators over disjoint shards of the same
/// states merge into the accumulator of the union.
class BinAccumulator {
 public:
  BinAccumulator(double delta, BinAxis axis);

  void add(const TrafficState& state);
  void add(std::span<const TrafficState> states);

  /// Throws Error(GridMismatch) for a different grid and
  /// Error(MixedDriverModes) when the two sides hold different modes.
  [[nodiscard]] BinAccumulator merge(const BinAccumulator& other) const;

  [[nodiscard]] BinnedSeries finish() const;

  [[nodiscard]] double delta() const noexcept { return delta_; }
  [[nodiscard]] BinAxis axis() const noexcept { return axis_; }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }

 private:
  struct Sums {
    double k = 0.0;
    double v = 0.0;
    double q = 0.0;
    std::size_t count = 0;
  };

  double delta_;
  BinAxis axis_;
  std::optional<DriverMode> mode_;
  std::vector<Sums> bins_;
  std::size_t count_ = 0;
};

/// Arithmetic means of k, v and q per non-empty density bin.
/// Errors: EmptyInput, MixedDriverModes.
BinnedSeries aggregate_by_density(std::span<const TrafficState> states, double delta_k = 0.3);

/// Same as aggregate_by_density with speed as the binning axis, for the
/// flow-speed plane where flow is two-valued.
BinnedSeries aggregate_by_speed(std::span<const TrafficState> states, double delta_v = 0.3);

}  // namespace platoonfd
