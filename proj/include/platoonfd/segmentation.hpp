#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "platoonfd/estimator.hpp"
#include "platoonfd/trajectory.hpp"

namespace platoonfd {

struct SpeedProfile {
  std::vector<double> t;        // s
  std::vector<double> v_mean;   // m/s

  [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
};

/// Platoon-average speed per frame. Recorded speeds are used when every
/// frame has them; otherwise speeds come from central differences of the
/// positions (one-sided at the ends). Throws Error(TooFewFrames) below two
/// frames.
SpeedProfile mean_speed_profile(const TrajectoryDataset& ds);

/// Centered moving average over `window_s` seconds; the window shrinks at
/// the ends.
SpeedProfile smooth_profile(const SpeedProfile& profile, double window_s = 1.0);

enum class ExtremumKind { Min, Max };

struct Extremum {
  std::size_t index;
  ExtremumKind kind;
  double persistence;  // m/s; infinite for the global minimum
};

/// Local extrema paired by 0-dimensional persistence of the sublevel sets
/// (each maximum merges two basins and is paired with the higher of their
/// minima). Pairs below `min_persistence` are dropped; the global minimum is
/// always kept. The result is sorted by index and alternates Min, Max, ...,
/// Min. Ties in value are broken by index.
std::vector<Extremum> persistence_extrema(const SpeedProfile& profile, double min_persistence);

enum class SegmentLabel { Acceleration, Deceleration, Stable };

std::string_view to_string(SegmentLabel label);

/// Covers frames [start_index, end_index]; neighbors share their boundary
/// frame.
struct Segment {
  std::size_t start_index;
  std::size_t end_index;
  SegmentLabel label;
};

struct SegmentationConfig {
  double min_persistence = 1.0;      // m/s
  double stable_band = 0.5;          // m/s, max - min inside a stable window
  double min_stable_duration = 10.0; // s
  bool smooth = false;
  double smoothing_window = 1.0;     // s
};

/// Splits the profile at the surviving extrema and labels each interval by
/// the sign of its speed change (min->max Acceleration, max->min
/// Deceleration). Maximal windows lasting at least `min_stable_duration`
/// whose speed spread stays within `stable_band` are then relabeled Stable;
/// they are searched over the whole profile so a cruise phase containing an
/// extremum is not split. Adjacent segments with equal labels are merged.
std::vector<Segment> classify_segments(const SpeedProfile& profile,
                                       std::span<const Extremum> extrema, double stable_band,
                                       double min_stable_duration);

/// Convenience pipeline: profile, optional smoothing, extrema, segments.
std::vector<Segment> segment_platoon(const TrajectoryDataset& ds, const SegmentationConfig& cfg = {});

struct LabeledState {
  TrafficState state;
  SegmentLabel label;
};

/// Labels each state with the segment holding its leading frame; a state on
/// a shared boundary frame takes the later segment. Throws
/// Error(IndexMismatch) when there are more states than frame pairs, when a
/// state's frame index lies outside the segmentation or when indices are not
/// strictly increasing.
std::vector<LabeledState> states_by_segment(std::span<const TrafficState> states,
                                            std::span<const Segment> segments);

}  // namespace platoonfd
