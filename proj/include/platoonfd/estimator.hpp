#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "platoonfd/trajectory.hpp"

namespace platoonfd {

/// Instantaneous platoon traffic state in SI units (veh/m, veh/s, m/s).
/// `frame_index` is the leading frame of the pair the state was built from.
struct TrafficState {
  double t = 0.0;
  double k = 0.0;
  double q = 0.0;
  double v = 0.0;
  std::string dataset_id;
  DriverMode driver_mode = DriverMode::Human;
  std::size_t frame_index = 0;
};

enum class PairErrorPolicy { Abort, Skip };

struct EstimatorConfig {
  double buffer = 3.0;  // meters added to the antenna-to-antenna platoon length
  PairErrorPolicy on_error = PairErrorPolicy::Abort;
};

/// Moving space-time region between two consecutive observations.
struct SpaceTimeRegion {
  double area;    // m*s
  double dt;      // s
  double lp_t;    // m
  double lp_next; // m
};

/// Leader-to-last-follower distance plus the buffer.
/// Throws Error(DegeneratePlatoon) if the result is not strictly positive.
double effective_length(const PlatoonFrame& frame, const EstimatorConfig& cfg = {});

/// Trapezoid area (lp_t + lp_next) / 2 * dt. Throws Error(NonPositiveInput).
double region_area(double lp_t, double lp_next, double dt);

SpaceTimeRegion platoon_region(const PlatoonFrame& current, const PlatoonFrame& next,
                               const EstimatorConfig& cfg = {});

/// Density, flow and speed of the platoon over the trapezoid spanned by two
/// consecutive frames:
///   k = 2N / (lp(t) + lp(t+dt)),  q = sum(dx_i) / |A|,  v = q / k.
/// Every vehicle is inside the region for the whole interval, so each
/// contributes exactly dt of travel time. Throws Error(BackwardMotion) when
/// any vehicle moves backwards and Error(DegeneratePlatoon) for zero length.
TrafficState instantaneous_state(const PlatoonFrame& current, const PlatoonFrame& next,
                                 const EstimatorConfig& cfg = {});

struct SkippedPair {
  std::size_t frame_index;
  std::string reason;
};

struct SeriesEstimate {
  std::vector<TrafficState> states;
  std::vector<SkippedPair> skipped;
};

/// One state per consecutive frame pair, in time order. Pairs straddling a
/// data gap are always dropped and listed in `skipped`. Other per-pair errors
/// either abort (rethrown with the frame index) or are skipped, per
/// `cfg.on_error`.
SeriesEstimate estimate_series(const TrajectoryDataset& ds, const EstimatorConfig& cfg = {});

// ---------------------------------------------------------------------------
// Generic Edie evaluation over an arbitrary convex space-time polygon. Used to
// cross-check the trapezoid shortcut; not on the estimation hot path.

struct SpaceTimePoint {
  double t;
  double x;
};

/// Convex polygon with vertices in either winding order.
struct SpaceTimePolygon {
  std::vector<SpaceTimePoint> vertices;

  [[nodiscard]] double area() const;
};

/// Trapezoid whose lower and upper edges trail the last follower and lead the
/// leader by half the buffer each, over one frame interval.
SpaceTimePolygon platoon_trapezoid(const PlatoonFrame& current, const PlatoonFrame& next,
                                   const EstimatorConfig& cfg = {});

/// Edie's generalized definitions over `region`: k = sum(t_i)/|A|,
/// q = sum(x_i)/|A|, v = q/k, with t_i and x_i the time spent and distance
/// covered by vehicle i inside the polygon. Trajectories are linear between
/// frames and clipped exactly against the polygon.
/// Throws Error(EmptyRegion) if no trajectory enters the region and
/// Error(ZeroTime) if trajectories only touch it.
TrafficState edie_generic(const SpaceTimePolygon& region, const TrajectoryDataset& ds);

}  // namespace platoonfd
