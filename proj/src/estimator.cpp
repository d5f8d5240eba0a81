#include "platoonfd/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "platoonfd/error.hpp"

namespace platoonfd {

double effective_length(const PlatoonFrame& frame, const EstimatorConfig& cfg) {
  if (frame.positions.empty()) {
    throw Error(ErrorCode::DegeneratePlatoon, "frame has no vehicles");
  }
  const double length = frame.leader_position() - frame.last_position() + cfg.buffer;
  if (!(length > 0.0)) {
    std::ostringstream msg;
    msg << "effective length " << length << " m at t=" << frame.t;
    throw Error(ErrorCode::DegeneratePlatoon, msg.str());
  }
  return length;
}

double region_area(double lp_t, double lp_next, double dt) {
  if (!(lp_t > 0.0) || !(lp_next > 0.0) || !(dt > 0.0)) {
    std::ostringstream msg;
    msg << "region_area(" << lp_t << ", " << lp_next << ", " << dt << ")";
    throw Error(ErrorCode::NonPositiveInput, msg.str());
  }
  return 0.5 * (lp_t + lp_next) * dt;
}

SpaceTimeRegion platoon_region(const PlatoonFrame& current, const PlatoonFrame& next,
                               const EstimatorConfig& cfg) {
  const double lp_t = effective_length(current, cfg);
  const double lp_next = effective_length(next, cfg);
  const double dt = next.t - current.t;
  return {region_area(lp_t, lp_next, dt), dt, lp_t, lp_next};
}

TrafficState instantaneous_state(const PlatoonFrame& current, const PlatoonFrame& next,
                                 const EstimatorConfig& cfg) {
  const std::size_t n = current.vehicle_count();
  if (n < 2 || next.vehicle_count() != n) {
    throw Error(ErrorCode::InvalidArgument, "frame pair needs the same N >= 2 vehicles");
  }
  double distance = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = next.positions[i] - current.positions[i];
    if (dx < 0.0) {
      std::ostringstream msg;
      msg << "vehicle " << i << " moves " << dx << " m between t=" << current.t << " and t="
          << next.t;
      throw Error(ErrorCode::BackwardMotion, msg.str());
    }
    distance += dx;
  }
  const auto region = platoon_region(current, next, cfg);
  const double count = static_cast<double>(n);

  TrafficState s;
  s.t = current.t;
  s.k = 2.0 * count / (region.lp_t + region.lp_next);
  s.v = distance / (count * region.dt);
  // q = sum(dx) / |A| is algebraically k * v; taking the product keeps the
  // identity exact in floating point.
  s.q = s.k * s.v;
  return s;
}

SeriesEstimate estimate_series(const TrajectoryDataset& ds, const EstimatorConfig& cfg) {
  SeriesEstimate out;
  const auto pairs = platoon_frames(ds);
  out.states.reserve(pairs.size());
  for (const FramePair pair : pairs) {
    if (pair.straddles_gap) {
      out.skipped.push_back({pair.index, "data gap"});
      continue;
    }
    try {
      TrafficState s = instantaneous_state(*pair.current, *pair.next, cfg);
      s.dataset_id = ds.dataset_id();
      s.driver_mode = ds.driver_mode();
      s.frame_index = pair.index;
      out.states.push_back(std::move(s));
    } catch (const Error& e) {
      if (cfg.on_error == PairErrorPolicy::Abort) {
        throw Error(e.code(), "frame " + std::to_string(pair.index) + ": " + e.message());
      }
      out.skipped.push_back({pair.index, e.what()});
    }
  }
  return out;
}

double SpaceTimePolygon::area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[(i + 1) % vertices.size()];
    twice += a.t * b.x - b.t * a.x;
  }
  return 0.5 * std::abs(twice);
}

SpaceTimePolygon platoon_trapezoid(const PlatoonFrame& current, const PlatoonFrame& next,
                                   const EstimatorConfig& cfg) {
  const double half = 0.5 * cfg.buffer;
  return SpaceTimePolygon{{
      {current.t, current.last_position() - half},
      {next.t, next.last_position() - half},
      {next.t, next.leader_position() + half},
      {current.t, current.leader_position() + half},
  }};
}

namespace {

// Cyrus-Beck clipping of the segment p0 + s (p1 - p0), s in [0, 1], against a
// convex polygon. Returns the parameter interval inside, or nullopt.
struct ClipInterval {
  double enter;
  double exit;
};

std::optional<ClipInterval> clip_segment(const SpaceTimePolygon& poly, SpaceTimePoint p0,
                                         SpaceTimePoint p1, double orientation) {
  double enter = 0.0;
  double exit = 1.0;
  const double dt = p1.t - p0.t;
  const double dx = p1.x - p0.x;
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    // Inward normal for a counter-clockwise polygon is (-(bx-ax), bt-at).
    const double nt = -(b.x - a.x) * orientation;
    const double nx = (b.t - a.t) * orientation;
    const double num = nt * (p0.t - a.t) + nx * (p0.x - a.x);  // >= 0 inside
    const double den = nt * dt + nx * dx;
    if (den == 0.0) {
      if (num < 0.0) return std::nullopt;
      continue;
    }
    const double s = -num / den;
    if (den > 0.0) {
      enter = std::max(enter, s);
    } else {
      exit = std::min(exit, s);
    }
    if (enter > exit) return std::nullopt;
  }
  return ClipInterval{enter, exit};
}

}  // namespace

TrafficState edie_generic(const SpaceTimePolygon& region, const TrajectoryDataset& ds) {
  const double area = region.area();
  if (region.vertices.size() < 3 || !(area > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "region must be a polygon with positive area");
  }
  double signed_twice = 0.0;
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = -t_min;
  for (std::size_t i = 0; i < region.vertices.size(); ++i) {
    const auto& a = region.vertices[i];
    const auto& b = region.vertices[(i + 1) % region.vertices.size()];
    signed_twice += a.t * b.x - b.t * a.x;
    t_min = std::min(t_min, a.t);
    t_max = std::max(t_max, a.t);
  }
  const double orientation = signed_twice > 0.0 ? 1.0 : -1.0;

  const auto& frames = ds.frames();
  double total_time = 0.0;
  double total_distance = 0.0;
  bool intersects = false;
  for (std::size_t f = 0; f + 1 < frames.size(); ++f) {
    if (frames[f + 1].t < t_min || frames[f].t > t_max) continue;
    for (std::size_t i = 0; i < ds.vehicle_count(); ++i) {
      const SpaceTimePoint p0{frames[f].t, frames[f].positions[i]};
      const SpaceTimePoint p1{frames[f + 1].t, frames[f + 1].positions[i]};
      const auto clip = clip_segment(region, p0, p1, orientation);
      if (!clip) continue;
      intersects = true;
      const double fraction = clip->exit - clip->enter;
      total_time += fraction * (p1.t - p0.t);
      total_distance += fraction * (p1.x - p0.x);
    }
  }
  if (!intersects) throw Error(ErrorCode::EmptyRegion, "no trajectory enters the region");
  if (!(total_time > 0.0)) throw Error(ErrorCode::ZeroTime, "trajectories only touch the region");

  TrafficState s;
  s.t = t_min;
  s.k = total_time / area;
  s.q = total_distance / area;
  s.v = s.q / s.k;
  s.dataset_id = ds.dataset_id();
  s.driver_mode = ds.driver_mode();
  return s;
}

}  // namespace platoonfd
