#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "platoonfd/tfd.hpp"
#include "platoonfd/trajectory.hpp"

namespace platoonfd {

/// Constant time-headway spacing policy s(v) = s0 + T v (front-to-front).
struct HeadwayLaw {
  double s0 = 8.0;  // m
  double T = 1.2;   // s

  [[nodiscard]] double spacing(double v) const { return s0 + T * v; }
};

struct SpeedKnot {
  double t;  // s
  double v;  // m/s
};

/// Piecewise-linear leader speed; held constant after the last knot.
struct DriveCycle {
  std::vector<SpeedKnot> knots;
  double duration = 0.0;  // s

  [[nodiscard]] double speed(double t) const;
  /// Slope of the segment starting at t; 0 outside the knots.
  [[nodiscard]] double acceleration(double t) const;
  /// Distance covered from t = 0, exact for the piecewise-linear profile.
  [[nodiscard]] double distance(double t) const;

  static DriveCycle constant(double v, double duration);
  /// 0 -> v_max over `ramp` seconds, hold, and back to 0 over `ramp`
  /// seconds, with `dwell` seconds at standstill on both ends.
  static DriveCycle sweep(double v_max, double ramp, double hold, double dwell = 0.0);
};

enum class FollowerModel {
  // Every follower sits at the equilibrium spacing for the leader's current
  // speed: x_i = x_0 - i (s0 + T v_0).
  QuasiStatic,
  // Every follower keeps the spacing for its own speed, which makes it a
  // first-order lag on its predecessor's speed.
  Lag,
};

struct SyntheticConfig {
  std::size_t vehicles = 5;
  double sample_hz = 10.0;
  std::string dataset_id = "synthetic";
  DriverMode driver_mode = DriverMode::AccMin;
  double position_noise = 0.0;  // m, standard deviation; 0 disables
  std::uint64_t seed = 42;
  bool emit_speeds = true;
  FollowerModel follower = FollowerModel::QuasiStatic;
};

/// Leader drives the cycle exactly; followers are placed per `cfg.follower`.
///
/// QuasiStatic: the spacing law holds with the leader's speed, so the
/// platoon length is a function of v_0 alone and follower speeds are
/// v_0 - i T a_0. A follower moves backwards while the leader pulls away
/// from standstill faster than v_0 / (i T).
///
/// Lag: x_{i-1} - x_i = s0 + T v_i with v_i the follower's own speed, i.e.
/// T dv_i/dt = v_{i-1} - v_i, integrated with classic RK4 on substeps;
/// positions then follow from the spacing law. Followers start in
/// equilibrium with the leader and never reverse.
///
/// Optional Gaussian noise is added to the written positions only.
/// Throws Error(InvalidArgument) for fewer than 2 vehicles, a
/// non-positive rate or an invalid law.
TrajectoryDataset generate_platoon(const DriveCycle& cycle, const HeadwayLaw& law,
                                   const SyntheticConfig& cfg = {});

/// Closed-form fundamental diagram of the headway law, in reporting units:
/// k(v) = 1 / (s0 + T v), so k_jam = 1/s0, w = s0/T and
/// k_cr = 1 / (s0 + T v_f). `v_f` is in m/s.
TfdParams analytic_fd(const HeadwayLaw& law, double v_f);

}  // namespace platoonfd
