#include "platoonfd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "platoonfd/error.hpp"
#include "platoonfd/units.hpp"

namespace platoonfd {

namespace {

// Index of the first knot at or after t.
std::size_t knot_at_or_after(const std::vector<SpeedKnot>& knots, double t) {
  return static_cast<std::size_t>(
      std::lower_bound(knots.begin(), knots.end(), t,
                       [](const SpeedKnot& k, double value) { return k.t < value; }) -
      knots.begin());
}

// Leader distance backed by per-knot prefix sums.
class DistanceTable {
 public:
  explicit DistanceTable(const DriveCycle& cycle) : cycle_(cycle) {
    for (const auto& k : cycle.knots) cumulative_.push_back(cycle.distance(k.t));
  }

  double operator()(double t) const {
    const auto& knots = cycle_.knots;
    const std::size_t j = knot_at_or_after(knots, t);
    if (t <= 0.0 || j == 0 || j == knots.size() || knots[j - 1].t < 0.0) return cycle_.distance(t);
    const auto& a = knots[j - 1];
    const auto& b = knots[j];
    const double v = a.v + (b.v - a.v) * (t - a.t) / (b.t - a.t);
    return cumulative_[j - 1] + 0.5 * (a.v + v) * (t - a.t);
  }

 private:
  const DriveCycle& cycle_;
  std::vector<double> cumulative_;
};

}  // namespace

double DriveCycle::speed(double t) const {
  if (knots.empty()) return 0.0;
  if (t <= knots.front().t) return knots.front().v;
  const std::size_t i = knot_at_or_after(knots, t);
  if (i == knots.size()) return knots.back().v;
  const auto& a = knots[i - 1];
  const auto& b = knots[i];
  return a.v + (b.v - a.v) * (t - a.t) / (b.t - a.t);
}

double DriveCycle::acceleration(double t) const {
  const auto it = std::upper_bound(knots.begin(), knots.end(), t,
                                   [](double value, const SpeedKnot& k) { return value < k.t; });
  if (it == knots.begin() || it == knots.end()) return 0.0;
  const auto& a = *(it - 1);
  const auto& b = *it;
  return (b.v - a.v) / (b.t - a.t);
}

double DriveCycle::distance(double t) const {
  if (knots.empty() || t <= 0.0) return 0.0;
  double d = 0.0;
  double prev_t = 0.0;
  double prev_v = speed(0.0);
  for (const auto& k : knots) {
    if (k.t <= prev_t) continue;
    if (k.t >= t) {
      const double v_end = prev_v + (k.v - prev_v) * (t - prev_t) / (k.t - prev_t);
      return d + 0.5 * (prev_v + v_end) * (t - prev_t);
    }
    d += 0.5 * (prev_v + k.v) * (k.t - prev_t);
    prev_t = k.t;
    prev_v = k.v;
  }
  return d + prev_v * (t - prev_t);
}

DriveCycle DriveCycle::constant(double v, double duration) {
  return {{{0.0, v}, {duration, v}}, duration};
}

DriveCycle DriveCycle::sweep(double v_max, double ramp, double hold, double dwell) {
  DriveCycle c;
  double t = 0.0;
  c.knots.push_back({t, 0.0});
  t += dwell;
  if (dwell > 0.0) c.knots.push_back({t, 0.0});
  t += ramp;
  c.knots.push_back({t, v_max});
  t += hold;
  if (hold > 0.0) c.knots.push_back({t, v_max});
  t += ramp;
  c.knots.push_back({t, 0.0});
  t += dwell;
  if (dwell > 0.0) c.knots.push_back({t, 0.0});
  c.duration = t;
  return c;
}

TrajectoryDataset generate_platoon(const DriveCycle& cycle, const HeadwayLaw& law,
                                   const SyntheticConfig& cfg) {
  if (cfg.vehicles < 2) throw Error(ErrorCode::InvalidArgument, "platoon needs N >= 2");
  if (!(cfg.sample_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
  if (!(law.s0 > 0.0) || !(law.T > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "headway law needs s0 > 0 and T > 0");
  }
  for (const auto& k : cycle.knots) {
    if (k.v < 0.0) throw Error(ErrorCode::InvalidArgument, "drive cycle speeds must be >= 0");
  }
  const std::size_t n = cfg.vehicles;
  const double dt = 1.0 / cfg.sample_hz;
  const auto samples = static_cast<std::size_t>(std::floor(cycle.duration * cfg.sample_hz + 1e-9)) + 1;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, cfg.position_noise > 0.0 ? cfg.position_noise : 1.0);

  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i + 1));

  std::vector<PlatoonFrame> frames;
  frames.reserve(samples);
  const DistanceTable leader_distance(cycle);
  if (cfg.follower == FollowerModel::QuasiStatic) {
    for (std::size_t s = 0; s < samples; ++s) {
      const double t = static_cast<double>(s) * dt;
      const double v0 = cycle.speed(t);
      const double a0 = cycle.acceleration(t);
      PlatoonFrame frame;
      frame.t = t;
      frame.positions.resize(n);
      frame.speeds.resize(n);
      const double lead = leader_distance(t);
      for (std::size_t i = 0; i < n; ++i) {
        const double rank = static_cast<double>(i);
        frame.positions[i] = lead - rank * law.spacing(v0);
        frame.speeds[i] = v0 - rank * law.T * a0;
      }
      frames.push_back(std::move(frame));
    }
  } else {
    constexpr int kSubsteps = 10;
    const double h = dt / kSubsteps;

    // Follower speeds v[1..n-1]; v[0] is the leader, driven by the cycle.
    std::vector<double> v(n, cycle.speed(0.0));
    auto derivative = [&](double t, const std::vector<double>& state, std::vector<double>& out) {
      double upstream = cycle.speed(t);
      for (std::size_t i = 1; i < n; ++i) {
        out[i] = (upstream - state[i]) / law.T;
        upstream = state[i];
      }
    };
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    for (std::size_t s = 0; s < samples; ++s) {
      const double t = static_cast<double>(s) * dt;
      if (s > 0) {
        const double t0 = static_cast<double>(s - 1) * dt;
        for (int sub = 0; sub < kSubsteps; ++sub) {
          const double ts = t0 + sub * h;
          derivative(ts, v, k1);
          for (std::size_t i = 1; i < n; ++i) tmp[i] = v[i] + 0.5 * h * k1[i];
          derivative(ts + 0.5 * h, tmp, k2);
          for (std::size_t i = 1; i < n; ++i) tmp[i] = v[i] + 0.5 * h * k2[i];
          derivative(ts + 0.5 * h, tmp, k3);
          for (std::size_t i = 1; i < n; ++i) tmp[i] = v[i] + h * k3[i];
          derivative(ts + h, tmp, k4);
          for (std::size_t i = 1; i < n; ++i) {
            v[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            v[i] = std::max(v[i], 0.0);
          }
        }
      }
      v[0] = cycle.speed(t);

      PlatoonFrame frame;
      frame.t = t;
      frame.positions.resize(n);
      frame.positions[0] = leader_distance(t);
      for (std::size_t i = 1; i < n; ++i) {
        frame.positions[i] = frame.positions[i - 1] - law.spacing(v[i]);
      }
      frame.speeds = v;
      frames.push_back(std::move(frame));
    }
  }
  for (auto& frame : frames) {
    if (cfg.position_noise > 0.0) {
      for (auto& x : frame.positions) x += noise(rng);
    }
    if (!cfg.emit_speeds) frame.speeds.clear();
  }
  return TrajectoryDataset(cfg.dataset_id, cfg.driver_mode, dt, std::move(ids), std::move(frames));
}

TfdParams analytic_fd(const HeadwayLaw& law, double v_f) {
  if (!(v_f > 0.0)) throw Error(ErrorCode::InvalidArgument, "free-flow speed must be positive");
  const double k_jam = units::per_m_to_per_km(1.0 / law.s0);
  const double k_cr = units::per_m_to_per_km(1.0 / law.spacing(v_f));
  return TfdParams(units::mps_to_kmh(v_f), k_cr, k_jam);
}

}  // namespace platoonfd
