#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "platoonfd/error.hpp"
#include "platoonfd/trajectory.hpp"

namespace testsupport {

inline bool rel_close(double a, double b, double tol) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= tol * scale;
}

template <typename F>
platoonfd::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const platoonfd::Error& e) {
    return e.code();
  }
  FAIL("expected platoonfd::Error");
  return platoonfd::ErrorCode::InvalidArgument;
}

inline std::vector<std::string> vehicle_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i + 1));
  return ids;
}

// Dataset from a position function x(vehicle, t), sampled at t_i = i * dt.
inline platoonfd::TrajectoryDataset make_dataset(std::size_t vehicles, std::size_t frames, double dt,
                                                 const std::function<double(std::size_t, double)>& x,
                                                 platoonfd::DriverMode mode = platoonfd::DriverMode::AccMin) {
  std::vector<platoonfd::PlatoonFrame> out;
  for (std::size_t f = 0; f < frames; ++f) {
    platoonfd::PlatoonFrame frame;
    frame.t = static_cast<double>(f) * dt;
    for (std::size_t v = 0; v < vehicles; ++v) frame.positions.push_back(x(v, frame.t));
    out.push_back(std::move(frame));
  }
  return {"test", mode, dt, vehicle_ids(vehicles), std::move(out)};
}

inline platoonfd::PlatoonFrame frame(double t, std::vector<double> positions) {
  platoonfd::PlatoonFrame f;
  f.t = t;
  f.positions = std::move(positions);
  return f;
}

}  // namespace testsupport
