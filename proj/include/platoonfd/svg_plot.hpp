#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "platoonfd/aggregation.hpp"
#include "platoonfd/estimator.hpp"
#include "platoonfd/tfd.hpp"

namespace platoonfd {

enum class Plane { FlowDensity, SpeedDensity, SpeedFlow };

std::string_view to_string(Plane plane);

struct PlotInput {
  Plane plane = Plane::FlowDensity;
  std::span<const TrafficState> scatter;  // may be empty
  const BinnedSeries* binned = nullptr;   // density axis for q-k and v-k, speed axis for v-q
  std::optional<TfdParams> params;
  std::string title;
  std::size_t max_scatter_points = 20000;  // evenly strided beyond this
};

/// Self-contained SVG: instantaneous states as circles (class "state"),
/// the bin means as a polyline (class "binned") and, when parameters are
/// given, the free-flow and congested TFD branches as two polylines
/// (classes "tfd-free" and "tfd-congested") meeting at the capacity point.
/// Throws Error(EmptyInput) when the binned series is missing or empty.
std::string render_svg(const PlotInput& input);

}  // namespace platoonfd
