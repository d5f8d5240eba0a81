#include "platoonfd/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "platoonfd/error.hpp"

namespace platoonfd {

SpeedProfile mean_speed_profile(const TrajectoryDataset& ds) {
  const auto& frames = ds.frames();
  if (frames.size() < 2) {
    throw Error(ErrorCode::TooFewFrames, "speed profile needs at least 2 frames");
  }
  const double n = static_cast<double>(ds.vehicle_count());
  SpeedProfile profile;
  profile.t.reserve(frames.size());
  profile.v_mean.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    double mean = 0.0;
    if (ds.has_speeds()) {
      mean = std::accumulate(frames[i].speeds.begin(), frames[i].speeds.end(), 0.0) / n;
    } else {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i + 1 == frames.size() ? i : i + 1;
      const double dt = frames[hi].t - frames[lo].t;
      for (std::size_t v = 0; v < ds.vehicle_count(); ++v) {
        mean += (frames[hi].positions[v] - frames[lo].positions[v]) / dt;
      }
      mean /= n;
    }
    profile.t.push_back(frames[i].t);
    profile.v_mean.push_back(mean);
  }
  return profile;
}

SpeedProfile smooth_profile(const SpeedProfile& profile, double window_s) {
  SpeedProfile out = profile;
  const std::size_t n = profile.size();
  if (n < 2 || !(window_s > 0.0)) return out;
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + profile.v_mean[i];
  const double half = 0.5 * window_s;
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (profile.t[lo] < profile.t[i] - half) ++lo;
    while (hi + 1 < n && profile.t[hi + 1] <= profile.t[i] + half) ++hi;
    out.v_mean[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<Extremum> persistence_extrema(const SpeedProfile& profile, double min_persistence) {
  const auto& y = profile.v_mean;
  const std::size_t n = y.size();
  if (n == 0) return {};

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return y[a] < y[b] || (y[a] == y[b] && a < b);
  });

  // Union-find over sample indices; each component remembers its minimum.
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(n, kUnset);
  std::vector<std::size_t> component_min(n, kUnset);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  // Lower (value, index) means older basin.
  auto older = [&](std::size_t a, std::size_t b) {
    return y[a] < y[b] || (y[a] == y[b] && a < b);
  };

  std::vector<Extremum> out;
  for (std::size_t i : order) {
    const bool left = i > 0 && parent[i - 1] != kUnset;
    const bool right = i + 1 < n && parent[i + 1] != kUnset;
    parent[i] = i;
    if (!left && !right) {
      component_min[i] = i;
      continue;
    }
    if (left != right) {
      const std::size_t root = find(left ? i - 1 : i + 1);
      parent[i] = root;
      continue;
    }
    const std::size_t a = find(i - 1);
    const std::size_t b = find(i + 1);
    const std::size_t min_a = component_min[a];
    const std::size_t min_b = component_min[b];
    const std::size_t survivor = older(min_a, min_b) ? a : b;
    const std::size_t dying_min = older(min_a, min_b) ? min_b : min_a;
    const double persistence = y[i] - y[dying_min];
    if (persistence >= min_persistence) {
      out.push_back({i, ExtremumKind::Max, persistence});
      out.push_back({dying_min, ExtremumKind::Min, persistence});
    }
    parent[a] = survivor;
    parent[b] = survivor;
    parent[i] = survivor;
  }
  out.push_back({component_min[find(order.front())], ExtremumKind::Min,
                 std::numeric_limits<double>::infinity()});
  std::sort(out.begin(), out.end(),
            [](const Extremum& a, const Extremum& b) { return a.index < b.index; });
  return out;
}

std::string_view to_string(SegmentLabel label) {
  switch (label) {
    case SegmentLabel::Acceleration: return "acceleration";
    case SegmentLabel::Deceleration: return "deceleration";
    case SegmentLabel::Stable: return "stable";
  }
  return "unknown";
}

namespace {

struct Window {
  std::size_t start;
  std::size_t end;
};

// Maximal windows, scanned left to right, whose spread stays within `band`
// and whose duration reaches `min_duration`. Two-pointer scan with monotone
// deques for the running min and max.
std::vector<Window> stable_windows(const SpeedProfile& p, double band, double min_duration) {
  std::vector<Window> windows;
  const auto& y = p.v_mean;
  const std::size_t n = y.size();
  std::deque<std::size_t> maxq;
  std::deque<std::size_t> minq;
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive end of the current window
  while (start < n) {
    if (end <= start) {
      maxq.clear();
      minq.clear();
      end = start;
    }
    while (end < n) {
      const double hi = maxq.empty() ? y[end] : std::max(y[maxq.front()], y[end]);
      const double lo = minq.empty() ? y[end] : std::min(y[minq.front()], y[end]);
      if (hi - lo > band) break;
      while (!maxq.empty() && y[maxq.back()] <= y[end]) maxq.pop_back();
      while (!minq.empty() && y[minq.back()] >= y[end]) minq.pop_back();
      maxq.push_back(end);
      minq.push_back(end);
      ++end;
    }
    const std::size_t last = end - 1;
    if (p.t[last] - p.t[start] >= min_duration && last > start) {
      windows.push_back({start, last});
      start = end;  // next window starts past this one
      continue;
    }
    ++start;
    if (!maxq.empty() && maxq.front() < start) maxq.pop_front();
    if (!minq.empty() && minq.front() < start) minq.pop_front();
  }
  return windows;
}

}  // namespace

std::vector<Segment> classify_segments(const SpeedProfile& profile,
                                       std::span<const Extremum> extrema, double stable_band,
                                       double min_stable_duration) {
  const std::size_t n = profile.size();
  if (n == 0) return {};
  if (n == 1) return {{0, 0, SegmentLabel::Stable}};
  const auto& y = profile.v_mean;

  // Per-frame labels, then run-length encode.
  std::vector<std::size_t> cuts{0, n - 1};
  for (const auto& e : extrema) {
    if (e.index < n) cuts.push_back(e.index);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<SegmentLabel> label(n, SegmentLabel::Stable);
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const std::size_t a = cuts[c];
    const std::size_t b = cuts[c + 1];
    SegmentLabel l = SegmentLabel::Stable;
    if (y[b] > y[a]) l = SegmentLabel::Acceleration;
    if (y[b] < y[a]) l = SegmentLabel::Deceleration;
    // Frame b starts the next interval; the final frame closes the last one.
    std::fill(label.begin() + static_cast<std::ptrdiff_t>(a),
              label.begin() + static_cast<std::ptrdiff_t>(b), l);
    if (b == n - 1) label[b] = l;
  }
  for (const auto& w : stable_windows(profile, stable_band, min_stable_duration)) {
    std::fill(label.begin() + static_cast<std::ptrdiff_t>(w.start),
              label.begin() + static_cast<std::ptrdiff_t>(w.end) + 1, SegmentLabel::Stable);
  }

  std::vector<Segment> segments;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || label[i] != label[start]) {
      // Segments share their boundary frame with the next one.
      segments.push_back({start, i == n ? n - 1 : i, label[start]});
      start = i;
    }
  }
  return segments;
}

std::vector<Segment> segment_platoon(const TrajectoryDataset& ds, const SegmentationConfig& cfg) {
  SpeedProfile profile = mean_speed_profile(ds);
  if (cfg.smooth) profile = smooth_profile(profile, cfg.smoothing_window);
  const auto extrema = persistence_extrema(profile, cfg.min_persistence);
  return classify_segments(profile, extrema, cfg.stable_band, cfg.min_stable_duration);
}

std::vector<LabeledState> states_by_segment(std::span<const TrafficState> states,
                                            std::span<const Segment> segments) {
  if (segments.empty()) {
    if (states.empty()) return {};
    throw Error(ErrorCode::IndexMismatch, "no segments for a non-empty state list");
  }
  const std::size_t frames = segments.back().end_index + 1;
  if (states.size() > frames - 1) {
    throw Error(ErrorCode::IndexMismatch, std::to_string(states.size()) + " states for " +
                                              std::to_string(frames) + " frames");
  }
  std::vector<LabeledState> out;
  out.reserve(states.size());
  std::size_t seg = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::size_t f = states[i].frame_index;
    if (f + 1 >= frames || (i > 0 && f <= states[i - 1].frame_index)) {
      throw Error(ErrorCode::IndexMismatch, "state " + std::to_string(i) + " has frame index " +
                                                std::to_string(f));
    }
    while (seg + 1 < segments.size() && segments[seg].end_index <= f) ++seg;
    out.push_back({states[i], segments[seg].label});
  }
  return out;
}

}  // namespace platoonfd
