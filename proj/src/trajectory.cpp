#include "platoonfd/trajectory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "platoonfd/error.hpp"

namespace platoonfd {

std::string_view to_string(DriverMode mode) {
  switch (mode) {
    case DriverMode::Human: return "human";
    case DriverMode::AccMin: return "acc_min";
    case DriverMode::AccMed: return "acc_med";
    case DriverMode::AccMax: return "acc_max";
    case DriverMode::Cacc: return "cacc";
  }
  return "unknown";
}

DriverMode parse_driver_mode(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (c == '_' || c == '-' || std::isspace(static_cast<unsigned char>(c))) continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "human" || key == "hv") return DriverMode::Human;
  if (key == "accmin") return DriverMode::AccMin;
  if (key == "accmed") return DriverMode::AccMed;
  if (key == "accmax") return DriverMode::AccMax;
  if (key == "cacc") return DriverMode::Cacc;
  throw Error(ErrorCode::UnknownDriverMode, "'" + std::string(text) + "'");
}

TrajectoryDataset::TrajectoryDataset(std::string dataset_id, DriverMode mode,
                                     double sample_interval,
                                     std::vector<std::string> vehicle_ids,
                                     std::vector<PlatoonFrame> frames)
    : dataset_id_(std::move(dataset_id)),
      mode_(mode),
      sample_interval_(sample_interval),
      vehicle_ids_(std::move(vehicle_ids)),
      frames_(std::move(frames)) {
  if (!(sample_interval_ > 0.0) || !std::isfinite(sample_interval_)) {
    throw Error(ErrorCode::InvalidArgument, "sample interval must be positive");
  }
  if (vehicle_ids_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "dataset has no vehicles");
  }
  if (std::set<std::string>(vehicle_ids_.begin(), vehicle_ids_.end()).size() != vehicle_ids_.size()) {
    throw Error(ErrorCode::InvalidArgument, "duplicate vehicle id");
  }
  const std::size_t n = vehicle_ids_.size();
  has_speeds_ = !frames_.empty();
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const auto& f = frames_[i];
    if (f.positions.size() != n) {
      std::ostringstream msg;
      msg << "frame " << i << " (t=" << f.t << ") has " << f.positions.size() << " of " << n
          << " vehicles";
      throw Error(ErrorCode::RaggedFrame, msg.str());
    }
    if (f.has_speeds() && f.speeds.size() != n) {
      throw Error(ErrorCode::RaggedFrame, "frame " + std::to_string(i) + " has partial speeds");
    }
    has_speeds_ = has_speeds_ && f.has_speeds();
    const bool finite = std::isfinite(f.t) &&
                        std::all_of(f.positions.begin(), f.positions.end(),
                                    [](double x) { return std::isfinite(x); }) &&
                        std::all_of(f.speeds.begin(), f.speeds.end(),
                                    [](double x) { return std::isfinite(x); });
    if (!finite) {
      throw Error(ErrorCode::MalformedInput, "non-finite value in frame " + std::to_string(i));
    }
    if (i == 0) continue;
    const double spacing = f.t - frames_[i - 1].t;
    const double multiple = std::round(spacing / sample_interval_);
    if (!(spacing > 0.0) || multiple < 1.0 ||
        std::abs(spacing - multiple * sample_interval_) > kSamplingTolerance) {
      std::ostringstream msg;
      msg << "spacing " << spacing << " s between frames " << i - 1 << " and " << i
          << " does not match sample interval " << sample_interval_ << " s";
      throw Error(ErrorCode::NonUniformSampling, msg.str());
    }
    if (multiple >= 2.0) gaps_.push_back(i - 1);
  }
}

bool TrajectoryDataset::is_gap(std::size_t pair_index) const {
  return std::binary_search(gaps_.begin(), gaps_.end(), pair_index);
}

ValidationReport validate_platoon(const TrajectoryDataset& ds, const ValidationConfig& cfg) {
  ValidationReport report;
  const auto& frames = ds.frames();
  const auto& ids = ds.vehicle_ids();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& pos = frames[i].positions;
    for (std::size_t v = 1; v < pos.size(); ++v) {
      if (pos[v] >= pos[v - 1]) {
        report.errors.push_back(
            {i, "ordering: " + ids[v] + " is not behind " + ids[v - 1]});
      }
    }
  }

  if (frames.size() < 2) return report;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!frames[i].has_speeds()) continue;
    // Central differences in the interior, one-sided at the ends.
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == frames.size() ? i : i + 1;
    const double dt = frames[hi].t - frames[lo].t;
    std::string offenders;
    for (std::size_t v = 0; v < ds.vehicle_count(); ++v) {
      const double fd = (frames[hi].positions[v] - frames[lo].positions[v]) / dt;
      if (std::abs(fd - frames[i].speeds[v]) > cfg.speed_tolerance) {
        if (!offenders.empty()) offenders += ",";
        offenders += ids[v];
      }
    }
    if (!offenders.empty()) {
      report.warnings.push_back({i, "speed: recorded speed disagrees with positions for " + offenders});
    }
  }
  return report;
}

FramePair FramePairRange::iterator::operator*() const {
  const auto& frames = ds_->frames();
  return {index_, &frames[index_], &frames[index_ + 1], ds_->is_gap(index_)};
}

FramePairRange platoon_frames(const TrajectoryDataset& ds) {
  if (ds.frame_count() < 2) {
    throw Error(ErrorCode::TooFewFrames,
                "dataset '" + ds.dataset_id() + "' has " + std::to_string(ds.frame_count()) +
                    " frame(s), need at least 2");
  }
  return FramePairRange(ds);
}

}  // namespace platoonfd
