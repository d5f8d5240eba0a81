#pragma once

#include <cstddef>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

namespace platoonfd {

enum class DriverMode { Human, AccMin, AccMed, AccMax, Cacc };

inline constexpr DriverMode kAllDriverModes[] = {DriverMode::Human, DriverMode::AccMin,
                                                 DriverMode::AccMed, DriverMode::AccMax,
                                                 DriverMode::Cacc};

std::string_view to_string(DriverMode mode);

/// Accepts the canonical names (`human`, `acc_min`, `acc_med`, `acc_max`, `cacc`)
/// case-insensitively, with `-` or no separator in place of `_`.
/// Throws Error(UnknownDriverMode) for anything else.
DriverMode parse_driver_mode(std::string_view text);

/// One synchronized observation of the whole platoon. Positions are path
/// coordinates of each vehicle's antenna, leader first. `speeds` is either
/// empty or holds one recorded speed per vehicle.
struct PlatoonFrame {
  double t = 0.0;
  std::vector<double> positions;
  std::vector<double> speeds;

  [[nodiscard]] bool has_speeds() const noexcept { return !speeds.empty(); }
  [[nodiscard]] std::size_t vehicle_count() const noexcept { return positions.size(); }
  [[nodiscard]] double leader_position() const { return positions.front(); }
  [[nodiscard]] double last_position() const { return positions.back(); }
};

// Frame spacing is accepted when it is within this many seconds of an
// integer multiple of the sample interval.
inline constexpr double kSamplingTolerance = 1e-3;

/// Immutable, time-aligned trajectories of an ordered platoon.
///
/// The constructor enforces the structural invariants: one position per
/// vehicle in every frame, finite values, strictly increasing time and frame
/// spacing equal to the sample interval. A spacing that is an integer
/// multiple (>= 2) of the interval is a data gap; it is recorded rather than
/// rejected, and frame pairs straddling it are flagged. Vehicle ordering is
/// checked separately by validate_platoon.
class TrajectoryDataset {
 public:
  TrajectoryDataset(std::string dataset_id, DriverMode mode, double sample_interval,
                    std::vector<std::string> vehicle_ids, std::vector<PlatoonFrame> frames);

  [[nodiscard]] const std::string& dataset_id() const noexcept { return dataset_id_; }
  [[nodiscard]] DriverMode driver_mode() const noexcept { return mode_; }
  [[nodiscard]] double sample_interval() const noexcept { return sample_interval_; }
  [[nodiscard]] const std::vector<std::string>& vehicle_ids() const noexcept { return vehicle_ids_; }
  [[nodiscard]] const std::vector<PlatoonFrame>& frames() const noexcept { return frames_; }
  [[nodiscard]] std::size_t vehicle_count() const noexcept { return vehicle_ids_.size(); }
  [[nodiscard]] std::size_t frame_count() const noexcept { return frames_.size(); }
  [[nodiscard]] bool has_speeds() const noexcept { return has_speeds_; }

  /// Indices i such that frames i and i+1 are separated by a data gap.
  [[nodiscard]] const std::vector<std::size_t>& gaps() const noexcept { return gaps_; }
  [[nodiscard]] bool is_gap(std::size_t pair_index) const;

 private:
  std::string dataset_id_;
  DriverMode mode_;
  double sample_interval_;
  std::vector<std::string> vehicle_ids_;
  std::vector<PlatoonFrame> frames_;
  std::vector<std::size_t> gaps_;
  bool has_speeds_ = false;
};

struct ValidationConfig {
  double speed_tolerance = 0.5;  // m/s
};

struct ValidationIssue {
  std::size_t frame_index = 0;
  std::string rule;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  [[nodiscard]] bool accepted() const noexcept { return errors.empty(); }
};

/// Reports every adjacent pair whose follower is not strictly behind its
/// predecessor (error) and every frame where a recorded speed disagrees with
/// the finite-difference speed of the positions (warning).
ValidationReport validate_platoon(const TrajectoryDataset& ds, const ValidationConfig& cfg = {});

struct FramePair {
  std::size_t index;  // index of the leading frame
  const PlatoonFrame* current;
  const PlatoonFrame* next;
  bool straddles_gap;

  [[nodiscard]] double dt() const { return next->t - current->t; }
};

/// Forward range over consecutive frame pairs. Yields frame_count() - 1 pairs.
class FramePairRange {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = FramePair;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = FramePair;

    iterator() = default;
    iterator(const TrajectoryDataset* ds, std::size_t index) : ds_(ds), index_(index) {}

    FramePair operator*() const;
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto copy = *this;
      ++index_;
      return copy;
    }
    bool operator==(const iterator& other) const { return index_ == other.index_; }

   private:
    const TrajectoryDataset* ds_ = nullptr;
    std::size_t index_ = 0;
  };

  explicit FramePairRange(const TrajectoryDataset& ds) : ds_(&ds) {}

  [[nodiscard]] iterator begin() const { return {ds_, 0}; }
  [[nodiscard]] iterator end() const { return {ds_, ds_->frame_count() - 1}; }
  [[nodiscard]] std::size_t size() const { return ds_->frame_count() - 1; }

 private:
  const TrajectoryDataset* ds_;
};

/// Throws Error(TooFewFrames) when the dataset has fewer than two frames.
FramePairRange platoon_frames(const TrajectoryDataset& ds);

}  // namespace platoonfd
