#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "platoonfd/calibration.hpp"
#include "platoonfd/estimator.hpp"
#include "platoonfd/report_io.hpp"
#include "platoonfd/segmentation.hpp"
#include "platoonfd/synthetic.hpp"

namespace platoonfd::cli {

struct SynthSettings {
  double s0 = 8.0;          // m
  double time_gap = 1.2;    // s
  std::size_t vehicles = 5;
  double sample_hz = 10.0;
  double v_max_kmh = 126.0;
  double ramp_s = 300.0;
  double hold_s = 600.0;
  double dwell_s = 0.0;
  double noise_m = 0.0;
  std::string dataset_id = "synthetic";
  std::string driver_mode = "acc_min";
  std::string follower = "quasi_static";  // or "lag"
  bool emit_speeds = true;
};

struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;
  std::string schema;  // column-mapping file, empty for the canonical long layout
  std::filesystem::path out = "out";

  double buffer = 3.0;
  std::string on_backward = "abort";  // or "skip"

  double delta_k = 0.3;
  double delta_v = 0.3;
  std::vector<double> deltas{0.3, 0.6, 1.0, 1.5, 2.0, 3.0, 3.5};

  // lower v_f, k_cr, k_jam then upper v_f, k_cr, k_jam
  std::vector<double> bounds{60.0, 5.0, 60.0, 160.0, 60.0, 250.0};
  std::size_t max_evaluations = 5000;

  double min_persistence = 1.0;
  double stable_band = 0.5;
  double min_stable_duration = 10.0;
  bool smooth = false;
  double smoothing_window = 1.0;

  std::string states;  // plot: optional scatter source
  std::string params;  // plot: optional parameter table

  std::uint64_t seed = 42;
  SynthSettings synth;

  [[nodiscard]] EstimatorConfig estimator() const;
  [[nodiscard]] CalibrationBounds calibration_bounds() const;
  [[nodiscard]] OptimizerSettings optimizer() const;
  [[nodiscard]] SegmentationConfig segmentation() const;
  [[nodiscard]] SyntheticConfig synthetic() const;
  [[nodiscard]] DriveCycle drive_cycle() const;
  [[nodiscard]] HeadwayLaw headway_law() const;

  /// Throws Error(InvalidArgument) when a setting violates a module
  /// precondition.
  void check() const;

  /// Every setting as key/value text, for output headers. Keys are the
  /// command-line option names, which are also the config-file keys.
  [[nodiscard]] ConfigEntries entries(std::string_view command) const;
};

}  // namespace platoonfd::cli
