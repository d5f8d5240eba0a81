#include "pipeline_config.hpp"

#include "platoonfd/csv.hpp"
#include "platoonfd/error.hpp"
#include "platoonfd/units.hpp"

namespace platoonfd::cli {
namespace {

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += csv::format_double(values[i]);
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, message);
}

}  // namespace

EstimatorConfig PipelineConfig::estimator() const {
  EstimatorConfig cfg;
  cfg.buffer = buffer;
  cfg.on_error = on_backward == "skip" ? PairErrorPolicy::Skip : PairErrorPolicy::Abort;
  return cfg;
}

CalibrationBounds PipelineConfig::calibration_bounds() const {
  CalibrationBounds b;
  for (std::size_t i = 0; i < 3; ++i) {
    b.lower[i] = bounds[i];
    b.upper[i] = bounds[i + 3];
  }
  return b;
}

OptimizerSettings PipelineConfig::optimizer() const {
  OptimizerSettings s;
  s.max_evaluations = max_evaluations;
  return s;
}

SegmentationConfig PipelineConfig::segmentation() const {
  SegmentationConfig s;
  s.min_persistence = min_persistence;
  s.stable_band = stable_band;
  s.min_stable_duration = min_stable_duration;
  s.smooth = smooth;
  s.smoothing_window = smoothing_window;
  return s;
}

SyntheticConfig PipelineConfig::synthetic() const {
  SyntheticConfig s;
  s.vehicles = synth.vehicles;
  s.sample_hz = synth.sample_hz;
  s.dataset_id = synth.dataset_id;
  s.driver_mode = parse_driver_mode(synth.driver_mode);
  s.position_noise = synth.noise_m;
  s.seed = seed;
  s.emit_speeds = synth.emit_speeds;
  s.follower = synth.follower == "lag" ? FollowerModel::Lag : FollowerModel::QuasiStatic;
  return s;
}

DriveCycle PipelineConfig::drive_cycle() const {
  return DriveCycle::sweep(units::kmh_to_mps(synth.v_max_kmh), synth.ramp_s, synth.hold_s, synth.dwell_s);
}

HeadwayLaw PipelineConfig::headway_law() const { return {synth.s0, synth.time_gap}; }

void PipelineConfig::check() const {
  require(buffer > 0.0, "buffer must be positive");
  require(on_backward == "abort" || on_backward == "skip", "on-backward must be 'abort' or 'skip'");
  require(delta_k > 0.0 && delta_v > 0.0, "bin widths must be positive");
  require(!deltas.empty(), "deltas must not be empty");
  for (const double d : deltas) require(d > 0.0, "deltas must be positive");
  require(bounds.size() == 6, "bounds takes six values: lower v_f,k_cr,k_jam then upper v_f,k_cr,k_jam");
  for (std::size_t i = 0; i < 3; ++i) require(bounds[i] <= bounds[i + 3], "each lower bound must not exceed its upper bound");
  require(max_evaluations > 0, "max-evaluations must be positive");
  require(min_persistence >= 0.0, "min-persistence must be non-negative");
  require(stable_band > 0.0, "stable-band must be positive");
  require(min_stable_duration >= 0.0, "min-stable-duration must be non-negative");
  require(smoothing_window > 0.0, "smoothing-window must be positive");
  require(synth.follower == "quasi_static" || synth.follower == "lag", "follower must be 'quasi_static' or 'lag'");
  require(synth.ramp_s > 0.0 && synth.hold_s >= 0.0 && synth.dwell_s >= 0.0, "cycle durations must be non-negative");
  require(synth.noise_m >= 0.0, "noise must be non-negative");
  (void)parse_driver_mode(synth.driver_mode);
}

ConfigEntries PipelineConfig::entries(std::string_view command) const {
  std::string input_list;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i) input_list += ';';
    input_list += inputs[i].string();
  }
  ConfigEntries e{
      {"command", std::string(command)},
      {"input", input_list},
      {"schema", schema},
      {"out", out.string()},
      {"buffer", csv::format_double(buffer)},
      {"on-backward", on_backward},
      {"delta-k", csv::format_double(delta_k)},
      {"delta-v", csv::format_double(delta_v)},
      {"deltas", join(deltas)},
      {"bounds", join(bounds)},
      {"max-evaluations", std::to_string(max_evaluations)},
      {"min-persistence", csv::format_double(min_persistence)},
      {"stable-band", csv::format_double(stable_band)},
      {"min-stable-duration", csv::format_double(min_stable_duration)},
      {"smooth", smooth ? "true" : "false"},
      {"smoothing-window", csv::format_double(smoothing_window)},
      {"seed", std::to_string(seed)},
  };
  if (command == "synth") {
    e.insert(e.end(), {{"s0", csv::format_double(synth.s0)},
                       {"time-gap", csv::format_double(synth.time_gap)},
                       {"vehicles", std::to_string(synth.vehicles)},
                       {"sample-hz", csv::format_double(synth.sample_hz)},
                       {"v-max", csv::format_double(synth.v_max_kmh)},
                       {"ramp", csv::format_double(synth.ramp_s)},
                       {"hold", csv::format_double(synth.hold_s)},
                       {"dwell", csv::format_double(synth.dwell_s)},
                       {"noise", csv::format_double(synth.noise_m)},
                       {"follower", synth.follower},
                       {"dataset-id", synth.dataset_id},
                       {"driver-mode", synth.driver_mode}});
  }
  return e;
}

}  // namespace platoonfd::cli
