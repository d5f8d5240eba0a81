#pragma once

#include "pipeline_config.hpp"
#include "run_log.hpp"

namespace platoonfd::cli {

// Each command writes into cfg.out and logs to `log`. Per-file failures are
// logged and skipped so the remaining inputs still produce output.

/// Trajectory files -> `<stem>.states.csv`.
void cmd_estimate(const PipelineConfig& cfg, RunLog& log);

/// States files -> `binned_<mode>_{qk,vk,vq}.csv`, one set per driver mode.
void cmd_aggregate(const PipelineConfig& cfg, RunLog& log);

/// Density-binned files -> `<stem>.params.csv`.
void cmd_calibrate(const PipelineConfig& cfg, RunLog& log);

/// States files -> `sensitivity_<mode>.csv` over cfg.deltas.
void cmd_sensitivity(const PipelineConfig& cfg, RunLog& log);

/// Trajectory files -> `<stem>.segments.csv`, `<stem>.labeled_states.csv`
/// and `<stem>.binned_<label>.csv`.
void cmd_segment(const PipelineConfig& cfg, RunLog& log);

/// Binned files -> `<stem>.<plane>.svg`.
void cmd_plot(const PipelineConfig& cfg, RunLog& log);

/// Drive cycle -> `<dataset_id>.csv` plus its `<dataset_id>.meta` sidecar.
void cmd_synth(const PipelineConfig& cfg, RunLog& log);

}  // namespace platoonfd::cli
