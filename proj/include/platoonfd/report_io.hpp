#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "platoonfd/aggregation.hpp"
#include "platoonfd/calibration.hpp"
#include "platoonfd/estimator.hpp"
#include "platoonfd/segmentation.hpp"

namespace platoonfd {

inline constexpr std::string_view kToolName = "platoonfd";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Effective settings recorded in the comment header of every output table.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

void write_comment_header(std::ostream& out, const ConfigEntries& config);

/// `t_s, k_veh_per_km, q_veh_per_h, v_kmh, dataset_id, driver_mode`, in
/// reporting units.
void write_states_csv(std::ostream& out, std::span<const TrafficState> states,
                      const ConfigEntries& config = {});

/// Same columns plus `segment_label`.
void write_labeled_states_csv(std::ostream& out, std::span<const LabeledState> states,
                              const ConfigEntries& config = {});

/// Reads a states table (with or without `segment_label`) back into SI
/// units. Errors: MissingColumn, MalformedInput, UnknownDriverMode.
std::vector<TrafficState> read_states_csv(std::string_view text);

/// `bin_index, k_mean, v_mean, q_mean, count` preceded by comment lines
/// recording delta, axis and driver mode.
void write_binned_csv(std::ostream& out, const BinnedSeries& series,
                      const ConfigEntries& config = {});
BinnedSeries read_binned_csv(std::string_view text);

/// `delta, driver_mode, v_f_kmh, k_cr_veh_km, k_jam_veh_km, w_kmh, objective, converged`.
void write_sensitivity_csv(std::ostream& out, std::span<const SensitivityRow> rows,
                           const ConfigEntries& config = {});

/// Reads the first converged-or-not parameter row of a table written by
/// write_sensitivity_csv.
TfdParams read_params_csv(std::string_view text);

/// `start_s, end_s, label`.
void write_segments_csv(std::ostream& out, std::span<const Segment> segments,
                        std::span<const double> frame_times, const ConfigEntries& config = {});

std::string_view to_string(BinAxis axis);

}  // namespace platoonfd
