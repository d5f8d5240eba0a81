#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "platoonfd/trajectory.hpp"

namespace platoonfd {

enum class TableLayout { Long, Wide };

/// Maps the columns of an input table onto the canonical fields and carries
/// the unit factors applied at ingestion. The defaults describe the
/// canonical long format `time_s, vehicle_id, position_m[, speed_mps]`.
///
/// The wide layout (one row per timestamp, one position column per vehicle,
/// as in OpenACC-style exports) lists its columns explicitly in
/// `wide_positions` / `wide_speeds`, keyed by vehicle id in leader-first
/// order.
struct ColumnMapping {
  TableLayout layout = TableLayout::Long;
  char delimiter = ',';
  std::string time_column = "time_s";
  std::string vehicle_column = "vehicle_id";
  std::string position_column = "position_m";
  std::string speed_column = "speed_mps";
  std::vector<std::pair<std::string, std::string>> wide_positions;
  std::vector<std::pair<std::string, std::string>> wide_speeds;
  double time_scale = 1.0;
  double position_scale = 1.0;
  double speed_scale = 1.0;
};

/// Reads a mapping from flat `key = value` text. Recognized keys: layout,
/// delimiter, time, vehicle, position, speed, time_scale, position_scale,
/// speed_scale, and `position.<vehicle>` / `speed.<vehicle>` for wide tables.
ColumnMapping parse_column_mapping(std::string_view text);

struct DatasetMetadata {
  std::optional<std::string> dataset_id;
  std::optional<DriverMode> driver_mode;
  std::vector<std::string> vehicle_order;
  std::optional<double> sample_hz;

  /// Fields set in `other` override this one.
  void merge(const DatasetMetadata& other);
};

/// Parses `key = value` (or `key: value`) lines; blank lines and lines
/// starting with '#' are skipped. Keys: dataset_id, driver_mode,
/// vehicle_order (comma separated, leader first), sample_hz.
DatasetMetadata parse_metadata(std::string_view text);

/// Parses a trajectory table. Metadata may come from `# key=value` comment
/// lines at the top of the table and from a sidecar; sidecar entries win.
/// Without a vehicle order the leader is taken as the vehicle furthest along
/// the path in the first frame. Without sample_hz the interval is inferred
/// from the first frame spacing.
///
/// Errors: MissingColumn, MalformedInput, NonUniformSampling,
/// UnknownDriverMode, RaggedFrame. Messages carry the 1-based line number
/// where one applies. `fallback_id` is used when no metadata names the dataset.
TrajectoryDataset parse_trajectory_file(std::string_view bytes, const ColumnMapping& schema = {},
                                        const DatasetMetadata& sidecar = {},
                                        std::string_view fallback_id = {});

/// Writes the canonical long format with an in-file metadata header. Values
/// are written in shortest round-trip form, so parsing the output reproduces
/// the dataset bit for bit.
void write_trajectory_csv(std::ostream& out, const TrajectoryDataset& ds);
void write_metadata(std::ostream& out, const TrajectoryDataset& ds);

/// `<path>.meta` if present, else `<stem>.meta` next to the file.
std::optional<std::filesystem::path> find_sidecar(const std::filesystem::path& table);

std::string read_file(const std::filesystem::path& path);

/// Loads a table plus its sidecar. The file stem is used as dataset_id when
/// neither source provides one.
TrajectoryDataset load_trajectory(const std::filesystem::path& path, const ColumnMapping& schema = {});

}  // namespace platoonfd
