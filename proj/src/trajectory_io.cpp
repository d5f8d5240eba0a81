#include "platoonfd/trajectory_io.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "platoonfd/csv.hpp"
#include "platoonfd/error.hpp"

namespace platoonfd {
namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

// Splits "key = value" or "key: value"; returns false for anything else.
bool split_key_value(std::string_view line, std::string_view& key, std::string_view& value) {
  auto pos = line.find('=');
  if (pos == std::string_view::npos) pos = line.find(':');
  if (pos == std::string_view::npos) return false;
  key = csv::trim(line.substr(0, pos));
  value = csv::trim(line.substr(pos + 1));
  return !key.empty();
}

double require_number(std::string_view field, std::size_t line, std::string_view what) {
  auto v = csv::parse_double(field);
  if (!v) {
    throw Error(ErrorCode::MalformedInput,
                at_line(line) + "cannot parse " + std::string(what) + " '" + std::string(field) + "'");
  }
  return *v;
}

void apply_metadata_entry(DatasetMetadata& meta, std::string_view key, std::string_view value) {
  if (key == "dataset_id") {
    meta.dataset_id = std::string(value);
  } else if (key == "driver_mode") {
    meta.driver_mode = parse_driver_mode(value);
  } else if (key == "vehicle_order") {
    meta.vehicle_order.clear();
    for (auto id : csv::split(value, ',')) {
      if (!id.empty()) meta.vehicle_order.emplace_back(id);
    }
  } else if (key == "sample_hz") {
    auto hz = csv::parse_double(value);
    if (!hz || !(*hz > 0.0)) {
      throw Error(ErrorCode::MalformedInput, "sample_hz must be a positive number");
    }
    meta.sample_hz = *hz;
  }
}

std::optional<std::size_t> find_column(const std::vector<std::string_view>& header,
                                       std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t require_column(const std::vector<std::string_view>& header, std::string_view name) {
  auto idx = find_column(header, name);
  if (!idx) throw Error(ErrorCode::MissingColumn, "column '" + std::string(name) + "' not found");
  return *idx;
}

struct Row {
  double t;
  std::size_t vehicle;
  double position;
  std::optional<double> speed;
  std::size_t line;
};

double infer_interval(const DatasetMetadata& meta, const std::vector<PlatoonFrame>& frames) {
  if (meta.sample_hz) return 1.0 / *meta.sample_hz;
  if (frames.size() >= 2) return frames[1].t - frames[0].t;
  return 1.0;
}

std::vector<std::size_t> order_from_first_frame(const std::vector<double>& positions) {
  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return positions[a] > positions[b]; });
  return order;
}

TrajectoryDataset build_dataset(const DatasetMetadata& meta, std::vector<std::string> ids,
                                std::vector<PlatoonFrame> frames) {
  if (!meta.driver_mode) {
    throw Error(ErrorCode::UnknownDriverMode, "no driver_mode in metadata");
  }
  if (!meta.dataset_id || meta.dataset_id->empty()) {
    throw Error(ErrorCode::MalformedInput, "no dataset_id in metadata");
  }

  // Reorder columns leader first.
  std::vector<std::size_t> order;
  if (!meta.vehicle_order.empty()) {
    for (const auto& id : meta.vehicle_order) {
      auto it = std::find(ids.begin(), ids.end(), id);
      if (it == ids.end()) {
        throw Error(ErrorCode::RaggedFrame, "vehicle '" + id + "' from vehicle_order has no rows");
      }
      order.push_back(static_cast<std::size_t>(it - ids.begin()));
    }
    if (order.size() != ids.size()) {
      throw Error(ErrorCode::MalformedInput, "vehicle_order does not list every vehicle");
    }
  } else if (!frames.empty()) {
    order = order_from_first_frame(frames.front().positions);
  } else {
    order.resize(ids.size());
    std::iota(order.begin(), order.end(), 0);
  }

  auto permute = [&](const std::vector<double>& v) {
    std::vector<double> out;
    out.reserve(order.size());
    for (auto i : order) out.push_back(v[i]);
    return out;
  };
  std::vector<std::string> ordered_ids;
  for (auto i : order) ordered_ids.push_back(ids[i]);
  for (auto& f : frames) {
    f.positions = permute(f.positions);
    if (f.has_speeds()) f.speeds = permute(f.speeds);
  }
  const double dt = infer_interval(meta, frames);
  return TrajectoryDataset(*meta.dataset_id, *meta.driver_mode, dt, std::move(ordered_ids),
                           std::move(frames));
}

TrajectoryDataset parse_long(csv::LineReader& reader, std::vector<std::string_view> header,
                             const ColumnMapping& schema, const DatasetMetadata& meta) {
  const auto time_col = require_column(header, schema.time_column);
  const auto vehicle_col = require_column(header, schema.vehicle_column);
  const auto position_col = require_column(header, schema.position_column);
  const auto speed_col = find_column(header, schema.speed_column);

  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> id_index;
  std::vector<Row> rows;
  std::string_view line;
  while (reader.next(line)) {
    if (csv::trim(line).empty() || line.front() == '#') continue;
    const auto fields = csv::split(line, schema.delimiter);
    const std::size_t lineno = reader.line_number();
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::MalformedInput,
                  at_line(lineno) + "expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    Row row{};
    row.line = lineno;
    row.t = require_number(fields[time_col], lineno, "time") * schema.time_scale;
    row.position = require_number(fields[position_col], lineno, "position") * schema.position_scale;
    if (speed_col && !fields[*speed_col].empty()) {
      row.speed = require_number(fields[*speed_col], lineno, "speed") * schema.speed_scale;
    }
    const std::string id(fields[vehicle_col]);
    if (id.empty()) throw Error(ErrorCode::MalformedInput, at_line(lineno) + "empty vehicle id");
    auto [it, inserted] = id_index.try_emplace(id, ids.size());
    if (inserted) ids.push_back(id);
    row.vehicle = it->second;
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });

  const std::size_t n = ids.size();
  std::vector<PlatoonFrame> frames;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].t == rows[i].t) ++j;
    PlatoonFrame frame;
    frame.t = rows[i].t;
    frame.positions.assign(n, 0.0);
    std::vector<double> speeds(n, 0.0);
    std::vector<bool> seen(n, false);
    bool all_speeds = true;
    for (std::size_t r = i; r < j; ++r) {
      const auto& row = rows[r];
      if (seen[row.vehicle]) {
        throw Error(ErrorCode::MalformedInput, at_line(row.line) + "duplicate row for vehicle '" +
                                                   ids[row.vehicle] + "' at the same time");
      }
      seen[row.vehicle] = true;
      frame.positions[row.vehicle] = row.position;
      if (row.speed) {
        speeds[row.vehicle] = *row.speed;
      } else {
        all_speeds = false;
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!seen[v]) {
        std::ostringstream msg;
        msg << at_line(rows[i].line) << "vehicle '" << ids[v] << "' missing at t=" << frame.t;
        throw Error(ErrorCode::RaggedFrame, msg.str());
      }
    }
    if (all_speeds) frame.speeds = std::move(speeds);
    frames.push_back(std::move(frame));
    i = j;
  }
  return build_dataset(meta, std::move(ids), std::move(frames));
}

TrajectoryDataset parse_wide(csv::LineReader& reader, std::vector<std::string_view> header,
                             const ColumnMapping& schema, const DatasetMetadata& meta) {
  if (schema.wide_positions.empty()) {
    throw Error(ErrorCode::MissingColumn, "wide layout needs position.<vehicle> columns");
  }
  const auto time_col = require_column(header, schema.time_column);
  std::vector<std::string> ids;
  std::vector<std::size_t> pos_cols;
  std::vector<std::optional<std::size_t>> speed_cols;
  for (const auto& [id, column] : schema.wide_positions) {
    ids.push_back(id);
    pos_cols.push_back(require_column(header, column));
    std::optional<std::size_t> sc;
    for (const auto& [sid, scol] : schema.wide_speeds) {
      if (sid == id) sc = require_column(header, scol);
    }
    speed_cols.push_back(sc);
  }
  const bool speeds = std::all_of(speed_cols.begin(), speed_cols.end(),
                                  [](const auto& c) { return c.has_value(); });

  std::vector<PlatoonFrame> frames;
  std::string_view line;
  while (reader.next(line)) {
    if (csv::trim(line).empty() || line.front() == '#') continue;
    const auto fields = csv::split(line, schema.delimiter);
    const std::size_t lineno = reader.line_number();
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::MalformedInput,
                  at_line(lineno) + "expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    PlatoonFrame frame;
    frame.t = require_number(fields[time_col], lineno, "time") * schema.time_scale;
    for (std::size_t v = 0; v < ids.size(); ++v) {
      if (fields[pos_cols[v]].empty()) {
        std::ostringstream msg;
        msg << at_line(lineno) << "vehicle '" << ids[v] << "' missing at t=" << frame.t;
        throw Error(ErrorCode::RaggedFrame, msg.str());
      }
      frame.positions.push_back(require_number(fields[pos_cols[v]], lineno, "position") *
                                schema.position_scale);
      if (speeds) {
        frame.speeds.push_back(require_number(fields[*speed_cols[v]], lineno, "speed") *
                               schema.speed_scale);
      }
    }
    frames.push_back(std::move(frame));
  }
  std::stable_sort(frames.begin(), frames.end(),
                   [](const PlatoonFrame& a, const PlatoonFrame& b) { return a.t < b.t; });
  DatasetMetadata effective = meta;
  if (effective.vehicle_order.empty()) effective.vehicle_order = ids;
  return build_dataset(effective, std::move(ids), std::move(frames));
}

}  // namespace

void DatasetMetadata::merge(const DatasetMetadata& other) {
  if (other.dataset_id) dataset_id = other.dataset_id;
  if (other.driver_mode) driver_mode = other.driver_mode;
  if (!other.vehicle_order.empty()) vehicle_order = other.vehicle_order;
  if (other.sample_hz) sample_hz = other.sample_hz;
}

DatasetMetadata parse_metadata(std::string_view text) {
  DatasetMetadata meta;
  csv::LineReader reader(text);
  std::string_view line;
  while (reader.next(line)) {
    line = csv::trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::string_view key, value;
    if (!split_key_value(line, key, value)) {
      throw Error(ErrorCode::MalformedInput, at_line(reader.line_number()) + "expected key=value");
    }
    apply_metadata_entry(meta, key, value);
  }
  return meta;
}

ColumnMapping parse_column_mapping(std::string_view text) {
  ColumnMapping m;
  csv::LineReader reader(text);
  std::string_view line;
  while (reader.next(line)) {
    line = csv::trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::string_view key, value;
    if (!split_key_value(line, key, value)) {
      throw Error(ErrorCode::MalformedInput, at_line(reader.line_number()) + "expected key=value");
    }
    auto number = [&] { return require_number(value, reader.line_number(), key); };
    if (key == "layout") {
      if (value == "long") {
        m.layout = TableLayout::Long;
      } else if (value == "wide") {
        m.layout = TableLayout::Wide;
      } else {
        throw Error(ErrorCode::MalformedInput, "unknown layout '" + std::string(value) + "'");
      }
    } else if (key == "delimiter") {
      m.delimiter = value == "tab" ? '\t' : (value.empty() ? ',' : value.front());
    } else if (key == "time") {
      m.time_column = value;
    } else if (key == "vehicle") {
      m.vehicle_column = value;
    } else if (key == "position") {
      m.position_column = value;
    } else if (key == "speed") {
      m.speed_column = value;
    } else if (key == "time_scale") {
      m.time_scale = number();
    } else if (key == "position_scale") {
      m.position_scale = number();
    } else if (key == "speed_scale") {
      m.speed_scale = number();
    } else if (key.starts_with("position.")) {
      m.wide_positions.emplace_back(key.substr(9), value);
    } else if (key.starts_with("speed.")) {
      m.wide_speeds.emplace_back(key.substr(6), value);
    } else {
      throw Error(ErrorCode::MalformedInput, "unknown schema key '" + std::string(key) + "'");
    }
  }
  return m;
}

TrajectoryDataset parse_trajectory_file(std::string_view bytes, const ColumnMapping& schema,
                                        const DatasetMetadata& sidecar,
                                        std::string_view fallback_id) {
  csv::LineReader reader(bytes);
  DatasetMetadata meta;
  std::string_view line;
  std::vector<std::string_view> header;
  while (reader.next(line)) {
    const auto trimmed = csv::trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      std::string_view key, value;
      if (split_key_value(trimmed.substr(1), key, value)) apply_metadata_entry(meta, key, value);
      continue;
    }
    header = csv::split(trimmed, schema.delimiter);
    break;
  }
  if (header.empty()) throw Error(ErrorCode::MissingColumn, "no header row");
  meta.merge(sidecar);
  if (!meta.dataset_id && !fallback_id.empty()) meta.dataset_id = std::string(fallback_id);
  return schema.layout == TableLayout::Long ? parse_long(reader, header, schema, meta)
                                            : parse_wide(reader, header, schema, meta);
}

void write_metadata(std::ostream& out, const TrajectoryDataset& ds) {
  out << "dataset_id=" << ds.dataset_id() << '\n';
  out << "driver_mode=" << to_string(ds.driver_mode()) << '\n';
  out << "vehicle_order=";
  for (std::size_t i = 0; i < ds.vehicle_ids().size(); ++i) {
    out << (i ? "," : "") << ds.vehicle_ids()[i];
  }
  out << '\n';
  out << "sample_hz=" << csv::format_double(1.0 / ds.sample_interval()) << '\n';
}

void write_trajectory_csv(std::ostream& out, const TrajectoryDataset& ds) {
  std::ostringstream meta;
  write_metadata(meta, ds);
  const std::string meta_text = meta.str();
  csv::LineReader reader(meta_text);
  std::string_view line;
  while (reader.next(line)) out << "# " << line << '\n';

  out << "time_s,vehicle_id,position_m";
  if (ds.has_speeds()) out << ",speed_mps";
  out << '\n';
  std::string buf;
  for (const auto& frame : ds.frames()) {
    const std::string t = csv::format_double(frame.t);
    for (std::size_t v = 0; v < ds.vehicle_count(); ++v) {
      buf.clear();
      buf += t;
      buf += ',';
      buf += ds.vehicle_ids()[v];
      buf += ',';
      buf += csv::format_double(frame.positions[v]);
      if (ds.has_speeds()) {
        buf += ',';
        buf += csv::format_double(frame.speeds[v]);
      }
      buf += '\n';
      out << buf;
    }
  }
}

std::optional<std::filesystem::path> find_sidecar(const std::filesystem::path& table) {
  namespace fs = std::filesystem;
  fs::path appended = table;
  appended += ".meta";
  if (fs::exists(appended)) return appended;
  fs::path replaced = table;
  replaced.replace_extension(".meta");
  if (fs::exists(replaced)) return replaced;
  return std::nullopt;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TrajectoryDataset load_trajectory(const std::filesystem::path& path, const ColumnMapping& schema) {
  DatasetMetadata sidecar;
  if (auto meta_path = find_sidecar(path)) sidecar = parse_metadata(read_file(*meta_path));
  return parse_trajectory_file(read_file(path), schema, sidecar, path.stem().string());
}

}  // namespace platoonfd
