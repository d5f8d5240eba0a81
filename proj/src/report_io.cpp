#include "platoonfd/report_io.hpp"

#include <cmath>
#include <optional>
#include <ostream>

#include "platoonfd/csv.hpp"
#include "platoonfd/error.hpp"
#include "platoonfd/units.hpp"

namespace platoonfd {
namespace {

using csv::format_double;

void write_state_fields(std::ostream& out, const TrafficState& s) {
  out << format_double(s.t) << ',' << format_double(units::per_m_to_per_km(s.k)) << ','
      << format_double(units::per_s_to_per_h(s.q)) << ',' << format_double(units::mps_to_kmh(s.v))
      << ',' << s.dataset_id << ',' << to_string(s.driver_mode);
}

constexpr std::string_view kStatesHeader = "t_s,k_veh_per_km,q_veh_per_h,v_kmh,dataset_id,driver_mode";

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::size_t column(const std::vector<std::string_view>& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorCode::MissingColumn, "column '" + std::string(name) + "' not found");
}

double number(std::string_view field, std::size_t line) {
  auto v = csv::parse_double(field);
  if (!v) {
    throw Error(ErrorCode::MalformedInput, at_line(line) + "bad number '" + std::string(field) + "'");
  }
  return *v;
}

// Calls `row(fields, line)` for each data line after the header, and
// `comment(text)` for each '#' line with the marker stripped.
template <typename CommentFn, typename RowFn>
std::vector<std::string_view> scan_table(std::string_view text, CommentFn comment, RowFn row) {
  csv::LineReader reader(text);
  std::string_view line;
  std::vector<std::string_view> header;
  while (reader.next(line)) {
    const auto trimmed = csv::trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      comment(csv::trim(trimmed.substr(1)));
      continue;
    }
    if (header.empty()) {
      header = csv::split(trimmed);
      continue;
    }
    const auto fields = csv::split(trimmed);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::MalformedInput, at_line(reader.line_number()) + "expected " +
                                                 std::to_string(header.size()) + " fields");
    }
    row(header, fields, reader.line_number());
  }
  if (header.empty()) throw Error(ErrorCode::MissingColumn, "no header row");
  return header;
}

}  // namespace

std::string_view to_string(BinAxis axis) {
  return axis == BinAxis::Density ? "density" : "speed";
}

void write_comment_header(std::ostream& out, const ConfigEntries& config) {
  out << "# " << kToolName << ' ' << kToolVersion << '\n';
  for (const auto& [key, value] : config) out << "# " << key << '=' << value << '\n';
}

void write_states_csv(std::ostream& out, std::span<const TrafficState> states,
                      const ConfigEntries& config) {
  write_comment_header(out, config);
  out << kStatesHeader << '\n';
  for (const auto& s : states) {
    write_state_fields(out, s);
    out << '\n';
  }
}

void write_labeled_states_csv(std::ostream& out, std::span<const LabeledState> states,
                              const ConfigEntries& config) {
  write_comment_header(out, config);
  out << kStatesHeader << ",segment_label\n";
  for (const auto& s : states) {
    write_state_fields(out, s.state);
    out << ',' << to_string(s.label) << '\n';
  }
}

std::vector<TrafficState> read_states_csv(std::string_view text) {
  std::vector<TrafficState> states;
  struct Cols {
    std::size_t t, k, q, v, id, mode;
  };
  std::optional<Cols> cols;
  std::size_t index = 0;
  scan_table(
      text, [](std::string_view) {},
      [&](const std::vector<std::string_view>& header, const std::vector<std::string_view>& f,
          std::size_t line) {
        if (!cols) {
          cols = Cols{column(header, "t_s"),        column(header, "k_veh_per_km"),
                      column(header, "q_veh_per_h"), column(header, "v_kmh"),
                      column(header, "dataset_id"),  column(header, "driver_mode")};
        }
        TrafficState s;
        s.t = number(f[cols->t], line);
        s.k = units::per_km_to_per_m(number(f[cols->k], line));
        s.q = units::per_h_to_per_s(number(f[cols->q], line));
        s.v = units::kmh_to_mps(number(f[cols->v], line));
        s.dataset_id = std::string(f[cols->id]);
        s.driver_mode = parse_driver_mode(f[cols->mode]);
        s.frame_index = index++;
        states.push_back(std::move(s));
      });
  return states;
}

void write_binned_csv(std::ostream& out, const BinnedSeries& series, const ConfigEntries& config) {
  write_comment_header(out, config);
  out << "# delta=" << format_double(series.grid.delta) << '\n';
  out << "# axis=" << to_string(series.grid.axis) << '\n';
  out << "# driver_mode=" << (series.driver_mode ? to_string(*series.driver_mode) : "none") << '\n';
  out << "bin_index,k_mean,v_mean,q_mean,count\n";
  for (const auto& p : series.points) {
    out << p.bin << ',' << format_double(p.k_mean) << ',' << format_double(p.v_mean) << ','
        << format_double(p.q_mean) << ',' << p.count << '\n';
  }
}

BinnedSeries read_binned_csv(std::string_view text) {
  BinnedSeries series;
  scan_table(
      text,
      [&](std::string_view c) {
        const auto eq = c.find('=');
        if (eq == std::string_view::npos) return;
        const auto key = csv::trim(c.substr(0, eq));
        const auto value = csv::trim(c.substr(eq + 1));
        if (key == "delta") {
          if (auto d = csv::parse_double(value)) series.grid.delta = *d;
        } else if (key == "axis") {
          series.grid.axis = value == "speed" ? BinAxis::Speed : BinAxis::Density;
        } else if (key == "driver_mode" && value != "none") {
          series.driver_mode = parse_driver_mode(value);
        }
      },
      [&](const std::vector<std::string_view>& header, const std::vector<std::string_view>& f,
          std::size_t line) {
        BinnedPoint p;
        p.bin = static_cast<std::size_t>(number(f[column(header, "bin_index")], line));
        p.k_mean = number(f[column(header, "k_mean")], line);
        p.v_mean = number(f[column(header, "v_mean")], line);
        p.q_mean = number(f[column(header, "q_mean")], line);
        p.count = static_cast<std::size_t>(number(f[column(header, "count")], line));
        series.points.push_back(p);
      });
  series.grid.bins = series.points.empty() ? 0 : series.points.back().bin + 1;
  return series;
}

void write_sensitivity_csv(std::ostream& out, std::span<const SensitivityRow> rows,
                           const ConfigEntries& config) {
  write_comment_header(out, config);
  out << "delta,driver_mode,v_f_kmh,k_cr_veh_km,k_jam_veh_km,w_kmh,objective,converged\n";
  for (const auto& row : rows) {
    if (!row.error.empty()) out << "# row delta=" << format_double(row.delta) << " failed: " << row.error << '\n';
    out << format_double(row.delta) << ','
        << (row.driver_mode ? to_string(*row.driver_mode) : "none") << ',';
    if (row.result) {
      const auto& p = row.result->params;
      out << format_double(p.v_f()) << ',' << format_double(p.k_cr()) << ','
          << format_double(p.k_jam()) << ',' << format_double(p.w()) << ','
          << format_double(row.result->objective_value) << ','
          << (row.result->converged ? "true" : "false") << '\n';
    } else {
      out << "nan,nan,nan,nan,nan,false\n";
    }
  }
}

TfdParams read_params_csv(std::string_view text) {
  std::optional<TfdParams> params;
  scan_table(
      text, [](std::string_view) {},
      [&](const std::vector<std::string_view>& header, const std::vector<std::string_view>& f,
          std::size_t line) {
        if (params) return;
        const auto vf = csv::parse_double(f[column(header, "v_f_kmh")]);
        const auto kc = csv::parse_double(f[column(header, "k_cr_veh_km")]);
        const auto kj = csv::parse_double(f[column(header, "k_jam_veh_km")]);
        if (!vf || !kc || !kj) {
          throw Error(ErrorCode::MalformedInput, at_line(line) + "bad parameter row");
        }
        if (std::isnan(*vf)) return;
        params.emplace(*vf, *kc, *kj);
      });
  if (!params) throw Error(ErrorCode::EmptyInput, "no calibrated parameter row");
  return *params;
}

void write_segments_csv(std::ostream& out, std::span<const Segment> segments,
                        std::span<const double> frame_times, const ConfigEntries& config) {
  write_comment_header(out, config);
  out << "start_s,end_s,label\n";
  for (const auto& s : segments) {
    out << format_double(frame_times[s.start_index]) << ','
        << format_double(frame_times[s.end_index]) << ',' << to_string(s.label) << '\n';
  }
}

}  // namespace platoonfd
