#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <map>
#include <thread>

#include "platoonfd/aggregation.hpp"
#include "platoonfd/calibration.hpp"
#include "platoonfd/csv.hpp"
#include "platoonfd/estimator.hpp"
#include "platoonfd/report_io.hpp"
#include "platoonfd/segmentation.hpp"
#include "platoonfd/svg_plot.hpp"
#include "platoonfd/synthetic.hpp"
#include "platoonfd/trajectory_io.hpp"
#include "platoonfd/units.hpp"

namespace platoonfd::cli {
namespace {

namespace fs = std::filesystem;

// Messages from one input, replayed into the run log in input order so the
// log does not depend on thread scheduling.
class FileLog {
 public:
  void info(std::string m) { entries_.push_back({Level::Info, std::move(m), 0}); }
  void warn(std::string m) { entries_.push_back({Level::Warn, std::move(m), 0}); }
  void error(std::string m, int code) { entries_.push_back({Level::Error, std::move(m), code}); }

  void replay(RunLog& log) const {
    for (const auto& e : entries_) {
      switch (e.level) {
        case Level::Info: log.info(e.text); break;
        case Level::Warn: log.warn(e.text); break;
        case Level::Error: log.error(e.text, e.code); break;
      }
    }
  }

 private:
  enum class Level { Info, Warn, Error };
  struct Entry {
    Level level;
    std::string text;
    int code;
  };
  std::vector<Entry> entries_;
};

// Runs `task` on every input, several files at a time, and catches
// per-file failures.
void for_each_input(const std::vector<fs::path>& inputs, RunLog& log,
                    const std::function<void(const fs::path&, FileLog&)>& task) {
  std::vector<FileLog> logs(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      try {
        task(inputs[i], logs[i]);
      } catch (const Error& e) {
        logs[i].error(inputs[i].string() + ": " + e.what(), exit_code_for(e.code()));
      } catch (const std::exception& e) {
        logs[i].error(inputs[i].string() + ": " + e.what(), kExitFailure);
      }
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(inputs.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& l : logs) l.replay(log);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
  return out;
}

ColumnMapping load_schema(const PipelineConfig& cfg) {
  return cfg.schema.empty() ? ColumnMapping{} : parse_column_mapping(read_file(cfg.schema));
}

ConfigEntries with(ConfigEntries entries, std::initializer_list<std::pair<std::string, std::string>> extra) {
  entries.insert(entries.end(), extra.begin(), extra.end());
  return entries;
}

// Settings for an output derived from a single input file.
ConfigEntries entries_for(const PipelineConfig& cfg, std::string_view command, const fs::path& input) {
  auto entries = cfg.entries(command);
  for (auto& [key, value] : entries) {
    if (key == "input") value = input.string();
  }
  return entries;
}

// States from every input, split by driver mode. Unreadable files are
// logged and left out.
std::map<DriverMode, std::vector<TrafficState>> states_by_mode(const PipelineConfig& cfg, RunLog& log) {
  std::map<DriverMode, std::vector<TrafficState>> groups;
  for (const auto& path : cfg.inputs) {
    try {
      const auto states = read_states_csv(read_file(path));
      log.info(path.string() + ": " + std::to_string(states.size()) + " states");
      for (const auto& s : states) groups[s.driver_mode].push_back(s);
    } catch (const Error& e) {
      log.error(path.string(), e);
    }
  }
  return groups;
}

std::string summarize_issues(const std::vector<ValidationIssue>& issues) {
  return std::to_string(issues.size()) + " (first at frame " + std::to_string(issues.front().frame_index) +
         ": " + issues.front().rule + ")";
}

SeriesEstimate estimate_dataset(const TrajectoryDataset& ds, const PipelineConfig& cfg,
                                const fs::path& path, FileLog& flog) {
  const auto report = validate_platoon(ds);
  if (!report.warnings.empty()) flog.warn(path.string() + ": validation warnings " + summarize_issues(report.warnings));
  if (!report.accepted()) {
    throw Error(ErrorCode::InvalidArgument, "validation errors " + summarize_issues(report.errors));
  }
  auto est = estimate_series(ds, cfg.estimator());
  if (!est.skipped.empty()) {
    flog.warn(path.string() + ": skipped " + std::to_string(est.skipped.size()) + " frame pairs (first at frame " +
              std::to_string(est.skipped.front().frame_index) + ": " + est.skipped.front().reason + ")");
  }
  return est;
}

// Pooled commands read inputs in sorted order so results and headers do not
// depend on argument order.
PipelineConfig with_sorted_inputs(PipelineConfig cfg) {
  std::sort(cfg.inputs.begin(), cfg.inputs.end());
  return cfg;
}

}  // namespace

void cmd_estimate(const PipelineConfig& cfg, RunLog& log) {
  const auto schema = load_schema(cfg);
  for_each_input(cfg.inputs, log, [&](const fs::path& path, FileLog& flog) {
    const auto ds = load_trajectory(path, schema);
    const auto est = estimate_dataset(ds, cfg, path, flog);
    const auto target = cfg.out / (path.stem().string() + ".states.csv");
    auto out = open_output(target);
    write_states_csv(out, est.states, with(entries_for(cfg, "estimate", path), {{"dataset_id", ds.dataset_id()}}));
    flog.info(path.string() + ": " + std::to_string(est.states.size()) + " states -> " + target.string());
  });
}

void cmd_aggregate(const PipelineConfig& unsorted, RunLog& log) {
  const auto cfg = with_sorted_inputs(unsorted);
  const auto groups = states_by_mode(cfg, log);
  if (groups.empty()) {
    log.error("no states to aggregate", kExitEmptyInput);
    return;
  }
  for (const auto& [mode, states] : groups) {
    const std::string name(to_string(mode));
    try {
      const auto density = aggregate_by_density(states, cfg.delta_k);
      const auto speed = aggregate_by_speed(states, cfg.delta_v);
      const std::pair<const char*, const BinnedSeries*> planes[] = {
          {"qk", &density}, {"vk", &density}, {"vq", &speed}};
      for (const auto& [plane, series] : planes) {
        auto out = open_output(cfg.out / ("binned_" + name + "_" + plane + ".csv"));
        write_binned_csv(out, *series, with(cfg.entries("aggregate"), {{"plane", plane}}));
      }
      log.info(name + ": " + std::to_string(states.size()) + " states in " + std::to_string(density.points.size()) +
               " density bins and " + std::to_string(speed.points.size()) + " speed bins");
    } catch (const Error& e) {
      log.error(name, e);
    }
  }
}

void cmd_calibrate(const PipelineConfig& cfg, RunLog& log) {
  for_each_input(cfg.inputs, log, [&](const fs::path& path, FileLog& flog) {
    const auto series = read_binned_csv(read_file(path));
    if (series.grid.axis != BinAxis::Density) {
      throw Error(ErrorCode::InvalidArgument, "calibration needs a density-binned table");
    }
    SensitivityRow row;
    row.delta = series.grid.delta;
    row.driver_mode = series.driver_mode;
    row.bins = series.points.size();
    row.result = calibrate({series, cfg.calibration_bounds(), cfg.optimizer()});
    const auto target = cfg.out / (path.stem().string() + ".params.csv");
    auto out = open_output(target);
    write_sensitivity_csv(out, std::span<const SensitivityRow>(&row, 1), entries_for(cfg, "calibrate", path));
    const auto& p = row.result->params;
    flog.info(path.string() + ": v_f=" + csv::format_double(p.v_f()) + " k_cr=" + csv::format_double(p.k_cr()) +
              " k_jam=" + csv::format_double(p.k_jam()) + " -> " + target.string());
    if (!row.result->converged) flog.warn(path.string() + ": calibration did not converge");
  });
}

void cmd_sensitivity(const PipelineConfig& unsorted, RunLog& log) {
  const auto cfg = with_sorted_inputs(unsorted);
  const auto groups = states_by_mode(cfg, log);
  if (groups.empty()) {
    log.error("no states for the sensitivity sweep", kExitEmptyInput);
    return;
  }
  for (const auto& [mode, states] : groups) {
    const std::string name(to_string(mode));
    try {
      const auto rows = sensitivity_sweep(states, cfg.deltas, cfg.calibration_bounds(), cfg.optimizer());
      auto out = open_output(cfg.out / ("sensitivity_" + name + ".csv"));
      write_sensitivity_csv(out, rows, cfg.entries("sensitivity"));
      for (const auto& row : rows) {
        const std::string where = name + " delta=" + csv::format_double(row.delta);
        if (!row.error.empty()) {
          log.error(where + ": " + row.error);
        } else if (!row.result->converged) {
          log.warn(where + ": calibration did not converge");
        }
      }
      log.info(name + ": " + std::to_string(rows.size()) + " sensitivity rows");
    } catch (const Error& e) {
      log.error(name, e);
    }
  }
}

void cmd_segment(const PipelineConfig& cfg, RunLog& log) {
  const auto schema = load_schema(cfg);
  for_each_input(cfg.inputs, log, [&](const fs::path& path, FileLog& flog) {
    const auto ds = load_trajectory(path, schema);
    const auto est = estimate_dataset(ds, cfg, path, flog);
    const auto segments = segment_platoon(ds, cfg.segmentation());
    const auto entries = with(entries_for(cfg, "segment", path), {{"dataset_id", ds.dataset_id()}});
    const std::string stem = path.stem().string();

    std::vector<double> times;
    times.reserve(ds.frame_count());
    for (const auto& f : ds.frames()) times.push_back(f.t);
    {
      auto out = open_output(cfg.out / (stem + ".segments.csv"));
      write_segments_csv(out, segments, times, entries);
    }
    const auto labeled = states_by_segment(est.states, segments);
    {
      auto out = open_output(cfg.out / (stem + ".labeled_states.csv"));
      write_labeled_states_csv(out, labeled, entries);
    }
    for (const auto label : {SegmentLabel::Acceleration, SegmentLabel::Deceleration, SegmentLabel::Stable}) {
      std::vector<TrafficState> subset;
      for (const auto& l : labeled) {
        if (l.label == label) subset.push_back(l.state);
      }
      if (subset.empty()) continue;
      const std::string name(to_string(label));
      auto out = open_output(cfg.out / (stem + ".binned_" + name + ".csv"));
      write_binned_csv(out, aggregate_by_density(subset, cfg.delta_k), with(entries, {{"segment_label", name}}));
    }
    flog.info(path.string() + ": " + std::to_string(segments.size()) + " segments");
  });
}

void cmd_plot(const PipelineConfig& cfg, RunLog& log) {
  std::vector<TrafficState> scatter;
  std::optional<TfdParams> params;
  try {
    if (!cfg.states.empty()) scatter = read_states_csv(read_file(cfg.states));
  } catch (const Error& e) {
    log.error(cfg.states, e);
  }
  try {
    if (!cfg.params.empty()) params = read_params_csv(read_file(cfg.params));
  } catch (const Error& e) {
    log.error(cfg.params, e);
  }
  for_each_input(cfg.inputs, log, [&](const fs::path& path, FileLog& flog) {
    const auto series = read_binned_csv(read_file(path));
    if (series.points.empty()) throw Error(ErrorCode::EmptyInput, "no binned points");
    std::vector<TrafficState> own;
    for (const auto& s : scatter) {
      if (!series.driver_mode || s.driver_mode == *series.driver_mode) own.push_back(s);
    }
    const std::vector<Plane> planes = series.grid.axis == BinAxis::Density
                                          ? std::vector<Plane>{Plane::FlowDensity, Plane::SpeedDensity}
                                          : std::vector<Plane>{Plane::SpeedFlow};
    for (const auto plane : planes) {
      PlotInput input;
      input.plane = plane;
      input.scatter = own;
      input.binned = &series;
      input.params = params;
      input.title = path.stem().string();
      const auto target = cfg.out / (path.stem().string() + "." + std::string(to_string(plane)) + ".svg");
      auto out = open_output(target);
      out << render_svg(input);
      flog.info(path.string() + ": -> " + target.string());
    }
  });
}

void cmd_synth(const PipelineConfig& cfg, RunLog& log) {
  const auto synth = cfg.synthetic();
  const auto ds = generate_platoon(cfg.drive_cycle(), cfg.headway_law(), synth);
  const auto target = cfg.out / (synth.dataset_id + ".csv");
  auto out = open_output(target);
  write_comment_header(out, cfg.entries("synth"));
  write_trajectory_csv(out, ds);
  auto sidecar = open_output(cfg.out / (synth.dataset_id + ".meta"));
  write_metadata(sidecar, ds);
  const auto fd = analytic_fd(cfg.headway_law(), units::kmh_to_mps(cfg.synth.v_max_kmh));
  log.info(std::to_string(ds.frame_count()) + " frames of " + std::to_string(ds.vehicle_count()) + " vehicles -> " +
           target.string());
  log.info("spacing-law diagram: v_f=" + csv::format_double(fd.v_f()) + " k_cr=" + csv::format_double(fd.k_cr()) +
           " k_jam=" + csv::format_double(fd.k_jam()) + " w=" + csv::format_double(fd.w()));
}

}  // namespace platoonfd::cli
