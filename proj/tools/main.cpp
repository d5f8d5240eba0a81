#include <CLI11.hpp>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "platoonfd/report_io.hpp"

using namespace platoonfd;
using namespace platoonfd::cli;

int main(int argc, char** argv) {
  CLI::App app{"Fundamental diagrams from platoon trajectories"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "Flat key=value file; flags given on the command line take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  PipelineConfig cfg;
  std::string out = cfg.out.string();
  app.add_option("--input", cfg.inputs, "Input files")->check(CLI::ExistingFile);
  app.add_option("--schema", cfg.schema, "Column-mapping file for trajectory tables")->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--buffer", cfg.buffer, "Platoon length buffer [m]")->capture_default_str();
  app.add_option("--on-backward", cfg.on_backward, "Frame pairs with backward motion: abort or skip")
      ->check(CLI::IsMember({"abort", "skip"}))
      ->capture_default_str();
  app.add_option("--delta-k", cfg.delta_k, "Density bin width [veh/km]")->capture_default_str();
  app.add_option("--delta-v", cfg.delta_v, "Speed bin width [km/h]")->capture_default_str();
  app.add_option("--deltas", cfg.deltas, "Density bin widths for the sensitivity sweep")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--bounds", cfg.bounds, "Lower v_f,k_cr,k_jam then upper v_f,k_cr,k_jam")
      ->delimiter(',')
      ->expected(6)
      ->capture_default_str();
  app.add_option("--max-evaluations", cfg.max_evaluations, "Objective evaluations per local search")
      ->capture_default_str();
  app.add_option("--min-persistence", cfg.min_persistence, "Extremum persistence threshold [m/s]")
      ->capture_default_str();
  app.add_option("--stable-band", cfg.stable_band, "Speed band of a stable interval [m/s]")->capture_default_str();
  app.add_option("--min-stable-duration", cfg.min_stable_duration, "Shortest stable interval [s]")
      ->capture_default_str();
  app.add_flag("--smooth", cfg.smooth, "Smooth the speed profile before segmentation");
  app.add_option("--smoothing-window", cfg.smoothing_window, "Moving-average window [s]")->capture_default_str();
  app.add_option("--states", cfg.states, "States file drawn as scatter by plot")->check(CLI::ExistingFile);
  app.add_option("--params", cfg.params, "Parameter table overlaid by plot")->check(CLI::ExistingFile);
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();

  auto& s = cfg.synth;
  app.add_option("--s0", s.s0, "synth: standstill spacing [m]")->capture_default_str();
  app.add_option("--time-gap", s.time_gap, "synth: time gap [s]")->capture_default_str();
  app.add_option("--vehicles", s.vehicles, "synth: platoon size")->capture_default_str();
  app.add_option("--sample-hz", s.sample_hz, "synth: sampling rate [Hz]")->capture_default_str();
  app.add_option("--v-max", s.v_max_kmh, "synth: top speed [km/h]")->capture_default_str();
  app.add_option("--ramp", s.ramp_s, "synth: ramp duration [s]")->capture_default_str();
  app.add_option("--hold", s.hold_s, "synth: hold at top speed [s]")->capture_default_str();
  app.add_option("--dwell", s.dwell_s, "synth: standstill before and after [s]")->capture_default_str();
  app.add_option("--noise", s.noise_m, "synth: position noise standard deviation [m]")->capture_default_str();
  app.add_option("--dataset-id", s.dataset_id, "synth: dataset id")->capture_default_str();
  app.add_option("--driver-mode", s.driver_mode, "synth: driver mode")->capture_default_str();
  app.add_option("--follower", s.follower, "synth: follower model")
      ->check(CLI::IsMember({"quasi_static", "lag"}))
      ->capture_default_str();
  app.add_flag("!--no-speeds", s.emit_speeds, "synth: omit the speed column");

  const std::map<std::string, std::pair<std::string, std::function<void(const PipelineConfig&, RunLog&)>>>
      commands{
          {"estimate", {"Estimate traffic states from trajectory files", cmd_estimate}},
          {"aggregate", {"Bin states per driver mode", cmd_aggregate}},
          {"calibrate", {"Fit the triangular diagram to density-binned tables", cmd_calibrate}},
          {"sensitivity", {"Calibrate over several density bin widths", cmd_sensitivity}},
          {"segment", {"Split platoon runs into acceleration, deceleration and stable parts", cmd_segment}},
          {"plot", {"Render SVG plots of binned tables", cmd_plot}},
          {"synth", {"Write a synthetic platoon trajectory", cmd_synth}},
      };
  for (const auto& [name, command] : commands) app.add_subcommand(name, command.first)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  if (name != "synth" && cfg.inputs.empty()) {
    std::cerr << name << ": --input is required\n";
    return kExitUsage;
  }
  cfg.out = out;
  try {
    cfg.check();
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) {
    std::cerr << "cannot create '" << cfg.out.string() << "': " << ec.message() << '\n';
    return kExitFailure;
  }

  RunLog log(cfg.out / "run.log");
  log.info(std::string(kToolName) + " " + std::string(kToolVersion) + " " + name);
  for (const auto& [key, value] : cfg.entries(name)) log.info(key + "=" + value);
  try {
    commands.at(name).second(cfg, log);
  } catch (const Error& e) {
    log.error(name, e);
  } catch (const std::exception& e) {
    log.error(name + ": " + e.what());
  }
  log.info(log.exit_code() == kExitOk ? "done" : "finished with errors");
  return log.exit_code();
}
