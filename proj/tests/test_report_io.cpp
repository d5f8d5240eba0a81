#include <sstream>

#include "platoonfd/report_io.hpp"
#include "platoonfd/units.hpp"
#include "support.hpp"

using namespace platoonfd;
using testsupport::error_code_of;
using testsupport::rel_close;

namespace {

std::vector<TrafficState> random_states(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> k(0.001, 0.15), v(0.0, 40.0);
  std::vector<TrafficState> states;
  for (std::size_t i = 0; i < n; ++i) {
    TrafficState s;
    s.t = 0.1 * static_cast<double>(i);
    s.k = k(rng);
    s.v = v(rng);
    s.q = s.k * s.v;
    s.dataset_id = "run7";
    s.driver_mode = DriverMode::AccMax;
    s.frame_index = i;
    states.push_back(s);
  }
  return states;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("comment header records tool version and settings") {
  std::ostringstream out;
  write_comment_header(out, {{"buffer", "3"}, {"delta", "0.3"}});
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "# platoonfd 0.1.0");
  CHECK(lines[1] == "# buffer=3");
  CHECK(lines[2] == "# delta=0.3");
}

TEST_CASE("states table round trip") {
  const auto states = random_states(200, 5);
  std::ostringstream out;
  write_states_csv(out, states, {{"buffer", "3"}});
  const auto text = out.str();
  CHECK(text.find("t_s,k_veh_per_km,q_veh_per_h,v_kmh,dataset_id,driver_mode") != std::string::npos);

  const auto back = read_states_csv(text);
  REQUIRE(back.size() == states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    CHECK(back[i].t == states[i].t);
    CHECK(rel_close(back[i].k, states[i].k, 1e-14));
    CHECK(rel_close(back[i].q, states[i].q, 1e-14));
    CHECK(rel_close(back[i].v, states[i].v, 1e-14));
    CHECK(back[i].dataset_id == "run7");
    CHECK(back[i].driver_mode == DriverMode::AccMax);
    CHECK(back[i].frame_index == i);
  }
}

TEST_CASE("states are written in reporting units") {
  TrafficState s;
  s.t = 1.5;
  s.k = 0.05;
  s.v = 20.0;
  s.q = 1.0;
  s.dataset_id = "d";
  s.driver_mode = DriverMode::Human;
  std::ostringstream out;
  write_states_csv(out, std::vector<TrafficState>{s});
  const auto lines = lines_of(out.str());
  CHECK(lines.back() == "1.5,50,3600,72,d,human");
}

TEST_CASE("labeled states carry the segment label and read back") {
  const auto states = random_states(4, 6);
  std::vector<LabeledState> labeled;
  const SegmentLabel labels[] = {SegmentLabel::Acceleration, SegmentLabel::Stable, SegmentLabel::Stable,
                                 SegmentLabel::Deceleration};
  for (std::size_t i = 0; i < states.size(); ++i) labeled.push_back({states[i], labels[i]});
  std::ostringstream out;
  write_labeled_states_csv(out, labeled);
  const auto lines = lines_of(out.str());
  CHECK(lines[1].ends_with(",segment_label"));
  CHECK(lines[2].ends_with(",acceleration"));
  CHECK(lines[5].ends_with(",deceleration"));
  CHECK(read_states_csv(out.str()).size() == 4);
}

TEST_CASE("states table errors") {
  CHECK(error_code_of([] { (void)read_states_csv("t_s,k_veh_per_km\n1,2\n"); }) == ErrorCode::MissingColumn);
  CHECK(error_code_of([] { (void)read_states_csv("# only comments\n"); }) == ErrorCode::MissingColumn);
  const std::string header = "t_s,k_veh_per_km,q_veh_per_h,v_kmh,dataset_id,driver_mode\n";
  CHECK(error_code_of([&] { (void)read_states_csv(header + "1,x,3,4,d,human\n"); }) ==
        ErrorCode::MalformedInput);
  CHECK(error_code_of([&] { (void)read_states_csv(header + "1,2,3\n"); }) == ErrorCode::MalformedInput);
  CHECK(error_code_of([&] { (void)read_states_csv(header + "1,2,3,4,d,robot\n"); }) ==
        ErrorCode::UnknownDriverMode);
}

TEST_CASE("binned table round trip") {
  BinnedSeries s;
  s.grid = {0.3, BinAxis::Density, 0};
  s.driver_mode = DriverMode::AccMin;
  s.points = {{2, 0.75, 98.1234567890123, 73.59259259, 4}, {7, 2.2, 95.5, 210.1, 11}, {40, 12.1, 60.25, 729.025, 3}};
  s.grid.bins = 41;
  std::ostringstream out;
  write_binned_csv(out, s, {{"input", "a.csv"}});
  const auto back = read_binned_csv(out.str());
  CHECK(back.grid.delta == 0.3);
  CHECK(back.grid.axis == BinAxis::Density);
  CHECK(back.grid.bins == 41);
  CHECK(back.driver_mode == DriverMode::AccMin);
  REQUIRE(back.points.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.points[i].bin == s.points[i].bin);
    CHECK(back.points[i].k_mean == s.points[i].k_mean);
    CHECK(back.points[i].v_mean == s.points[i].v_mean);
    CHECK(back.points[i].q_mean == s.points[i].q_mean);
    CHECK(back.points[i].count == s.points[i].count);
  }

  s.grid.axis = BinAxis::Speed;
  s.driver_mode.reset();
  std::ostringstream speed;
  write_binned_csv(speed, s);
  const auto speed_back = read_binned_csv(speed.str());
  CHECK(speed_back.grid.axis == BinAxis::Speed);
  CHECK_FALSE(speed_back.driver_mode);
}

TEST_CASE("sensitivity table and parameter read-back") {
  std::vector<SensitivityRow> rows(3);
  rows[0].delta = 0.3;
  rows[0].driver_mode = DriverMode::AccMin;
  rows[0].bins = 300;
  rows[0].result = CalibrationResult{TfdParams(126.0, 21.3, 104.4), 0.125, 900, true};
  rows[1].delta = 0.6;
  rows[1].error = "EmptyInput: nothing";
  rows[2].delta = 1.0;
  rows[2].result = CalibrationResult{TfdParams(110.1, 12.9, 101.0), 0.5, 800, false};

  std::ostringstream out;
  write_sensitivity_csv(out, rows);
  const auto text = out.str();
  const auto lines = lines_of(text);
  CHECK(lines[1] == "delta,driver_mode,v_f_kmh,k_cr_veh_km,k_jam_veh_km,w_kmh,objective,converged");
  CHECK(lines[2].starts_with("0.3,acc_min,126,21.3,104.4,"));
  CHECK(lines[2].ends_with(",0.125,true"));
  CHECK(lines[3].starts_with("# row delta=0.6 failed"));
  CHECK(lines[4] == "0.6,none,nan,nan,nan,nan,nan,false");
  CHECK(lines[5].ends_with(",false"));

  const auto p = read_params_csv(text);
  CHECK(p.v_f() == 126.0);
  CHECK(p.k_cr() == 21.3);
  CHECK(p.k_jam() == 104.4);

  // A failed first row is passed over.
  std::ostringstream tail;
  write_sensitivity_csv(tail, std::span<const SensitivityRow>(rows).subspan(1));
  CHECK(read_params_csv(tail.str()).v_f() == 110.1);

  std::ostringstream failed_only;
  write_sensitivity_csv(failed_only, std::span<const SensitivityRow>(rows).subspan(1, 1));
  CHECK(error_code_of([&] { (void)read_params_csv(failed_only.str()); }) == ErrorCode::EmptyInput);
}

TEST_CASE("segments table uses frame times") {
  const std::vector<double> times{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  const std::vector<Segment> segments{{0, 2, SegmentLabel::Acceleration}, {2, 5, SegmentLabel::Stable}};
  std::ostringstream out;
  write_segments_csv(out, segments, times, {{"stable_band", "0.5"}});
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 5);
  CHECK(lines[1] == "# stable_band=0.5");
  CHECK(lines[2] == "start_s,end_s,label");
  CHECK(lines[3] == "0,0.2,acceleration");
  CHECK(lines[4] == "0.2,0.5,stable");
}

TEST_CASE("axis names") {
  CHECK(to_string(BinAxis::Density) == "density");
  CHECK(to_string(BinAxis::Speed) == "speed");
}
