#include <sstream>

#include "platoonfd/trajectory.hpp"
#include "platoonfd/trajectory_io.hpp"
#include "support.hpp"

using namespace platoonfd;
using testsupport::error_code_of;
using testsupport::frame;

namespace {

const char* kMeta = "# dataset_id=run1\n# driver_mode=acc_min\n";

std::string two_vehicles(const std::string& rows) {
  return std::string(kMeta) + "time_s,vehicle_id,position_m\n" + rows;
}

}  // namespace

TEST_CASE("minimal long-format table") {
  const auto ds = parse_trajectory_file(two_vehicles(
      "0.0,a,100\n0.0,b,80\n0.1,a,102\n0.1,b,82\n0.2,a,104\n0.2,b,84\n"));
  CHECK(ds.dataset_id() == "run1");
  CHECK(ds.driver_mode() == DriverMode::AccMin);
  CHECK(ds.frame_count() == 3);
  CHECK(ds.sample_interval() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(ds.vehicle_ids() == std::vector<std::string>{"a", "b"});
  CHECK(ds.frames()[2].positions == std::vector<double>{104, 84});
  CHECK_FALSE(ds.has_speeds());
}

TEST_CASE("vehicle missing at one timestamp is a ragged frame") {
  const auto code = error_code_of([] {
    (void)parse_trajectory_file(two_vehicles("0.0,a,100\n0.0,b,80\n0.1,a,102\n0.1,b,82\n0.2,a,104\n"));
  });
  CHECK(code == ErrorCode::RaggedFrame);
}

TEST_CASE("irregular timestamps are rejected") {
  const auto code = error_code_of([] {
    (void)parse_trajectory_file(
        two_vehicles("0.0,a,100\n0.0,b,80\n0.1,a,102\n0.1,b,82\n0.25,a,104\n0.25,b,84\n"));
  });
  CHECK(code == ErrorCode::NonUniformSampling);
}

TEST_CASE("jitter below a millisecond is accepted") {
  const auto ds = parse_trajectory_file(
      two_vehicles("0.0,a,100\n0.0,b,80\n0.1004,a,102\n0.1004,b,82\n0.2,a,104\n0.2,b,84\n"));
  CHECK(ds.frame_count() == 3);
  CHECK(ds.gaps().empty());
}

TEST_CASE("a whole-interval gap is recorded, not rejected") {
  const auto ds = parse_trajectory_file(
      two_vehicles("0.0,a,100\n0.0,b,80\n0.1,a,102\n0.1,b,82\n0.3,a,106\n0.3,b,86\n0.4,a,108\n0.4,b,88\n"));
  CHECK(ds.gaps() == std::vector<std::size_t>{1});
  CHECK(ds.is_gap(1));
  CHECK_FALSE(ds.is_gap(0));
}

TEST_CASE("missing columns and unknown driver modes") {
  CHECK(error_code_of([] {
          (void)parse_trajectory_file(std::string(kMeta) + "time_s,vehicle_id\n0,a\n");
        }) == ErrorCode::MissingColumn);
  CHECK(error_code_of([] {
          (void)parse_trajectory_file(
              "# dataset_id=x\n# driver_mode=autopilot\ntime_s,vehicle_id,position_m\n0,a,1\n");
        }) == ErrorCode::UnknownDriverMode);
}

TEST_CASE("malformed numbers carry the line number") {
  try {
    (void)parse_trajectory_file(two_vehicles("0.0,a,100\n0.0,b,eighty\n"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedInput);
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
}

TEST_CASE("sidecar overrides in-file metadata and fixes the vehicle order") {
  DatasetMetadata sidecar;
  sidecar.dataset_id = "from_sidecar";
  sidecar.driver_mode = DriverMode::Human;
  sidecar.vehicle_order = {"b", "a"};
  const auto ds = parse_trajectory_file(two_vehicles("0,a,80\n0,b,100\n0.1,a,81\n0.1,b,101\n"), {}, sidecar);
  CHECK(ds.dataset_id() == "from_sidecar");
  CHECK(ds.driver_mode() == DriverMode::Human);
  CHECK(ds.vehicle_ids() == std::vector<std::string>{"b", "a"});
  CHECK(ds.frames()[0].positions == std::vector<double>{100, 80});
}

TEST_CASE("metadata text parser") {
  const auto meta = parse_metadata("dataset_id = abc\ndriver_mode: ACC-max\nvehicle_order = x, y ,z\nsample_hz=25\n");
  CHECK(*meta.dataset_id == "abc");
  CHECK(*meta.driver_mode == DriverMode::AccMax);
  CHECK(meta.vehicle_order == std::vector<std::string>{"x", "y", "z"});
  CHECK(*meta.sample_hz == 25.0);
}

TEST_CASE("wide layout with unit scales") {
  const auto schema = parse_column_mapping(
      "layout = wide\ntime = Time\nposition.lead = PosLead\nposition.follow = PosFollow\n"
      "speed.lead = SpeedLead\nspeed.follow = SpeedFollow\nposition_scale = 1000\nspeed_scale = 0.2777777777777778\n");
  const std::string text = std::string(kMeta) +
                           "Time,PosLead,PosFollow,SpeedLead,SpeedFollow\n"
                           "0,0.100,0.080,36,36\n0.1,0.101,0.081,36,36\n";
  const auto ds = parse_trajectory_file(text, schema);
  CHECK(ds.vehicle_ids() == std::vector<std::string>{"lead", "follow"});
  CHECK(ds.frames()[1].positions[0] == doctest::Approx(101.0));
  CHECK(ds.frames()[1].positions[1] == doctest::Approx(81.0));
  CHECK(ds.frames()[0].speeds[0] == doctest::Approx(10.0));
}

TEST_CASE("round trip is bit-equal") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::vector<PlatoonFrame> frames;
  for (int f = 0; f < 50; ++f) {
    PlatoonFrame fr;
    fr.t = f * 0.1;
    for (int v = 0; v < 4; ++v) {
      fr.positions.push_back(1000.0 - 31.7 * v + 2.3 * f + jitter(rng));
      fr.speeds.push_back(20.0 + jitter(rng));
    }
    frames.push_back(std::move(fr));
  }
  const TrajectoryDataset original("roundtrip", DriverMode::Cacc, 0.1, {"l", "f1", "f2", "f3"}, frames);
  std::ostringstream out;
  write_trajectory_csv(out, original);
  const auto parsed = parse_trajectory_file(out.str());
  CHECK(parsed.dataset_id() == original.dataset_id());
  CHECK(parsed.driver_mode() == original.driver_mode());
  CHECK(parsed.vehicle_ids() == original.vehicle_ids());
  REQUIRE(parsed.frame_count() == original.frame_count());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CHECK(parsed.frames()[i].t == original.frames()[i].t);
    CHECK(parsed.frames()[i].positions == original.frames()[i].positions);
    CHECK(parsed.frames()[i].speeds == original.frames()[i].speeds);
  }
}

TEST_CASE("dataset constructor invariants") {
  const auto ids = testsupport::vehicle_ids(2);
  CHECK(error_code_of([&] {
          (void)TrajectoryDataset("x", DriverMode::Human, 0.1, ids, {frame(0, {2, 1}), frame(0.1, {3})});
        }) == ErrorCode::RaggedFrame);
  CHECK(error_code_of([&] {
          (void)TrajectoryDataset("x", DriverMode::Human, 0.1, ids, {frame(0, {2, 1}), frame(0.1, {NAN, 1})});
        }) == ErrorCode::MalformedInput);
  CHECK(error_code_of([&] {
          (void)TrajectoryDataset("x", DriverMode::Human, 0.1, ids, {frame(0, {2, 1}), frame(0.15, {3, 2})});
        }) == ErrorCode::NonUniformSampling);
  CHECK(error_code_of([&] {
          (void)TrajectoryDataset("x", DriverMode::Human, 0.1, ids, {frame(0.1, {2, 1}), frame(0.0, {3, 2})});
        }) == ErrorCode::NonUniformSampling);
}

TEST_CASE("validation: ordering errors and speed warnings") {
  const auto ids = testsupport::vehicle_ids(2);
  SUBCASE("well-formed") {
    const TrajectoryDataset ds("x", DriverMode::Human, 0.1, ids,
                               {frame(0, {100, 80}), frame(0.1, {102, 82}), frame(0.2, {104, 84})});
    const auto report = validate_platoon(ds);
    CHECK(report.accepted());
    CHECK(report.warnings.empty());
  }
  SUBCASE("follower ahead of leader") {
    const TrajectoryDataset ds("x", DriverMode::Human, 0.1, ids,
                               {frame(0, {100, 80}), frame(0.1, {102, 103}), frame(0.2, {104, 84})});
    const auto report = validate_platoon(ds);
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].frame_index == 1);
    CHECK_FALSE(report.accepted());
  }
  SUBCASE("recorded speed disagrees with positions") {
    std::vector<PlatoonFrame> frames{frame(0, {100, 80}), frame(0.1, {101, 81}), frame(0.2, {102, 82})};
    for (auto& f : frames) f.speeds = {10, 10};
    frames[1].speeds = {20, 10};
    const TrajectoryDataset ds("x", DriverMode::Human, 0.1, ids, frames);
    const auto report = validate_platoon(ds, {0.5});
    CHECK(report.accepted());
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].frame_index == 1);
  }
}

TEST_CASE("frame pairs") {
  const auto ids = testsupport::vehicle_ids(2);
  const TrajectoryDataset three("x", DriverMode::Human, 0.1, ids,
                                {frame(0, {2, 1}), frame(0.1, {3, 2}), frame(0.2, {4, 3})});
  const TrajectoryDataset two("x", DriverMode::Human, 0.1, ids, {frame(0, {2, 1}), frame(0.1, {3, 2})});
  const TrajectoryDataset one("x", DriverMode::Human, 0.1, ids, {frame(0, {2, 1})});

  std::size_t count = 0;
  for (const auto pair : platoon_frames(three)) {
    CHECK(pair.index == count);
    CHECK(pair.next->t > pair.current->t);
    ++count;
  }
  CHECK(count == 2);
  CHECK(platoon_frames(two).size() == 1);
  CHECK(error_code_of([&] { (void)platoon_frames(one); }) == ErrorCode::TooFewFrames);
}

TEST_CASE("driver mode names") {
  for (const auto mode : kAllDriverModes) CHECK(parse_driver_mode(to_string(mode)) == mode);
  CHECK(parse_driver_mode("ACCMIN") == DriverMode::AccMin);
  CHECK(error_code_of([] { (void)parse_driver_mode("robot"); }) == ErrorCode::UnknownDriverMode);
}
