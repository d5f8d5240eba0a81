#include "platoonfd/estimator.hpp"
#include "platoonfd/synthetic.hpp"
#include "platoonfd/units.hpp"
#include "support.hpp"

using namespace platoonfd;
using testsupport::error_code_of;
using testsupport::rel_close;

TEST_CASE("drive cycle speed and distance") {
  const auto c = DriveCycle::sweep(20.0, 10.0, 5.0, 2.0);
  CHECK(c.duration == 29.0);
  CHECK(c.speed(1.0) == 0.0);
  CHECK(c.speed(7.0) == doctest::Approx(10.0));
  CHECK(c.speed(15.0) == 20.0);
  CHECK(c.speed(22.0) == doctest::Approx(10.0));
  CHECK(c.acceleration(7.0) == doctest::Approx(2.0));
  CHECK(c.acceleration(13.0) == 0.0);
  CHECK(c.acceleration(20.0) == doctest::Approx(-2.0));
  // Trapezoidal-rule integral on a fine grid is exact for piecewise-linear speed.
  double d = 0.0;
  const double h = 1e-3;
  for (int i = 0; i < 29000; ++i) d += 0.5 * (c.speed(i * h) + c.speed((i + 1) * h)) * h;
  CHECK(c.distance(29.0) == doctest::Approx(d).epsilon(1e-9));
  CHECK(c.distance(29.0) == doctest::Approx(300.0).epsilon(1e-12));
  CHECK(c.distance(100.0) == doctest::Approx(300.0).epsilon(1e-12));
}

TEST_CASE("closed-form diagram of the headway law") {
  const HeadwayLaw law{8.0, 1.2};
  const auto p = analytic_fd(law, 30.0);
  CHECK(p.k_jam() == doctest::Approx(125.0).epsilon(1e-12));
  CHECK(p.w() == doctest::Approx(24.0).epsilon(1e-12));
  CHECK(p.k_cr() == doctest::Approx(1000.0 / 44.0).epsilon(1e-12));
  CHECK(p.v_f() == doctest::Approx(108.0).epsilon(1e-12));
  CHECK(error_code_of([&] { (void)analytic_fd(law, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("constant-speed platoon") {
  const auto ds = generate_platoon(DriveCycle::constant(20.0, 10.0), {8.0, 1.2});
  CHECK(ds.vehicle_count() == 5);
  CHECK(ds.frame_count() == 101);
  CHECK(validate_platoon(ds).accepted());
  CHECK(validate_platoon(ds).warnings.empty());
  for (const auto& f : ds.frames()) {
    for (std::size_t i = 1; i < 5; ++i) {
      CHECK(f.positions[i - 1] - f.positions[i] == doctest::Approx(32.0).epsilon(1e-12));
    }
    CHECK(effective_length(f) == doctest::Approx(131.0).epsilon(1e-12));
  }
}

TEST_CASE("standstill platoon") {
  const auto ds = generate_platoon(DriveCycle::constant(0.0, 5.0), {8.0, 1.2});
  for (const auto& f : ds.frames()) {
    for (std::size_t i = 1; i < 5; ++i) CHECK(f.positions[i - 1] - f.positions[i] == doctest::Approx(8.0));
  }
  for (const auto& s : estimate_series(ds).states) {
    CHECK(s.v == 0.0);
    CHECK(s.q == 0.0);
  }
}

TEST_CASE("spacing law holds at every sample") {
  const HeadwayLaw law{8.0, 1.2};
  const auto cycle = DriveCycle::sweep(30.0, 120.0, 30.0, 5.0);

  SUBCASE("quasi-static followers use the leader's speed") {
    const auto ds = generate_platoon(cycle, law);
    for (const auto& f : ds.frames()) {
      const double s = law.spacing(cycle.speed(f.t));
      for (std::size_t i = 1; i < ds.vehicle_count(); ++i) {
        CHECK(rel_close(f.positions[i - 1] - f.positions[i], s, 1e-9));
        CHECK(f.speeds[i] == doctest::Approx(cycle.speed(f.t) - static_cast<double>(i) * law.T * cycle.acceleration(f.t)));
      }
    }
  }
  SUBCASE("lagging followers use their own speed and never reverse") {
    SyntheticConfig cfg;
    cfg.follower = FollowerModel::Lag;
    const auto ds = generate_platoon(cycle, law, cfg);
    for (const auto& f : ds.frames()) {
      for (std::size_t i = 1; i < ds.vehicle_count(); ++i) {
        CHECK(rel_close(f.positions[i - 1] - f.positions[i], law.spacing(f.speeds[i]), 1e-9));
      }
    }
    const auto est = estimate_series(ds);
    CHECK(est.skipped.empty());
    CHECK(validate_platoon(ds).accepted());
  }
}

TEST_CASE("slow ramp: states follow the platoon-length closed form") {
  // Quasi-static states depend only on the leader speed v:
  //   k = N / ((N - 1)(s0 + T v) + b),  v_mean = v - T a (N - 1) / 2.
  const HeadwayLaw law{8.0, 1.2};
  const DriveCycle ramp{{{0.0, 0.0}, {600.0, 30.0}}, 600.0};
  const auto ds = generate_platoon(ramp, law);
  EstimatorConfig cfg;
  cfg.on_error = PairErrorPolicy::Skip;
  const auto est = estimate_series(ds, cfg);
  CHECK(est.states.size() + est.skipped.size() == ds.frame_count() - 1);
  const double a = 30.0 / 600.0;
  const double n = 5.0;
  std::size_t checked = 0;
  for (const auto& s : est.states) {
    const double v_mid = ramp.speed(s.t + 0.05);
    if (v_mid < 1.0) continue;
    const double lp_mid = (n - 1) * law.spacing(v_mid) + cfg.buffer;
    CHECK(rel_close(s.k, n / lp_mid, 1e-6));
    CHECK(rel_close(s.v, v_mid - law.T * a * (n - 1) / 2.0, 1e-7));
    ++checked;
  }
  CHECK(checked > 5000);
}

TEST_CASE("noise is seeded and zero-mean") {
  SyntheticConfig noisy;
  noisy.position_noise = 0.1;
  const auto cycle = DriveCycle::constant(15.0, 60.0);
  const auto a = generate_platoon(cycle, {}, noisy);
  const auto b = generate_platoon(cycle, {}, noisy);
  const auto clean = generate_platoon(cycle, {});
  double sum = 0.0;
  double sq = 0.0;
  std::size_t count = 0;
  for (std::size_t f = 0; f < a.frame_count(); ++f) {
    CHECK(a.frames()[f].positions == b.frames()[f].positions);
    for (std::size_t i = 0; i < a.vehicle_count(); ++i) {
      const double e = a.frames()[f].positions[i] - clean.frames()[f].positions[i];
      sum += e;
      sq += e * e;
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  const double sd = std::sqrt(sq / static_cast<double>(count) - mean * mean);
  CHECK(std::abs(mean) < 0.01);
  CHECK(sd == doctest::Approx(0.1).epsilon(0.05));

  noisy.seed = 43;
  CHECK(generate_platoon(cycle, {}, noisy).frames()[10].positions != a.frames()[10].positions);
}

TEST_CASE("configuration") {
  SyntheticConfig cfg;
  cfg.vehicles = 3;
  cfg.sample_hz = 25.0;
  cfg.dataset_id = "s";
  cfg.driver_mode = DriverMode::Cacc;
  cfg.emit_speeds = false;
  const auto ds = generate_platoon(DriveCycle::constant(10.0, 2.0), {}, cfg);
  CHECK(ds.vehicle_count() == 3);
  CHECK(ds.frame_count() == 51);
  CHECK(ds.sample_interval() == doctest::Approx(0.04));
  CHECK(ds.dataset_id() == "s");
  CHECK(ds.driver_mode() == DriverMode::Cacc);
  CHECK_FALSE(ds.has_speeds());

  cfg.vehicles = 1;
  CHECK(error_code_of([&] { (void)generate_platoon(DriveCycle::constant(10, 2), {}, cfg); }) ==
        ErrorCode::InvalidArgument);
  CHECK(error_code_of([] { (void)generate_platoon(DriveCycle::constant(10, 2), {0.0, 1.2}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(error_code_of([] { (void)generate_platoon(DriveCycle::constant(-1, 2), {}); }) ==
        ErrorCode::InvalidArgument);
}
