#include "platoonfd/aggregation.hpp"
#include "platoonfd/calibration.hpp"
#include "platoonfd/units.hpp"
#include "support.hpp"

using namespace platoonfd;
using testsupport::error_code_of;
using testsupport::rel_close;

namespace {

// `n` binned points on the diagram between 0 and k_jam, flow perturbed by
// relative Gaussian noise; speeds stay consistent with the perturbed flow.
BinnedSeries sampled(const TfdParams& p, std::size_t n, double rel_noise = 0.0, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  BinnedSeries s;
  s.grid = {0.3, BinAxis::Density, 0};
  s.driver_mode = DriverMode::AccMin;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = p.k_jam() * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double q = tfd_flow(p, k) * (1.0 + rel_noise * noise(rng));
    s.points.push_back({bin_index(k, 0.3), k, q / k, q, 1});
  }
  s.grid.bins = s.points.back().bin + 1;
  return s;
}

void check_params(const TfdParams& got, const TfdParams& want, double tol) {
  CHECK(rel_close(got.v_f(), want.v_f(), tol));
  CHECK(rel_close(got.k_cr(), want.k_cr(), tol));
  CHECK(rel_close(got.k_jam(), want.k_jam(), tol));
}

}  // namespace

TEST_CASE("simplex search on a bowl") {
  const Objective3 bowl = [](const std::array<double, 3>& x) {
    return (x[0] - 1) * (x[0] - 1) + 10 * (x[1] + 2) * (x[1] + 2) + (x[2] - 3) * (x[2] - 3);
  };
  const auto r = nelder_mead_box(bowl, {0, 0, 0}, {-5, -5, -5}, {5, 5, 5}, {});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(-2).epsilon(1e-5));
  CHECK(r.x[2] == doctest::Approx(3).epsilon(1e-5));

  // Minimum outside the box lands on the face.
  const auto clipped = nelder_mead_box(bowl, {0, 0, 0}, {-5, -1, -5}, {5, 5, 5}, {});
  CHECK(clipped.x[1] == doctest::Approx(-1).epsilon(1e-6));
  CHECK(clipped.x[0] == doctest::Approx(1).epsilon(1e-5));

  OptimizerSettings tight;
  tight.max_evaluations = 10;
  CHECK_FALSE(nelder_mead_box(bowl, {0, 0, 0}, {-5, -5, -5}, {5, 5, 5}, tight).converged);
}

TEST_CASE("noise-free recovery") {
  const TfdParams truth(126.0, 21.3, 104.4);
  const auto r = calibrate({sampled(truth, 50), {}, {}});
  check_params(r.params, truth, 1e-3);
  CHECK(r.objective_value < 1e-6);
  CHECK(r.converged);
}

TEST_CASE("recovery under 2% flow noise") {
  const TfdParams truth(126.0, 21.3, 104.4);
  const auto r = calibrate({sampled(truth, 50, 0.02, 2024), {}, {}});
  check_params(r.params, truth, 0.02);
}

TEST_CASE("result stays in bounds and beats every start point") {
  const TfdParams truth(110.1, 12.9, 101.0);
  const auto binned = sampled(truth, 40, 0.05, 7);
  CalibrationProblem problem{binned, {}, {}};
  const auto r = calibrate(problem);
  const auto x = r.params.as_vector();
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(x[i] >= problem.bounds.lower[i]);
    CHECK(x[i] <= problem.bounds.upper[i]);
  }
  CHECK(r.objective_value >= 0.0);
  const auto& lo = problem.bounds.lower;
  const auto& hi = problem.bounds.upper;
  for (const double a : {1.0 / 6, 0.5, 5.0 / 6}) {
    for (const double b : {1.0 / 6, 0.5, 5.0 / 6}) {
      for (const double c : {1.0 / 6, 0.5, 5.0 / 6}) {
        const std::array<double, 3> start{lo[0] + a * (hi[0] - lo[0]), lo[1] + b * (hi[1] - lo[1]),
                                          lo[2] + c * (hi[2] - lo[2])};
        if (start[1] >= start[2]) continue;
        CHECK(objective(r.params, binned) <= objective(start, binned) * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("deterministic") {
  const auto binned = sampled(TfdParams(100, 25, 120), 30, 0.05, 3);
  const auto a = calibrate({binned, {}, {}});
  const auto b = calibrate({binned, {}, {}});
  CHECK(a.params.as_vector() == b.params.as_vector());
  CHECK(a.objective_value == b.objective_value);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("infeasible and empty problems") {
  CalibrationProblem p{sampled(TfdParams(126.0, 21.3, 104.4), 10), {}, {}};
  p.bounds.lower = {100, 30, 40};
  p.bounds.upper = {120, 35, 38};
  CHECK(error_code_of([&] { (void)calibrate(p); }) == ErrorCode::Infeasible);

  p.bounds = {};
  p.bounds.lower[0] = 150;
  p.bounds.upper[0] = 150;
  CHECK(error_code_of([&] { (void)calibrate(p); }) == ErrorCode::Infeasible);

  CHECK(error_code_of([] { (void)calibrate({}); }) == ErrorCode::EmptyInput);
}

TEST_CASE("too few bins are flagged as unconverged") {
  const auto r = calibrate({sampled(TfdParams(126.0, 21.3, 104.4), 2), {}, {}});
  CHECK_FALSE(r.converged);
}

TEST_CASE("sensitivity sweep") {
  const TfdParams truth(120.0, 25.0, 130.0);
  std::vector<TrafficState> states;
  for (int i = 1; i < 1200; ++i) {
    const double k = 0.1 * i;
    const double q = tfd_flow(truth, k);
    TrafficState s;
    s.k = units::per_km_to_per_m(k);
    s.q = units::per_h_to_per_s(q);
    s.v = units::kmh_to_mps(q / k);
    s.driver_mode = DriverMode::AccMed;
    states.push_back(s);
  }

  SUBCASE("one row per delta, in order, re-aggregated from raw states") {
    const std::vector<double> deltas{0.3, 3.5, 1.0};
    const auto rows = sensitivity_sweep(states, deltas);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].delta == deltas[i]);
      CHECK(rows[i].error.empty());
      REQUIRE(rows[i].result);
      CHECK(*rows[i].driver_mode == DriverMode::AccMed);
      CHECK(rows[i].bins == aggregate_by_density(states, deltas[i]).points.size());
      CHECK(rel_close(rows[i].result->params.v_f(), truth.v_f(), 0.01));
    }
  }

  SUBCASE("single delta equals a direct calibration") {
    const std::vector<double> deltas{0.6};
    const auto rows = sensitivity_sweep(states, deltas);
    const auto direct = calibrate({aggregate_by_density(states, 0.6), {}, {}});
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].result);
    CHECK(rows[0].result->params.as_vector() == direct.params.as_vector());
    CHECK(rows[0].result->objective_value == direct.objective_value);
  }

  SUBCASE("a delta wider than the data gives one unconverged row") {
    const std::vector<double> deltas{1000.0};
    const auto rows = sensitivity_sweep(states, deltas);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].bins == 1);
    if (rows[0].result) CHECK_FALSE(rows[0].result->converged);
  }

  SUBCASE("failures are recorded per row") {
    const std::vector<double> deltas{0.3, -1.0};
    const auto rows = sensitivity_sweep(states, deltas);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].result);
    CHECK_FALSE(rows[1].result);
    CHECK_FALSE(rows[1].error.empty());
    const std::vector<double> none;
    CHECK(error_code_of([&] { (void)sensitivity_sweep(states, none); }) == ErrorCode::InvalidArgument);
  }
}
