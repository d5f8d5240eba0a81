#include "platoonfd/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "platoonfd/error.hpp"

namespace platoonfd {
namespace {

using Vec3 = std::array<double, 3>;

constexpr double kInfeasiblePenalty = 1e6;

Vec3 to_box(const Vec3& u, const Vec3& lo, const Vec3& hi) {
  Vec3 x;
  for (std::size_t i = 0; i < 3; ++i) x[i] = lo[i] + u[i] * (hi[i] - lo[i]);
  return x;
}

Vec3 clamp_unit(Vec3 u) {
  for (auto& c : u) c = std::clamp(c, 0.0, 1.0);
  return u;
}

struct Vertex {
  Vec3 u;
  double f;
};

// When no bin lies below k_cr the free-flow branch is unconstrained: with w
// and k_jam fixed, any smaller k_cr (larger v_f) fits equally well. Among those
// ties take the smallest v_f, i.e. slide k_cr up along the congested branch
// for as long as the objective does not change.
Vec3 settle_free_flow_ridge(const Vec3& x, double value, const BinnedSeries& binned,
                            const Vec3& lo, const Vec3& hi) {
  const double w = wave_speed(x[0], x[1], x[2]);
  const double k_jam = x[2];
  const double limit = value * (1.0 + 1e-9) + 1e-15;
  auto at = [&](double k_cr) { return Vec3{w * (k_jam - k_cr) / k_cr, k_cr, k_jam}; };
  auto flat = [&](double k_cr) {
    const Vec3 y = at(k_cr);
    return y[0] >= lo[0] && objective(y, binned) <= limit;
  };
  // v_f >= lo[0]  <=>  k_cr <= w k_jam / (lo[0] + w).
  double bad = std::min({hi[1], w * k_jam / (lo[0] + w), k_jam * (1.0 - 1e-9)});
  double good = x[1];
  if (!(bad > good)) return x;
  if (flat(bad)) return at(bad);
  for (int i = 0; i < 80 && bad - good > 1e-12 * bad; ++i) {
    const double mid = 0.5 * (good + bad);
    (flat(mid) ? good : bad) = mid;
  }
  return good == x[1] ? x : at(good);
}

}  // namespace

SimplexResult nelder_mead_box(const Objective3& f, const Vec3& start, const Vec3& lower,
                              const Vec3& upper, const OptimizerSettings& settings) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(lower[i] < upper[i])) {
      throw Error(ErrorCode::InvalidArgument, "simplex bounds must satisfy lower < upper");
    }
  }
  std::size_t evals = 0;
  auto eval = [&](const Vec3& u) {
    ++evals;
    return f(to_box(u, lower, upper));
  };

  Vec3 u0;
  for (std::size_t i = 0; i < 3; ++i) u0[i] = (start[i] - lower[i]) / (upper[i] - lower[i]);
  u0 = clamp_unit(u0);

  std::array<Vertex, 4> simplex;
  simplex[0] = {u0, eval(u0)};
  for (std::size_t i = 0; i < 3; ++i) {
    Vec3 u = u0;
    u[i] += u[i] + settings.step <= 1.0 ? settings.step : -settings.step;
    simplex[i + 1] = {u, eval(u)};
  }

  bool converged = false;
  while (evals < settings.max_evaluations) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    const double spread = simplex[3].f - simplex[0].f;
    double size = 0.0;
    for (std::size_t i = 1; i < 4; ++i) {
      for (std::size_t d = 0; d < 3; ++d) {
        size = std::max(size, std::abs(simplex[i].u[d] - simplex[0].u[d]));
      }
    }
    if (spread <= settings.tolerance * (1.0 + std::abs(simplex[0].f)) && size <= 1e-7) {
      converged = true;
      break;
    }
    if (size <= 1e-14) {
      converged = true;
      break;
    }

    Vec3 centroid{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t d = 0; d < 3; ++d) centroid[d] += simplex[i].u[d] / 3.0;
    }
    auto along = [&](double coeff) {
      Vec3 u;
      for (std::size_t d = 0; d < 3; ++d) {
        u[d] = centroid[d] + coeff * (simplex[3].u[d] - centroid[d]);
      }
      return clamp_unit(u);
    };

    const Vec3 ur = along(-1.0);
    const double fr = eval(ur);
    if (fr < simplex[0].f) {
      const Vec3 ue = along(-2.0);
      const double fe = eval(ue);
      simplex[3] = fe < fr ? Vertex{ue, fe} : Vertex{ur, fr};
      continue;
    }
    if (fr < simplex[2].f) {
      simplex[3] = {ur, fr};
      continue;
    }
    const bool outside = fr < simplex[3].f;
    const Vec3 uc = along(outside ? -0.5 : 0.5);
    const double fc = eval(uc);
    if (fc < (outside ? fr : simplex[3].f)) {
      simplex[3] = {uc, fc};
      continue;
    }
    for (std::size_t i = 1; i < 4; ++i) {
      for (std::size_t d = 0; d < 3; ++d) {
        simplex[i].u[d] = simplex[0].u[d] + 0.5 * (simplex[i].u[d] - simplex[0].u[d]);
      }
      simplex[i].f = eval(simplex[i].u);
    }
  }
  const auto best = std::min_element(simplex.begin(), simplex.end(),
                                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  return {to_box(best->u, lower, upper), best->f, evals, converged};
}

CalibrationResult calibrate(const CalibrationProblem& problem) {
  const auto& lo = problem.bounds.lower;
  const auto& hi = problem.bounds.upper;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(lo[i] < hi[i])) {
      throw Error(ErrorCode::Infeasible, "bounds leave no interior point");
    }
  }
  if (!(lo[1] < hi[2]) || !(hi[0] > 0.0) || !(hi[1] > 0.0)) {
    throw Error(ErrorCode::Infeasible, "no point in the bounds has 0 < k_cr < k_jam");
  }
  if (problem.binned.points.empty()) {
    throw Error(ErrorCode::EmptyInput, "binned series is empty");
  }
  const auto& binned = problem.binned;
  const Objective3 penalized = [&](const Vec3& x) {
    if (!(x[0] > 0.0) || !(x[1] > 0.0) || !(x[1] < x[2])) {
      const double overlap = std::max(0.0, x[1] - x[2]) / (hi[2] - lo[2]);
      return kInfeasiblePenalty * (1.0 + overlap);
    }
    return objective(x, binned);
  };

  const auto& settings = problem.settings;
  const std::size_t per_axis = std::max<std::size_t>(settings.grid_points, 1);
  std::vector<double> fractions;
  for (std::size_t i = 0; i < per_axis; ++i) {
    fractions.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(per_axis));
  }

  std::optional<SimplexResult> best;
  std::size_t evaluations = 0;
  for (double fv : fractions) {
    for (double fc : fractions) {
      for (double fj : fractions) {
        const Vec3 start{lo[0] + fv * (hi[0] - lo[0]), lo[1] + fc * (hi[1] - lo[1]),
                         lo[2] + fj * (hi[2] - lo[2])};
        if (!(start[1] < start[2])) continue;
        // Restart from the local optimum until it stops moving; a collapsed
        // simplex can stall short of the minimum.
        SimplexResult local = nelder_mead_box(penalized, start, lo, hi, settings);
        evaluations += local.evaluations;
        for (int polish = 0; polish < 3 && local.converged; ++polish) {
          SimplexResult again = nelder_mead_box(penalized, local.x, lo, hi, settings);
          evaluations += again.evaluations;
          const bool improved = again.value < local.value - settings.tolerance;
          if (again.value <= local.value) local = again;
          if (!improved) break;
        }
        const bool better = !best || local.value < best->value ||
                            (local.value == best->value && local.x < best->x);
        if (better) best = local;
      }
    }
  }
  if (!best) {
    // Every grid point had k_cr >= k_jam; start from the feasible corner.
    const Vec3 start{0.5 * (lo[0] + hi[0]), lo[1], hi[2]};
    best = nelder_mead_box(penalized, start, lo, hi, settings);
    evaluations += best->evaluations;
  }
  if (!(best->x[1] < best->x[2]) || best->value >= kInfeasiblePenalty) {
    throw Error(ErrorCode::Infeasible, "search found no point with k_cr < k_jam");
  }

  best->x = settle_free_flow_ridge(best->x, best->value, binned, lo, hi);

  const bool identifiable = problem.binned.points.size() >= 3;
  return {TfdParams(best->x[0], best->x[1], best->x[2]), best->value, evaluations,
          best->converged && identifiable};
}

std::vector<SensitivityRow> sensitivity_sweep(std::span<const TrafficState> states,
                                              std::span<const double> deltas,
                                              const CalibrationBounds& bounds,
                                              const OptimizerSettings& settings) {
  if (deltas.empty()) throw Error(ErrorCode::InvalidArgument, "no delta values");
  std::vector<SensitivityRow> rows;
  for (double delta : deltas) {
    SensitivityRow row;
    row.delta = delta;
    try {
      if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
      CalibrationProblem problem{aggregate_by_density(states, delta), bounds, settings};
      row.driver_mode = problem.binned.driver_mode;
      row.bins = problem.binned.points.size();
      row.result = calibrate(problem);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace platoonfd
