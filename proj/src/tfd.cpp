#include "platoonfd/tfd.hpp"

#include <cmath>
#include <sstream>

#include "platoonfd/error.hpp"

namespace platoonfd {

double wave_speed(double v_f, double k_cr, double k_jam) {
  if (!(k_cr > 0.0) || !(k_cr < k_jam)) {
    std::ostringstream msg;
    msg << "need 0 < k_cr < k_jam, got k_cr=" << k_cr << " k_jam=" << k_jam;
    throw Error(ErrorCode::DegenerateGeometry, msg.str());
  }
  return v_f * k_cr / (k_jam - k_cr);
}

TfdParams::TfdParams(double v_f, double k_cr, double k_jam)
    : v_f_(v_f), k_cr_(k_cr), k_jam_(k_jam), w_(wave_speed(v_f, k_cr, k_jam)) {
  if (!(v_f > 0.0) || !std::isfinite(v_f) || !std::isfinite(k_jam)) {
    std::ostringstream msg;
    msg << "free-flow speed must be positive, got " << v_f;
    throw Error(ErrorCode::DegenerateGeometry, msg.str());
  }
}

double tfd_flow(const TfdParams& p, double k) {
  if (k < 0.0 || k > p.k_jam()) {
    std::ostringstream msg;
    msg << "density " << k << " outside [0, " << p.k_jam() << "]";
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
  return p.flow_unchecked(k);
}

double objective(const TfdParams& p, const BinnedSeries& binned) {
  if (binned.points.empty()) throw Error(ErrorCode::EmptyInput, "binned series is empty");
  if (binned.grid.axis != BinAxis::Density) {
    throw Error(ErrorCode::InvalidArgument, "calibration needs a density-axis series");
  }
  double sq_q = 0.0;
  double sq_v = 0.0;
  double sum_q = 0.0;
  double sum_v = 0.0;
  for (const auto& pt : binned.points) {
    const double model_q = p.flow_unchecked(pt.k_mean);
    const double model_v = pt.k_mean > 0.0 ? model_q / pt.k_mean : p.v_f();
    sq_q += (pt.q_mean - model_q) * (pt.q_mean - model_q);
    sq_v += (pt.v_mean - model_v) * (pt.v_mean - model_v);
    sum_q += pt.q_mean;
    sum_v += pt.v_mean;
  }
  const double m = static_cast<double>(binned.points.size());
  const double mean_q = sum_q / m;
  const double mean_v = sum_v / m;
  if (mean_q == 0.0 || mean_v == 0.0) {
    throw Error(ErrorCode::ZeroMeanNormalizer, "mean flow or mean speed of the bins is zero");
  }
  return std::sqrt(sq_q / m) / mean_q + std::sqrt(sq_v / m) / mean_v;
}

double objective(const std::array<double, 3>& x, const BinnedSeries& binned) {
  return objective(TfdParams(x[0], x[1], x[2]), binned);
}

}  // namespace platoonfd
