#pragma once

#include <array>

#include "platoonfd/aggregation.hpp"

namespace platoonfd {

/// Wave speed that makes the two TFD branches meet at the critical density:
/// w = v_f * k_cr / (k_jam - k_cr). Throws Error(DegenerateGeometry) unless
/// 0 < k_cr < k_jam.
double wave_speed(double v_f, double k_cr, double k_jam);

/// Triangular fundamental diagram in reporting units (km/h, veh/km, veh/h).
/// Only v_f, k_cr and k_jam are free; w is derived.
class TfdParams {
 public:
  /// Throws Error(DegenerateGeometry) unless v_f > 0 and 0 < k_cr < k_jam.
  TfdParams(double v_f, double k_cr, double k_jam);

  [[nodiscard]] double v_f() const noexcept { return v_f_; }
  [[nodiscard]] double k_cr() const noexcept { return k_cr_; }
  [[nodiscard]] double k_jam() const noexcept { return k_jam_; }
  [[nodiscard]] double w() const noexcept { return w_; }
  [[nodiscard]] double capacity() const noexcept { return v_f_ * k_cr_; }

  /// Q(k) without domain checks; the congested branch is extended linearly
  /// past k_jam (negative flow) so fits can see how far a point lies beyond it.
  [[nodiscard]] double flow_unchecked(double k) const noexcept {
    return k <= k_cr_ ? v_f_ * k : w_ * (k_jam_ - k);
  }

  [[nodiscard]] std::array<double, 3> as_vector() const { return {v_f_, k_cr_, k_jam_}; }

 private:
  double v_f_;
  double k_cr_;
  double k_jam_;
  double w_;
};

/// Q(k) = v_f k for k <= k_cr, w (k_jam - k) above. Throws
/// Error(OutOfDomain) outside [0, k_jam].
double tfd_flow(const TfdParams& p, double k);

/// Sum of the normalized RMSE of flow and of speed over the binned points:
///   sqrt(mean((q_m - Q(k_m))^2)) / mean(q_m)
/// + sqrt(mean((v_m - Q(k_m)/k_m)^2)) / mean(v_m)
/// `binned` must be a non-empty density-axis series.
/// Throws Error(ZeroMeanNormalizer) when mean flow or mean speed is zero.
double objective(const TfdParams& p, const BinnedSeries& binned);
double objective(const std::array<double, 3>& x, const BinnedSeries& binned);

}  // namespace platoonfd
