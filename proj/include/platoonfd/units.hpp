#pragma once

// Internal quantities are SI (m, s, veh/m, veh/s, m/s). Reporting units
// (veh/km, veh/h, km/h) only appear at file and plot boundaries.
namespace platoonfd::units {

inline constexpr double kMetersPerKm = 1000.0;
inline constexpr double kSecondsPerHour = 3600.0;

constexpr double per_m_to_per_km(double k) { return k * kMetersPerKm; }
constexpr double per_km_to_per_m(double k) { return k / kMetersPerKm; }
constexpr double per_s_to_per_h(double q) { return q * kSecondsPerHour; }
constexpr double per_h_to_per_s(double q) { return q / kSecondsPerHour; }
constexpr double mps_to_kmh(double v) { return v * kSecondsPerHour / kMetersPerKm; }
constexpr double kmh_to_mps(double v) { return v * kMetersPerKm / kSecondsPerHour; }

}  // namespace platoonfd::units
