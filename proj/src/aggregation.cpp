#include "platoonfd/aggregation.hpp"

#include <cmath>
#include <sstream>

#include "platoonfd/error.hpp"
#include "platoonfd/units.hpp"

namespace platoonfd {

std::size_t bin_index(double value, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidArgument, "bin width must be positive");
  }
  if (value < 0.0 || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "cannot bin value " << value;
    throw Error(ErrorCode::NonPositiveValue, msg.str());
  }
  if (value == 0.0) return 0;
  const double ratio = value / delta;
  const double nearest = std::round(ratio);
  if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * nearest) {
    return static_cast<std::size_t>(nearest) - 1;
  }
  const double upper = std::ceil(ratio);
  return upper < 1.0 ? 0 : static_cast<std::size_t>(upper) - 1;
}

std::size_t BinnedSeries::total_count() const {
  std::size_t n = 0;
  for (const auto& p : points) n += p.count;
  return n;
}

BinAccumulator::BinAccumulator(double delta, BinAxis axis) : delta_(delta), axis_(axis) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidArgument, "bin width must be positive");
  }
}

void BinAccumulator::add(const TrafficState& state) {
  if (mode_ && *mode_ != state.driver_mode) {
    throw Error(ErrorCode::MixedDriverModes, std::string(to_string(*mode_)) + " and " +
                                                 std::string(to_string(state.driver_mode)));
  }
  mode_ = state.driver_mode;
  const double k = units::per_m_to_per_km(state.k);
  const double v = units::mps_to_kmh(state.v);
  const double q = units::per_s_to_per_h(state.q);
  const std::size_t i = bin_index(axis_ == BinAxis::Density ? k : v, delta_);
  if (i >= bins_.size()) bins_.resize(i + 1);
  auto& b = bins_[i];
  b.k += k;
  b.v += v;
  b.q += q;
  ++b.count;
  ++count_;
}

void BinAccumulator::add(std::span<const TrafficState> states) {
  for (const auto& s : states) add(s);
}

BinAccumulator BinAccumulator::merge(const BinAccumulator& other) const {
  if (other.delta_ != delta_ || other.axis_ != axis_) {
    throw Error(ErrorCode::GridMismatch, "accumulators use different bin grids");
  }
  if (mode_ && other.mode_ && *mode_ != *other.mode_) {
    throw Error(ErrorCode::MixedDriverModes, std::string(to_string(*mode_)) + " and " +
                                                 std::string(to_string(*other.mode_)));
  }
  BinAccumulator out = *this;
  if (!out.mode_) out.mode_ = other.mode_;
  if (other.bins_.size() > out.bins_.size()) out.bins_.resize(other.bins_.size());
  for (std::size_t i = 0; i < other.bins_.size(); ++i) {
    out.bins_[i].k += other.bins_[i].k;
    out.bins_[i].v += other.bins_[i].v;
    out.bins_[i].q += other.bins_[i].q;
    out.bins_[i].count += other.bins_[i].count;
  }
  out.count_ += other.count_;
  return out;
}

BinnedSeries BinAccumulator::finish() const {
  BinnedSeries series;
  series.grid = {delta_, axis_, bins_.size()};
  series.driver_mode = mode_;
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const auto& b = bins_[i];
    if (b.count == 0) continue;
    const double n = static_cast<double>(b.count);
    series.points.push_back({i, b.k / n, b.v / n, b.q / n, b.count});
  }
  return series;
}

namespace {

BinnedSeries aggregate(std::span<const TrafficState> states, double delta, BinAxis axis) {
  if (states.empty()) throw Error(ErrorCode::EmptyInput, "no traffic states to aggregate");
  BinAccumulator acc(delta, axis);
  acc.add(states);
  return acc.finish();
}

}  // namespace

BinnedSeries aggregate_by_density(std::span<const TrafficState> states, double delta_k) {
  return aggregate(states, delta_k, BinAxis::Density);
}

BinnedSeries aggregate_by_speed(std::span<const TrafficState> states, double delta_v) {
  return aggregate(states, delta_v, BinAxis::Speed);
}

}  // namespace platoonfd
