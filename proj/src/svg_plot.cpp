#include "platoonfd/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "platoonfd/error.hpp"
#include "platoonfd/units.hpp"

namespace platoonfd {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;
constexpr int kBranchSamples = 64;

struct Point {
  double x;
  double y;
};

struct Axes {
  double x_max;
  double y_max;

  [[nodiscard]] double px(double x) const { return kLeft + x / x_max * (kWidth - kLeft - kRight); }
  [[nodiscard]] double py(double y) const {
    return kHeight - kBottom - y / y_max * (kHeight - kTop - kBottom);
  }
};

double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

double nice_max(double value) {
  if (!(value > 0.0)) return 1.0;
  const double step = nice_step(value);
  return std::ceil(value / step) * step;
}

Point project(Plane plane, double k, double v, double q) {
  switch (plane) {
    case Plane::FlowDensity: return {k, q};
    case Plane::SpeedDensity: return {k, v};
    case Plane::SpeedFlow: return {q, v};
  }
  return {k, q};
}

std::vector<Point> free_branch(Plane plane, const TfdParams& p) {
  const double cap = p.capacity();
  switch (plane) {
    case Plane::FlowDensity: return {{0.0, 0.0}, {p.k_cr(), cap}};
    case Plane::SpeedDensity: return {{0.0, p.v_f()}, {p.k_cr(), p.v_f()}};
    case Plane::SpeedFlow: return {{0.0, p.v_f()}, {cap, p.v_f()}};
  }
  return {};
}

std::vector<Point> congested_branch(Plane plane, const TfdParams& p) {
  std::vector<Point> pts;
  for (int i = 0; i <= kBranchSamples; ++i) {
    const double k = p.k_cr() + (p.k_jam() - p.k_cr()) * i / kBranchSamples;
    const double q = p.flow_unchecked(k);
    pts.push_back(project(plane, k, q / k, q));
  }
  return pts;
}

void polyline(std::ostream& out, const Axes& axes, const std::vector<Point>& pts,
              std::string_view cls, std::string_view stroke, double width) {
  out << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << stroke
      << "\" stroke-width=\"" << width << "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << (i ? " " : "") << axes.px(pts[i].x) << ',' << axes.py(pts[i].y);
  }
  out << "\"/>\n";
}

std::string_view x_label(Plane plane) {
  return plane == Plane::SpeedFlow ? "flow q [veh/h]" : "density k [veh/km]";
}

std::string_view y_label(Plane plane) {
  return plane == Plane::FlowDensity ? "flow q [veh/h]" : "speed v [km/h]";
}

}  // namespace

std::string_view to_string(Plane plane) {
  switch (plane) {
    case Plane::FlowDensity: return "qk";
    case Plane::SpeedDensity: return "vk";
    case Plane::SpeedFlow: return "vq";
  }
  return "qk";
}

std::string render_svg(const PlotInput& input) {
  if (input.binned == nullptr || input.binned->points.empty()) {
    throw Error(ErrorCode::EmptyInput, "nothing to plot: binned series is empty");
  }
  const Plane plane = input.plane;

  std::vector<Point> scatter;
  const std::size_t stride =
      input.max_scatter_points == 0
          ? 1
          : std::max<std::size_t>(1, (input.scatter.size() + input.max_scatter_points - 1) /
                                         input.max_scatter_points);
  for (std::size_t i = 0; i < input.scatter.size(); i += stride) {
    const auto& s = input.scatter[i];
    scatter.push_back(project(plane, units::per_m_to_per_km(s.k), units::mps_to_kmh(s.v),
                              units::per_s_to_per_h(s.q)));
  }
  std::vector<Point> binned;
  for (const auto& p : input.binned->points) binned.push_back(project(plane, p.k_mean, p.v_mean, p.q_mean));

  std::vector<Point> free, congested;
  if (input.params) {
    free = free_branch(plane, *input.params);
    congested = congested_branch(plane, *input.params);
  }

  double x_max = 0.0;
  double y_max = 0.0;
  for (const auto* set : {&scatter, &binned, &free, &congested}) {
    for (const auto& p : *set) {
      x_max = std::max(x_max, p.x);
      y_max = std::max(y_max, p.y);
    }
  }
  const Axes axes{nice_max(x_max), nice_max(y_max)};

  std::ostringstream out;
  out.precision(6);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" data-plane=\"" << to_string(plane)
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!input.title.empty()) {
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << input.title << "</text>\n";
  }

  // Axes and ticks.
  out << "<g class=\"axes\" stroke=\"black\" font-size=\"11\">\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << axes.py(0) << "\" x2=\"" << kWidth - kRight
      << "\" y2=\"" << axes.py(0) << "\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << axes.py(0) << "\"/>\n";
  const double xs = nice_step(axes.x_max);
  for (double x = 0.0; x <= axes.x_max + 1e-9 * axes.x_max; x += xs) {
    out << "<line x1=\"" << axes.px(x) << "\" y1=\"" << axes.py(0) << "\" x2=\"" << axes.px(x)
        << "\" y2=\"" << axes.py(0) + 5 << "\"/>";
    out << "<text stroke=\"none\" x=\"" << axes.px(x) << "\" y=\"" << axes.py(0) + 18
        << "\" text-anchor=\"middle\">" << x << "</text>\n";
  }
  const double ys = nice_step(axes.y_max);
  for (double y = 0.0; y <= axes.y_max + 1e-9 * axes.y_max; y += ys) {
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << axes.py(y) << "\" x2=\"" << kLeft
        << "\" y2=\"" << axes.py(y) << "\"/>";
    out << "<text stroke=\"none\" x=\"" << kLeft - 8 << "\" y=\"" << axes.py(y) + 4
        << "\" text-anchor=\"end\">" << y << "</text>\n";
  }
  out << "<text stroke=\"none\" x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << x_label(plane) << "</text>\n";
  out << "<text stroke=\"none\" transform=\"translate(16," << (kTop + axes.py(0)) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << y_label(plane) << "</text>\n";
  out << "</g>\n";

  if (!scatter.empty()) {
    out << "<g class=\"scatter\" fill=\"#4a7bd0\" fill-opacity=\"0.25\">\n";
    for (const auto& p : scatter) {
      out << "<circle class=\"state\" cx=\"" << axes.px(p.x) << "\" cy=\"" << axes.py(p.y)
          << "\" r=\"1.5\"/>\n";
    }
    out << "</g>\n";
  }
  polyline(out, axes, binned, "binned", "#d04a4a", 1.5);
  if (input.params) {
    polyline(out, axes, free, "tfd-free", "black", 2.0);
    polyline(out, axes, congested, "tfd-congested", "black", 2.0);
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace platoonfd
