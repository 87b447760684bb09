#pragma once

// Two-panel SVG time-series plot: state trajectory on top, spiking input
// as a stem train below. Every jump record produces exactly one stem
// marker (class "jump-marker") of height -alpha1 or +alpha2.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "spikeloop/hybrid/trace.hpp"
#include "spikeloop/lif/params.hpp"

namespace spikeloop::io {

namespace detail {

struct AxisMap {
  double t0, t1, v0, v1;    // data ranges
  double px0, px1, py0, py1; // pixel ranges (py0 = top)

  double x(double t) const { return px0 + (t - t0) / (t1 - t0) * (px1 - px0); }
  double y(double v) const { return py1 - (v - v0) / (v1 - v0) * (py1 - py0); }
};

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline void axes(std::ostream& out, const AxisMap& m, const std::string& ylabel) {
  out << "<rect x='" << m.px0 << "' y='" << m.py0 << "' width='" << (m.px1 - m.px0)
      << "' height='" << (m.py1 - m.py0)
      << "' fill='none' stroke='#888' stroke-width='1'/>\n";
  if (m.v0 < 0.0 && m.v1 > 0.0)
    out << "<line x1='" << m.px0 << "' y1='" << m.y(0.0) << "' x2='" << m.px1 << "' y2='"
        << m.y(0.0) << "' stroke='#ccc' stroke-width='1'/>\n";
  out << "<text x='" << (m.px0 - 8) << "' y='" << (m.py0 + 12)
      << "' text-anchor='end' font-size='12'>" << fmt(m.v1) << "</text>\n";
  out << "<text x='" << (m.px0 - 8) << "' y='" << m.py1
      << "' text-anchor='end' font-size='12'>" << fmt(m.v0) << "</text>\n";
  out << "<text x='" << m.px0 << "' y='" << (m.py1 + 18) << "' font-size='12'>" << fmt(m.t0)
      << "</text>\n";
  out << "<text x='" << m.px1 << "' y='" << (m.py1 + 18)
      << "' text-anchor='end' font-size='12'>" << fmt(m.t1) << "</text>\n";
  out << "<text x='" << (m.px0 + 6) << "' y='" << (m.py0 + 14) << "' font-size='13'>"
      << ylabel << "</text>\n";
}

}  // namespace detail

inline void write_trace_svg(const hybrid::HybridTrace& trace, const lif::NeuronParams& neurons,
                            std::ostream& out, const std::string& title = "") {
  const double t_end = trace.final_time().t;
  double x_min = 0.0, x_max = 0.0;
  trace.for_each_sample([&](double, std::int64_t, const hybrid::HybridState& q) {
    x_min = std::min(x_min, q.x[0]);
    x_max = std::max(x_max, q.x[0]);
  });
  if (x_max == x_min) x_max = x_min + 1.0;
  const double pad = 0.05 * (x_max - x_min);
  const double u_span = 1.1 * std::max(neurons.alpha1, neurons.alpha2);

  detail::AxisMap state_axis{0.0, t_end, x_min - pad, x_max + pad, 60, 860, 20, 280};
  detail::AxisMap input_axis{0.0, t_end, -u_span, u_span, 60, 860, 330, 510};

  out << "<svg xmlns='http://www.w3.org/2000/svg' width='900' height='560' "
         "viewBox='0 0 900 560'>\n";
  out << "<rect width='900' height='560' fill='white'/>\n";
  if (!title.empty())
    out << "<text x='450' y='14' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";

  detail::axes(out, state_axis, "x");
  // one polyline per flow arc, so jumps render as visual discontinuities
  for (const auto& arc : trace.arcs) {
    if (arc.samples.size() < 2) continue;
    out << "<polyline fill='none' stroke='#1f4e9c' stroke-width='1.2' points='";
    for (const auto& s : arc.samples)
      out << detail::fmt(state_axis.x(s.t)) << ',' << detail::fmt(state_axis.y(s.q.x[0])) << ' ';
    out << "'/>\n";
  }

  detail::axes(out, input_axis, "u");
  for (const auto& jump : trace.jumps) {
    const double amp = jump.active_guard == 1 ? -neurons.alpha1 : neurons.alpha2;
    out << "<line class='jump-marker' x1='" << detail::fmt(input_axis.x(jump.t)) << "' y1='"
        << detail::fmt(input_axis.y(0.0)) << "' x2='" << detail::fmt(input_axis.x(jump.t))
        << "' y2='" << detail::fmt(input_axis.y(amp))
        << "' stroke='#b03030' stroke-width='1'/>\n";
  }
  out << "</svg>\n";
}

}  // namespace spikeloop::io
