#pragma once

// Trace, jump-event and signal CSV formats. Floats are written with 17
// significant digits so a written file re-reads to bit-identical values.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spikeloop/errors.hpp"
#include "spikeloop/hybrid/trace.hpp"
#include "spikeloop/io/format.hpp"
#include "spikeloop/signals/piecewise_linear.hpp"

namespace spikeloop::io {

inline void write_trace_csv(const hybrid::HybridTrace& trace, std::ostream& out) {
  const std::size_t n = trace.arcs.empty() || trace.arcs.front().samples.empty()
                            ? 0
                            : trace.arcs.front().samples.front().q.dim();
  out << "t,j";
  for (std::size_t i = 0; i < n; ++i) out << ",x" << i;
  out << ",xi1,xi2\n";
  trace.for_each_sample([&](double t, std::int64_t j, const hybrid::HybridState& q) {
    out << format_double(t) << ',' << j;
    for (double v : q.x) out << ',' << format_double(v);
    out << ',' << format_double(q.xi1) << ',' << format_double(q.xi2) << '\n';
  });
}

inline void write_events_csv(const hybrid::HybridTrace& trace, std::ostream& out) {
  const std::size_t n = trace.jumps.empty() ? 0 : trace.jumps.front().state_before.dim();
  out << "t,j_before,guard";
  for (std::size_t i = 0; i < n; ++i) out << ",x_before" << i;
  for (std::size_t i = 0; i < n; ++i) out << ",x_after" << i;
  out << '\n';
  for (const auto& jump : trace.jumps) {
    out << format_double(jump.t) << ',' << jump.j_before << ',' << jump.active_guard;
    for (double v : jump.state_before.x) out << ',' << format_double(v);
    for (double v : jump.state_after.x) out << ',' << format_double(v);
    out << '\n';
  }
}

/// Signal values at knot resolution over [0, t_end].
inline void write_signal_csv(const signals::PiecewiseLinearSignal& sig, double t_end,
                             std::ostream& out) {
  out << "t,value\n";
  const auto last = static_cast<std::size_t>(t_end / sig.grid_step()) + 1;
  for (std::size_t k = 0; k <= last; ++k) {
    const double t = sig.grid_step() * static_cast<double>(k);
    out << format_double(t) << ',' << format_double(sig.knot(k)) << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

inline double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("csv: malformed number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("csv: malformed number '" + s + "'");
  }
}

inline std::int64_t parse_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw ConfigError("csv: malformed integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("csv: malformed integer '" + s + "'");
  }
}

}  // namespace detail

/// Rebuilds a trace from its CSV: arcs are split at j increments and a
/// JumpRecord is synthesized at each split (the firing guard is inferred
/// from which membrane potential was reset). Solver metadata is not stored
/// in the CSV, so the result carries default options with t_end set to the
/// last sample time.
inline hybrid::HybridTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace csv: empty file");
  const auto header = detail::split_csv_line(line);
  if (header.size() < 4 || header[0] != "t" || header[1] != "j" ||
      header[header.size() - 2] != "xi1" || header.back() != "xi2")
    throw ConfigError("trace csv: expected header t,j,x...,xi1,xi2");
  const std::size_t n = header.size() - 4;
  if (n < 1) throw ConfigError("trace csv: no state columns");

  hybrid::HybridTrace trace;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size())
      throw ConfigError("trace csv: wrong field count on row " + std::to_string(row));
    const double t = detail::parse_double(fields[0]);
    const auto j = detail::parse_int(fields[1]);
    hybrid::HybridState q;
    q.x.reserve(n);
    for (std::size_t i = 0; i < n; ++i) q.x.push_back(detail::parse_double(fields[2 + i]));
    q.xi1 = detail::parse_double(fields[2 + n]);
    q.xi2 = detail::parse_double(fields[3 + n]);

    if (trace.arcs.empty() || trace.arcs.back().j != j) {
      if (!trace.arcs.empty()) {
        const auto& prev = trace.arcs.back().samples.back();
        if (j != trace.arcs.back().j + 1)
          throw ConfigError("trace csv: jump counter must increase by 1 (row " +
                            std::to_string(row) + ")");
        hybrid::JumpRecord rec;
        rec.t = prev.t;
        rec.j_before = trace.arcs.back().j;
        rec.state_before = prev.q;
        rec.state_after = q;
        rec.active_guard = (q.xi1 == 0.0 && prev.q.xi1 > 0.0) ? 1 : 2;
        trace.jumps.push_back(std::move(rec));
      }
      trace.arcs.push_back(hybrid::Arc{j, {}});
    }
    trace.arcs.back().samples.push_back(hybrid::Sample{t, std::move(q)});
  }
  if (trace.arcs.empty()) throw ConfigError("trace csv: no samples");
  trace.meta.solver.t_end = trace.final_time().t;
  if (!(trace.meta.solver.t_end > 0.0)) trace.meta.solver.t_end = 1.0;
  return trace;
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << contents;
  if (!out) throw IoError("write failed: " + path.string());
}

template <typename WriteFn>
inline void write_file_with(const std::filesystem::path& path, WriteFn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  fn(out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace spikeloop::io
