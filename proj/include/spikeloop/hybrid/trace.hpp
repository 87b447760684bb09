#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spikeloop/hybrid/options.hpp"
#include "spikeloop/hybrid/state.hpp"
#include "spikeloop/hybrid/time.hpp"

namespace spikeloop::hybrid {

enum class TerminationReason { time_horizon, jump_limit, flow_escape };

inline const char* to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::time_horizon: return "time_horizon";
    case TerminationReason::jump_limit: return "jump_limit";
    case TerminationReason::flow_escape: return "flow_escape";
  }
  return "unknown";
}

struct Sample {
  double t;
  HybridState q;
};

/// One maximal flow interval at a fixed jump count j.
struct Arc {
  std::int64_t j = 0;
  std::vector<Sample> samples;
};

struct JumpRecord {
  double t = 0.0;
  std::int64_t j_before = 0;
  int active_guard = 1;  // 1 or 2
  HybridState state_before;
  HybridState state_after;
  bool simultaneous_guards = false;  // both residuals at threshold when fired
};

struct TraceMeta {
  SolverOptions solver;
  std::uint64_t scenario_hash = 0;
  TerminationReason termination = TerminationReason::time_horizon;
};

/// A hybrid solution: ordered flow arcs separated by jump records.
/// Arc k ends at the time of jump k; arc k+1 starts there with j+1.
struct HybridTrace {
  std::vector<Arc> arcs;
  std::vector<JumpRecord> jumps;
  TraceMeta meta;

  std::int64_t jump_count() const { return static_cast<std::int64_t>(jumps.size()); }

  HybridTime final_time() const {
    if (arcs.empty() || arcs.back().samples.empty()) return {};
    return {arcs.back().samples.back().t, arcs.back().j};
  }

  /// Visits every sample in hybrid-time order as fn(t, j, state).
  template <typename Fn>
  void for_each_sample(Fn&& fn) const {
    for (const Arc& arc : arcs)
      for (const Sample& s : arc.samples) fn(s.t, arc.j, s.q);
  }
};

}  // namespace spikeloop::hybrid
