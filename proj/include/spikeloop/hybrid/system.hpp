#pragma once

#include <array>
#include <functional>

#include "spikeloop/hybrid/state.hpp"

namespace spikeloop::hybrid {

/// Right-hand side of the flow; time is threaded so closures over
/// time-varying signals can sample at integrator stage times.
using FlowFn = std::function<HybridState(double t, const HybridState& q)>;

/// Per-guard residuals; guard ell fires on an upward crossing of residual
/// ell through zero. The jump structure is the union of the two guards.
using GuardFn = std::function<std::array<double, 2>(const HybridState& q)>;

/// Jump map; `active` is the firing guard index (1 or 2).
using JumpFn = std::function<HybridState(const HybridState& q, int active)>;

struct HybridSystemDef {
  FlowFn flow_map;
  GuardFn guard_values;
  JumpFn jump_map;
  /// Optional; defaults to "all guard residuals <= 0".
  std::function<bool(const HybridState& q)> flow_set_test;

  bool in_flow_set(const HybridState& q) const {
    if (flow_set_test) return flow_set_test(q);
    const auto r = guard_values(q);
    return r[0] <= 0.0 && r[1] <= 0.0;
  }

  bool in_jump_set(const HybridState& q) const {
    const auto r = guard_values(q);
    return r[0] >= 0.0 || r[1] >= 0.0;
  }
};

}  // namespace spikeloop::hybrid
