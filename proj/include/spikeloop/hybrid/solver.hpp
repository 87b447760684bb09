#pragma once

// Fixed-step RK4 flow with per-step guard bracketing. When a guard residual
// changes sign inside a step the crossing is localized by bisection with
// re-integration from the step start, the crossing sample closes the arc,
// and the jump map is applied at the localized state. Everything is
// deterministic for fixed inputs and options.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "spikeloop/errors.hpp"
#include "spikeloop/hybrid/options.hpp"
#include "spikeloop/hybrid/state.hpp"
#include "spikeloop/hybrid/system.hpp"
#include "spikeloop/hybrid/trace.hpp"

namespace spikeloop::hybrid {

namespace detail {

inline void require_finite(const HybridState& q, const char* where) {
  if (!q.finite()) {
    std::ostringstream msg;
    msg << "non-finite value in " << where;
    throw NumericalError(msg.str(), q.flattened());
  }
}

}  // namespace detail

/// One classical 4th-order Runge-Kutta step of size h from q at time t.
/// Throws NumericalError if a stage derivative or the result is non-finite.
inline HybridState integrate_flow(const HybridState& q, double h, const FlowFn& f,
                                  double t = 0.0) {
  if (!(h > 0.0)) throw PreconditionError("integrate_flow: h must be > 0");

  const HybridState k1 = f(t, q);
  detail::require_finite(k1, "flow derivative (stage 1)");

  HybridState stage = q;
  detail::add_scaled(stage, k1, 0.5 * h);
  const HybridState k2 = f(t + 0.5 * h, stage);
  detail::require_finite(k2, "flow derivative (stage 2)");

  stage = q;
  detail::add_scaled(stage, k2, 0.5 * h);
  const HybridState k3 = f(t + 0.5 * h, stage);
  detail::require_finite(k3, "flow derivative (stage 3)");

  stage = q;
  detail::add_scaled(stage, k3, h);
  const HybridState k4 = f(t + h, stage);
  detail::require_finite(k4, "flow derivative (stage 4)");

  HybridState next = q;
  detail::add_scaled(next, k1, h / 6.0);
  detail::add_scaled(next, k2, h / 3.0);
  detail::add_scaled(next, k3, h / 3.0);
  detail::add_scaled(next, k4, h / 6.0);
  detail::require_finite(next, "integrated state");
  return next;
}

/// Localizes an upward guard crossing inside one integration step by
/// bisection, re-integrating from (t_lo, q_lo) for every candidate time.
/// Requires guard(q_lo) < 0 <= guard(q_hi). The returned state satisfies
/// guard(q_star) >= -event_tol_state.
inline std::pair<double, HybridState> locate_guard_crossing(
    const HybridState& q_lo, double t_lo, const HybridState& q_hi, double t_hi,
    const std::function<double(const HybridState&)>& guard, const FlowFn& f,
    double event_tol_state = 1e-9, double event_tol_time = 1e-12) {
  if (!(t_lo < t_hi)) throw PreconditionError("locate_guard_crossing: t_lo < t_hi required");
  const double g_lo = guard(q_lo);
  const double g_hi = guard(q_hi);
  if (!(g_lo < 0.0) || !(g_hi >= 0.0))
    throw PreconditionError("locate_guard_crossing: bracket invalid (need guard(q_lo) < 0 <= guard(q_hi))");

  double lo = t_lo;
  double hi = t_hi;
  HybridState q_at_hi = q_hi;
  while (hi - lo > event_tol_time) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval exhausted in double precision
    HybridState q_mid = integrate_flow(q_lo, mid - t_lo, f, t_lo);
    const double g_mid = guard(q_mid);
    if (std::abs(g_mid) <= event_tol_state) return {mid, std::move(q_mid)};
    if (g_mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
      q_at_hi = std::move(q_mid);
    }
  }
  return {hi, std::move(q_at_hi)};
}

/// Runs the hybrid system from q0: flow on C in steps of opts.h with guard
/// localization, jump on D, until t >= t_end or j >= j_max.
inline HybridTrace simulate(const HybridSystemDef& sys, const HybridState& q0,
                            const SolverOptions& opts) {
  opts.validate();
  detail::require_finite(q0, "initial state");

  HybridTrace trace;
  trace.meta.solver = opts;

  double t = 0.0;
  std::int64_t j = 0;
  HybridState q = q0;
  trace.arcs.push_back(Arc{j, {Sample{t, q}}});

  auto finish = [&](TerminationReason reason) {
    trace.meta.termination = reason;
    return trace;
  };

  // Applies the jump for guard `active` at the current (t, q); the current
  // arc must already end with the sample (t, q).
  auto perform_jump = [&](int active, bool simultaneous) {
    JumpRecord rec;
    rec.t = t;
    rec.j_before = j;
    rec.active_guard = active;
    rec.state_before = q;
    rec.state_after = sys.jump_map(q, active);
    rec.simultaneous_guards = simultaneous;
    detail::require_finite(rec.state_after, "jump map image");
    q = rec.state_after;
    ++j;
    trace.jumps.push_back(std::move(rec));
    trace.arcs.push_back(Arc{j, {Sample{t, q}}});
  };

  while (true) {
    // Discrete phase: jump while the state sits in the jump set. Handles an
    // initial condition in D and chained jumps after a simultaneous hit.
    for (;;) {
      const auto r = sys.guard_values(q);
      int active = 0;
      if (r[0] >= 0.0) {
        active = 1;
      } else if (r[1] >= 0.0) {
        active = 2;
      }
      if (active == 0) break;
      const bool simultaneous =
          r[0] >= -opts.event_tol_state && r[1] >= -opts.event_tol_state;
      perform_jump(active, simultaneous);
      if (j >= opts.j_max) return finish(TerminationReason::jump_limit);
    }

    if (t >= opts.t_end) return finish(TerminationReason::time_horizon);

    if (!sys.in_flow_set(q)) return finish(TerminationReason::flow_escape);

    // Continuous phase: one RK4 step, capped at the horizon.
    const double step = std::min(opts.h, opts.t_end - t);
    const double t_next = (step < opts.h) ? opts.t_end : t + step;
    HybridState q_next = integrate_flow(q, step, sys.flow_map, t);

    const auto r_now = sys.guard_values(q);
    const auto r_next = sys.guard_values(q_next);
    const bool crossed1 = r_now[0] < 0.0 && r_next[0] >= 0.0;
    const bool crossed2 = r_now[1] < 0.0 && r_next[1] >= 0.0;

    if (!crossed1 && !crossed2) {
      t = t_next;
      q = std::move(q_next);
      trace.arcs.back().samples.push_back(Sample{t, q});
      continue;
    }

    // Localize each crossed guard and fire the earliest; ties within the
    // bisection time tolerance go to guard 1.
    double t_star = 0.0;
    HybridState q_star;
    int active = 0;
    std::array<std::pair<double, HybridState>, 2> hits;
    if (crossed1)
      hits[0] = locate_guard_crossing(
          q, t, q_next, t_next, [&](const HybridState& s) { return sys.guard_values(s)[0]; },
          sys.flow_map, opts.event_tol_state, opts.event_tol_time);
    if (crossed2)
      hits[1] = locate_guard_crossing(
          q, t, q_next, t_next, [&](const HybridState& s) { return sys.guard_values(s)[1]; },
          sys.flow_map, opts.event_tol_state, opts.event_tol_time);

    if (crossed1 && crossed2) {
      if (hits[1].first < hits[0].first - opts.event_tol_time) {
        active = 2;
      } else {
        active = 1;
      }
    } else {
      active = crossed1 ? 1 : 2;
    }
    t_star = hits[active - 1].first;
    q_star = std::move(hits[active - 1].second);

    t = t_star;
    q = std::move(q_star);
    trace.arcs.back().samples.push_back(Sample{t, q});

    const auto r_star = sys.guard_values(q);
    const bool simultaneous = r_star[0] >= -opts.event_tol_state &&
                              r_star[1] >= -opts.event_tol_state;
    perform_jump(active, simultaneous);
    if (j >= opts.j_max) return finish(TerminationReason::jump_limit);
  }
}

}  // namespace spikeloop::hybrid
