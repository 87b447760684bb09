#pragma once

// Closed forms for the scalar no-noise loop, used as independent oracles
// against the numerical simulator. With x(t_i) the post-jump plant state
// and both neurons freshly reset, on the following arc
//
//   x(t_i + dt)  = e^{a dt} x(t_i)
//   xi(t_i + dt) = (|x(t_i)| / (mu + a)) (e^{a dt} - e^{-mu dt})
//
// for the active neuron, and the next spike fires when xi reaches delta,
// no later than dt = (1/a) ln(delta (mu + a) / |x(t_i)| + 1).

#include <algorithm>
#include <cmath>

#include "spikeloop/errors.hpp"

namespace spikeloop::analysis {

/// Plant state dt seconds into an arc that starts at x_i.
inline double closed_form_state(double x_i, double a, double dt) {
  if (dt < 0.0) throw PreconditionError("closed_form_state: dt must be >= 0");
  return std::exp(a * dt) * x_i;
}

/// Active membrane potential dt seconds after a reset, for the scalar
/// no-noise loop with zero-initialized neurons. Requires mu + a > 0.
inline double closed_form_xi(double x_i, double a, double mu, double dt) {
  if (dt < 0.0) throw PreconditionError("closed_form_xi: dt must be >= 0");
  if (!(mu + a > 0.0)) throw PreconditionError("closed_form_xi: mu + a must be > 0");
  return std::abs(x_i) / (mu + a) * (std::exp(a * dt) - std::exp(-mu * dt));
}

/// Time from a reset until the next spike: the unique dt > 0 with
/// closed_form_xi(x_i, a, mu, dt) = delta. Solved by bisection on
/// [0, (1/a) ln(delta (mu+a)/|x_i| + 1)] followed by one Newton polish;
/// the upper bracket is guaranteed to contain the root.
inline double next_spike_time(double x_i, double a, double mu, double delta,
                              double tol = 1e-12) {
  if (x_i == 0.0)
    throw NoSpikeError("next_spike_time: x = 0, the solution never spikes again");
  if (!(a > 0.0)) throw PreconditionError("next_spike_time: a must be > 0");
  if (mu < 0.0) throw PreconditionError("next_spike_time: mu must be >= 0");
  if (!(delta > 0.0)) throw PreconditionError("next_spike_time: delta must be > 0");

  const double ax = std::abs(x_i);
  const double ub = std::log(delta * (mu + a) / ax + 1.0) / a;
  auto residual = [&](double dt) { return closed_form_xi(x_i, a, mu, dt) - delta; };

  double lo = 0.0;   // residual(0) = -delta < 0
  double hi = ub;    // residual(ub) >= 0
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (residual(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  double dt = 0.5 * (lo + hi);
  const double slope = ax / (mu + a) * (a * std::exp(a * dt) + mu * std::exp(-mu * dt));
  if (slope > 0.0) dt = std::clamp(dt - residual(dt) / slope, lo, hi);
  return dt;
}

}  // namespace spikeloop::analysis
