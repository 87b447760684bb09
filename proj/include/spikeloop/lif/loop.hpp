#pragma once

// The closed loop: plant flow plus the two leaky integrate-and-fire
// neuron potentials, their threshold guards, and the impulsive jump maps.
// Neuron 1 integrates max(0, y) and fires a negative spike (x+ = x - B a1);
// neuron 2 integrates max(0, -y) and fires a positive one (x+ = x + B a2).

#include <algorithm>
#include <array>
#include <utility>

#include "spikeloop/errors.hpp"
#include "spikeloop/hybrid/state.hpp"
#include "spikeloop/hybrid/system.hpp"
#include "spikeloop/lif/params.hpp"
#include "spikeloop/lif/scenario.hpp"

namespace spikeloop::lif {

/// Flow derivative at q with disturbance value v (state-additive) and
/// measurement noise w (output-additive): y = Cx + w and
/// d/dt (x, xi1, xi2) = (Ax + v, -mu1 xi1 + max(0, y), -mu2 xi2 + max(0, -y)).
inline hybrid::HybridState flow_map(const hybrid::HybridState& q, const PlantParams& plant,
                                    const NeuronParams& neurons, double v = 0.0,
                                    double w = 0.0) {
  hybrid::HybridState d;
  d.x.resize(plant.n);
  plant.state_derivative(q.x, d.x);
  for (double& dx : d.x) dx += v;
  const double y = plant.output(q.x) + w;
  d.xi1 = -neurons.mu1 * q.xi1 + std::max(0.0, y);
  d.xi2 = -neurons.mu2 * q.xi2 + std::max(0.0, -y);
  return d;
}

/// Residuals (xi1 - delta1, xi2 - delta2); the state is in the jump set
/// iff max residual >= 0 and in the flow set iff max residual <= 0.
inline std::array<double, 2> guard_residuals(const hybrid::HybridState& q,
                                             const NeuronParams& neurons) {
  return {q.xi1 - neurons.delta1, q.xi2 - neurons.delta2};
}

/// Impulsive reset for the firing neuron: displaces the plant state by
/// -B alpha1 (active = 1) or +B alpha2 (active = 2), zeroes the firing
/// potential and leaves the other one untouched.
inline hybrid::HybridState jump_map(const hybrid::HybridState& q, int active,
                                    const PlantParams& plant, const NeuronParams& neurons,
                                    double event_tol_state = 1e-9) {
  if (active != 1 && active != 2)
    throw PreconditionError("jump_map: active guard must be 1 or 2");
  const auto r = guard_residuals(q, neurons);
  if (r[active - 1] < -event_tol_state)
    throw PreconditionError("jump_map: active neuron is below threshold");

  hybrid::HybridState next = q;
  if (active == 1) {
    for (std::size_t i = 0; i < plant.n; ++i) next.x[i] = q.x[i] - plant.B[i] * neurons.alpha1;
    next.xi1 = 0.0;
  } else {
    for (std::size_t i = 0; i < plant.n; ++i) next.x[i] = q.x[i] + plant.B[i] * neurons.alpha2;
    next.xi2 = 0.0;
  }
  return next;
}

/// Wires the scenario into a HybridSystemDef. Time-varying signals are
/// sampled by the flow closure at integrator stage times.
inline hybrid::HybridSystemDef build_hybrid_system(const ClosedLoopScenario& scenario) {
  scenario.validate();

  hybrid::HybridSystemDef sys;
  const PlantParams plant = scenario.plant;
  const NeuronParams neurons = scenario.neurons;
  const auto disturbance = scenario.disturbance;
  const auto noise = scenario.noise;
  const double event_tol = scenario.solver.event_tol_state;

  sys.flow_map = [plant, neurons, disturbance, noise](double t, const hybrid::HybridState& q) {
    const double v = disturbance ? disturbance->sample(t) : 0.0;
    const double w = noise ? noise->sample(t) : 0.0;
    return flow_map(q, plant, neurons, v, w);
  };
  sys.guard_values = [neurons](const hybrid::HybridState& q) {
    return guard_residuals(q, neurons);
  };
  sys.jump_map = [plant, neurons, event_tol](const hybrid::HybridState& q, int active) {
    return jump_map(q, active, plant, neurons, event_tol);
  };
  return sys;
}

}  // namespace spikeloop::lif
