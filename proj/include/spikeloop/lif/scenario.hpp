#pragma once

#include <memory>

#include "spikeloop/errors.hpp"
#include "spikeloop/hybrid/options.hpp"
#include "spikeloop/hybrid/state.hpp"
#include "spikeloop/lif/params.hpp"
#include "spikeloop/signals/piecewise_linear.hpp"

namespace spikeloop::lif {

/// Everything needed to run one closed-loop experiment. Disturbance enters
/// the plant equation only; noise enters the measured output only.
struct ClosedLoopScenario {
  PlantParams plant;
  NeuronParams neurons;
  hybrid::HybridState q0;
  std::shared_ptr<const signals::PiecewiseLinearSignal> disturbance;  // optional
  std::shared_ptr<const signals::PiecewiseLinearSignal> noise;        // optional
  hybrid::SolverOptions solver;

  void validate() const {
    if (q0.x.size() != plant.n)
      throw ConfigError("scenario: initial state dimension does not match plant");
    if (q0.xi1 < 0.0 || q0.xi2 < 0.0)
      throw ConfigError("scenario: membrane potentials must start >= 0");
    if (!q0.finite()) throw ConfigError("scenario: initial state must be finite");
    solver.validate();
  }
};

}  // namespace spikeloop::lif
