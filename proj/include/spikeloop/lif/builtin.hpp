#pragma once

// The two built-in experiment configurations: a deterministic nominal run
// (symmetric neurons, x0 = 20) and an asymmetric run with seeded uniform
// disturbance and measurement-noise signals.

#include <cstdint>
#include <memory>

#include "spikeloop/lif/scenario.hpp"

namespace spikeloop::lif {

inline constexpr std::uint64_t kDefaultNoisySeed = 42;

inline ClosedLoopScenario fig3_nominal() {
  ClosedLoopScenario s{
      PlantParams::scalar(1.0),
      NeuronParams::symmetric(0.5, 0.5, 0.1),
      hybrid::HybridState::scalar(20.0),
      nullptr,
      nullptr,
      hybrid::SolverOptions{},
  };
  s.solver.t_end = 15.0;
  return s;
}

inline ClosedLoopScenario fig3_noisy_asym(std::uint64_t seed = kDefaultNoisySeed) {
  using signals::PiecewiseLinearSignal;
  ClosedLoopScenario s{
      PlantParams::scalar(1.0),
      NeuronParams(0.3, 0.5, 0.2, 0.5, 0.1, 0.2),
      hybrid::HybridState::scalar(20.0),
      std::make_shared<PiecewiseLinearSignal>(
          0.01, 0.1, PiecewiseLinearSignal::derive_stream_seed(seed, 1)),
      std::make_shared<PiecewiseLinearSignal>(
          0.01, 0.1, PiecewiseLinearSignal::derive_stream_seed(seed, 2)),
      hybrid::SolverOptions{},
  };
  s.solver.t_end = 15.0;
  return s;
}

}  // namespace spikeloop::lif
