#pragma once

#include <cstdint>

#include "spikeloop/errors.hpp"

namespace spikeloop::hybrid {

struct SolverOptions {
  double h = 1e-3;                // base integration step [s]
  double event_tol_state = 1e-9;  // guard residual tolerance at a localized event
  double event_tol_time = 1e-12;  // bisection interval tolerance [s]
  std::int64_t j_max = 1'000'000; // Zeno guard
  double t_end = 0.0;             // horizon [s]; must be set by the caller

  void validate() const {
    if (!(h > 0.0)) throw ConfigError("solver: h must be > 0");
    if (!(t_end > 0.0)) throw ConfigError("solver: t_end must be > 0");
    if (j_max < 1) throw ConfigError("solver: j_max must be >= 1");
    if (!(event_tol_state > 0.0)) throw ConfigError("solver: event_tol_state must be > 0");
    if (!(event_tol_time > 0.0)) throw ConfigError("solver: event_tol_time must be > 0");
  }
};

}  // namespace spikeloop::hybrid
