#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spikeloop/hybrid/trace.hpp"
#include "spikeloop/version.hpp"

namespace spikeloop::io {

/// Record of one CLI run: inputs, outputs and summary statistics. Written
/// last, so every listed output exists when the manifest does.
struct RunManifest {
  std::string scenario;            // path or builtin name
  std::uint64_t scenario_hash = 0; // FNV-1a of the scenario JSON
  hybrid::SolverOptions solver;
  std::vector<std::string> outputs;
  double runtime_seconds = 0.0;
  // summary
  std::int64_t jump_count = 0;
  std::string termination;
  std::optional<double> ultimate_bound;
  std::optional<double> min_interspike;
  std::optional<std::string> certification_verdict;
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
  char hash_hex[19];
  std::snprintf(hash_hex, sizeof(hash_hex), "0x%016llx",
                static_cast<unsigned long long>(m.scenario_hash));
  nlohmann::json summary{{"jump_count", m.jump_count}, {"termination", m.termination}};
  if (m.ultimate_bound) summary["ultimate_bound"] = *m.ultimate_bound;
  if (m.min_interspike) summary["min_interspike"] = *m.min_interspike;
  if (m.certification_verdict) summary["certification_verdict"] = *m.certification_verdict;
  return nlohmann::json{
      {"scenario", m.scenario},
      {"scenario_hash", hash_hex},
      {"solver",
       {{"h", m.solver.h},
        {"t_end", m.solver.t_end},
        {"j_max", m.solver.j_max},
        {"event_tol_state", m.solver.event_tol_state},
        {"event_tol_time", m.solver.event_tol_time}}},
      {"outputs", m.outputs},
      {"versions", {{"artifact", std::string(kVersion)}, {"scenario_schema", kScenarioSchemaVersion}}},
      {"runtime_seconds", m.runtime_seconds},
      {"summary", std::move(summary)},
  };
}

}  // namespace spikeloop::io
