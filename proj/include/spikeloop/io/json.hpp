#pragma once

// JSON serialization: scenario files (schema `spec: 1`), certificates,
// certification reports and run manifests.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spikeloop/analysis/certificate.hpp"
#include "spikeloop/analysis/certify.hpp"
#include "spikeloop/errors.hpp"
#include "spikeloop/io/format.hpp"
#include "spikeloop/lif/scenario.hpp"
#include "spikeloop/signals/piecewise_linear.hpp"
#include "spikeloop/version.hpp"

namespace spikeloop::io {

using nlohmann::json;

namespace detail {

inline const json& require_field(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string("scenario: missing '") + key + "' in " + where);
  return *it;
}

inline double number(const json& j, const char* key, const char* where) {
  const json& v = require_field(j, key, where);
  if (!v.is_number()) throw ConfigError(std::string("scenario: '") + key + "' must be a number");
  return v.get<double>();
}

inline std::vector<double> number_list(const json& v, const char* what) {
  if (!v.is_array()) throw ConfigError(std::string("scenario: ") + what + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(std::string("scenario: ") + what + " has a non-number");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace detail

inline std::shared_ptr<const signals::PiecewiseLinearSignal> signal_from_json(const json& j,
                                                                              const char* where) {
  const auto type = detail::require_field(j, "type", where).get<std::string>();
  if (type != "piecewise_linear_uniform")
    throw ConfigError(std::string("scenario: unknown signal type '") + type + "'");
  const double grid_step = detail::number(j, "grid_step", where);
  const double amplitude = detail::number(j, "amplitude", where);
  const auto seed = detail::require_field(j, "seed", where).get<std::uint64_t>();
  return std::make_shared<signals::PiecewiseLinearSignal>(grid_step, amplitude, seed);
}

inline json signal_to_json(const signals::PiecewiseLinearSignal& sig) {
  return json{{"type", "piecewise_linear_uniform"},
              {"grid_step", sig.grid_step()},
              {"amplitude", sig.amplitude()},
              {"seed", sig.seed()}};
}

inline lif::ClosedLoopScenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario: top level must be an object");
  const auto& spec = detail::require_field(j, "spec", "scenario");
  if (!spec.is_number_integer() || spec.get<int>() != kScenarioSchemaVersion)
    throw ConfigError("scenario: unsupported schema version (expected spec: 1)");

  const json& plant_j = detail::require_field(j, "plant", "scenario");
  const json& a_j = detail::require_field(plant_j, "A", "plant");
  if (!a_j.is_array() || a_j.empty()) throw ConfigError("scenario: plant.A must be a matrix");
  const std::size_t n = a_j.size();
  std::vector<double> a_flat;
  a_flat.reserve(n * n);
  for (const auto& row : a_j) {
    const auto vals = detail::number_list(row, "plant.A row");
    if (vals.size() != n) throw ConfigError("scenario: plant.A must be square");
    a_flat.insert(a_flat.end(), vals.begin(), vals.end());
  }
  lif::PlantParams plant(n, std::move(a_flat),
                         detail::number_list(detail::require_field(plant_j, "B", "plant"), "plant.B"),
                         detail::number_list(detail::require_field(plant_j, "C", "plant"), "plant.C"));

  const json& nj = detail::require_field(j, "neurons", "scenario");
  lif::NeuronParams neurons(detail::number(nj, "alpha1", "neurons"),
                            detail::number(nj, "alpha2", "neurons"),
                            detail::number(nj, "mu1", "neurons"),
                            detail::number(nj, "mu2", "neurons"),
                            detail::number(nj, "delta1", "neurons"),
                            detail::number(nj, "delta2", "neurons"));

  const json& ij = detail::require_field(j, "initial", "scenario");
  hybrid::HybridState q0(detail::number_list(detail::require_field(ij, "x", "initial"), "initial.x"),
                         detail::number(ij, "xi1", "initial"),
                         detail::number(ij, "xi2", "initial"));

  const json& sj = detail::require_field(j, "solver", "scenario");
  hybrid::SolverOptions solver;
  solver.h = detail::number(sj, "h", "solver");
  solver.t_end = detail::number(sj, "t_end", "solver");
  if (sj.contains("j_max")) solver.j_max = sj.at("j_max").get<std::int64_t>();
  if (sj.contains("event_tol_state")) solver.event_tol_state = sj.at("event_tol_state").get<double>();
  if (sj.contains("event_tol_time")) solver.event_tol_time = sj.at("event_tol_time").get<double>();

  lif::ClosedLoopScenario scenario{std::move(plant), neurons, std::move(q0),
                                   nullptr, nullptr, solver};
  if (j.contains("disturbance"))
    scenario.disturbance = signal_from_json(j.at("disturbance"), "disturbance");
  if (j.contains("noise")) scenario.noise = signal_from_json(j.at("noise"), "noise");
  scenario.validate();
  return scenario;
}

inline json scenario_to_json(const lif::ClosedLoopScenario& s) {
  json a = json::array();
  for (std::size_t i = 0; i < s.plant.n; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < s.plant.n; ++k) row.push_back(s.plant.A[i * s.plant.n + k]);
    a.push_back(std::move(row));
  }
  json out{
      {"spec", kScenarioSchemaVersion},
      {"plant", {{"A", std::move(a)}, {"B", s.plant.B}, {"C", s.plant.C}}},
      {"neurons",
       {{"alpha1", s.neurons.alpha1},
        {"alpha2", s.neurons.alpha2},
        {"mu1", s.neurons.mu1},
        {"mu2", s.neurons.mu2},
        {"delta1", s.neurons.delta1},
        {"delta2", s.neurons.delta2}}},
      {"initial", {{"x", s.q0.x}, {"xi1", s.q0.xi1}, {"xi2", s.q0.xi2}}},
      {"solver",
       {{"h", s.solver.h},
        {"t_end", s.solver.t_end},
        {"j_max", s.solver.j_max},
        {"event_tol_state", s.solver.event_tol_state},
        {"event_tol_time", s.solver.event_tol_time}}},
  };
  if (s.disturbance) out["disturbance"] = signal_to_json(*s.disturbance);
  if (s.noise) out["noise"] = signal_to_json(*s.noise);
  return out;
}

inline json certificate_to_json(const analysis::StabilityCertificate& c) {
  return json{{"a", c.a},         {"alpha", c.alpha},         {"mu", c.mu},
              {"rho", c.rho},     {"sigma", c.sigma},         {"delta", c.delta},
              {"psi", c.psi},     {"delta_max", c.delta_max}, {"gamma", c.gamma},
              {"upsilon", c.upsilon}, {"tau", c.tau}};
}

/// Certificate JSON with floats written at 17 significant digits.
inline std::string certificate_to_json_text(const analysis::StabilityCertificate& c) {
  std::ostringstream os;
  os << "{\n";
  const std::pair<const char*, double> fields[] = {
      {"a", c.a},     {"alpha", c.alpha},         {"mu", c.mu},
      {"rho", c.rho}, {"sigma", c.sigma},         {"delta", c.delta},
      {"psi", c.psi}, {"delta_max", c.delta_max}, {"gamma", c.gamma},
      {"upsilon", c.upsilon}, {"tau", c.tau}};
  bool first = true;
  for (const auto& [key, value] : fields) {
    if (!first) os << ",\n";
    first = false;
    os << "  \"" << key << "\": " << format_double(value);
  }
  os << "\n}\n";
  return os.str();
}

inline analysis::StabilityCertificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("certificate: top level must be an object");
  analysis::StabilityCertificate c;
  c.a = detail::number(j, "a", "certificate");
  c.alpha = detail::number(j, "alpha", "certificate");
  c.mu = detail::number(j, "mu", "certificate");
  c.rho = detail::number(j, "rho", "certificate");
  c.sigma = detail::number(j, "sigma", "certificate");
  c.delta = detail::number(j, "delta", "certificate");
  c.psi = detail::number(j, "psi", "certificate");
  c.delta_max = detail::number(j, "delta_max", "certificate");
  c.gamma = detail::number(j, "gamma", "certificate");
  c.upsilon = detail::number(j, "upsilon", "certificate");
  c.tau = detail::number(j, "tau", "certificate");
  return c;
}

inline json report_to_json(const analysis::CertificationReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations)
    violations.push_back(json{{"t", v.when.t},
                              {"j", v.when.j},
                              {"quantity", v.quantity},
                              {"observed", v.observed},
                              {"allowed", v.allowed}});
  return json{{"initial_condition_ok", r.initial_condition_ok},
              {"bound_ok", r.bound_ok},
              {"dwell_ok", r.dwell_ok},
              {"xi_bounded_ok", r.xi_bounded_ok},
              {"bound_margin", r.bound_margin},
              {"dwell_margin", r.dwell_margin},
              {"xi_margin", r.xi_margin},
              {"violations", std::move(violations)}};
}

/// Report JSON with floats at 17 significant digits. Infinite margins
/// (vacuous checks) serialize as null, matching the nlohmann convention.
inline std::string report_to_json_text(const analysis::CertificationReport& r) {
  auto number_or_null = [](double v) {
    return std::isfinite(v) ? format_double(v) : std::string("null");
  };
  std::ostringstream os;
  os << "{\n";
  os << "  \"initial_condition_ok\": " << (r.initial_condition_ok ? "true" : "false") << ",\n";
  os << "  \"bound_ok\": " << (r.bound_ok ? "true" : "false") << ",\n";
  os << "  \"dwell_ok\": " << (r.dwell_ok ? "true" : "false") << ",\n";
  os << "  \"xi_bounded_ok\": " << (r.xi_bounded_ok ? "true" : "false") << ",\n";
  os << "  \"bound_margin\": " << number_or_null(r.bound_margin) << ",\n";
  os << "  \"dwell_margin\": " << number_or_null(r.dwell_margin) << ",\n";
  os << "  \"xi_margin\": " << number_or_null(r.xi_margin) << ",\n";
  os << "  \"violations\": [";
  for (std::size_t i = 0; i < r.violations.size(); ++i) {
    const auto& v = r.violations[i];
    os << (i == 0 ? "\n" : ",\n");
    os << "    {\"t\": " << format_double(v.when.t) << ", \"j\": " << v.when.j
       << ", \"quantity\": \"" << v.quantity << "\", \"observed\": " << format_double(v.observed)
       << ", \"allowed\": " << format_double(v.allowed) << "}";
  }
  os << (r.violations.empty() ? "]\n" : "\n  ]\n");
  os << "}\n";
  return os.str();
}

/// FNV-1a 64-bit hash, used to fingerprint scenario content in manifests.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace spikeloop::io
