#pragma once

// Checks a simulated scalar trace against a StabilityCertificate: the
// state bound |x(t,j)| <= gamma^j |x0| + 2 alpha at every sample, the
// dwell-time tau between consecutive jumps, and boundedness of the
// membrane potentials by the firing threshold. Violations are data, not
// errors; the report carries the worst margin per check.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spikeloop/analysis/certificate.hpp"
#include "spikeloop/errors.hpp"
#include "spikeloop/hybrid/time.hpp"
#include "spikeloop/hybrid/trace.hpp"
#include "spikeloop/lif/scenario.hpp"

namespace spikeloop::analysis {

struct Violation {
  hybrid::HybridTime when;
  std::string quantity;  // initial_condition | state_bound | dwell_time | xi_bound
  double observed = 0.0;
  double allowed = 0.0;
};

struct CertificationReport {
  bool initial_condition_ok = true;
  bool bound_ok = true;
  bool dwell_ok = true;
  bool xi_bounded_ok = true;
  // Worst slack of each check (negative iff violated; +inf when vacuous).
  double bound_margin = std::numeric_limits<double>::infinity();
  double dwell_margin = std::numeric_limits<double>::infinity();
  double xi_margin = std::numeric_limits<double>::infinity();
  std::vector<Violation> violations;

  bool all_ok() const {
    return initial_condition_ok && bound_ok && dwell_ok && xi_bounded_ok;
  }
};

/// Certification slack separating genuine violations from integrator noise.
inline double certification_slack(double x0) { return 1e-9 + 1e-7 * std::abs(x0); }

inline CertificationReport certify_trace(const hybrid::HybridTrace& trace,
                                         const StabilityCertificate& cert, double x0) {
  CertificationReport report;
  const double slack = certification_slack(x0);
  const double tol_state = trace.meta.solver.event_tol_state;
  const double tol_time = trace.meta.solver.event_tol_time;

  const double roa = cert.sigma * cert.psi;
  if (std::abs(x0) > roa * (1.0 + detail::kFeasibilityRelTol)) {
    report.initial_condition_ok = false;
    report.violations.push_back({{0.0, 0}, "initial_condition", std::abs(x0), roa});
  }

  trace.for_each_sample([&](double t, std::int64_t j, const hybrid::HybridState& q) {
    if (q.x.size() != 1)
      throw PreconditionError("certify_trace: certification covers scalar traces only");
    const double allowed =
        std::pow(cert.gamma, static_cast<double>(j)) * std::abs(x0) + 2.0 * cert.alpha + slack;
    const double margin = allowed - std::abs(q.x[0]);
    if (margin < report.bound_margin) report.bound_margin = margin;
    if (margin < 0.0) {
      if (report.bound_ok) report.violations.push_back({{t, j}, "state_bound", std::abs(q.x[0]), allowed});
      report.bound_ok = false;
    }
    const double xi_allowed = cert.delta + tol_state;
    const double xi_worst = std::max(q.xi1, q.xi2);
    if (xi_allowed - xi_worst < report.xi_margin) report.xi_margin = xi_allowed - xi_worst;
    if (xi_worst > xi_allowed) {
      if (report.xi_bounded_ok) report.violations.push_back({{t, j}, "xi_bound", xi_worst, xi_allowed});
      report.xi_bounded_ok = false;
    }
  });

  for (std::size_t k = 1; k < trace.jumps.size(); ++k) {
    const double gap = trace.jumps[k].t - trace.jumps[k - 1].t;
    const double margin = gap - (cert.tau - tol_time);
    if (margin < report.dwell_margin) report.dwell_margin = margin;
    if (margin < 0.0) {
      if (report.dwell_ok)
        report.violations.push_back(
            {{trace.jumps[k].t, trace.jumps[k].j_before}, "dwell_time", gap, cert.tau});
      report.dwell_ok = false;
    }
  }

  return report;
}

/// Largest state magnitude over samples with t >= t_cut (Euclidean norm
/// for vector plants). The window must contain at least one sample.
inline double ultimate_bound_estimate(const hybrid::HybridTrace& trace, double t_cut) {
  bool seen = false;
  double bound = 0.0;
  trace.for_each_sample([&](double t, std::int64_t, const hybrid::HybridState& q) {
    if (t < t_cut) return;
    seen = true;
    double norm_sq = 0.0;
    for (double v : q.x) norm_sq += v * v;
    bound = std::max(bound, std::sqrt(norm_sq));
  });
  if (!seen)
    throw PreconditionError("ultimate_bound_estimate: no samples at or after t_cut");
  return bound;
}

/// Minimum gap between consecutive jumps restricted to jumps at t >= t_cut;
/// empty when fewer than two jumps fall in the window.
inline std::optional<double> min_interspike(const hybrid::HybridTrace& trace, double t_cut) {
  std::optional<double> best;
  double prev = 0.0;
  bool have_prev = false;
  for (const auto& jump : trace.jumps) {
    if (jump.t < t_cut) continue;
    if (have_prev) {
      const double gap = jump.t - prev;
      if (!best || gap < *best) best = gap;
    }
    prev = jump.t;
    have_prev = true;
  }
  return best;
}

/// Equivalent b = c = 1 scenario for a scalar loop with positive gains:
/// the state rescales to z = c x and the spike amplitudes to b c alpha,
/// leaving leak rates, thresholds and all jump times unchanged.
inline lif::ClosedLoopScenario normalized_scalar_scenario(const lif::ClosedLoopScenario& s) {
  if (s.plant.n != 1)
    throw PreconditionError("normalized_scalar_scenario: plant must be scalar");
  const double b = s.plant.B[0];
  const double c = s.plant.C[0];
  if (!(b > 0.0 && c > 0.0))
    throw PreconditionError("normalized_scalar_scenario: gains must be positive");
  lif::ClosedLoopScenario out = s;
  out.plant = lif::PlantParams::scalar(s.plant.A[0]);
  out.neurons = lif::NeuronParams(b * c * s.neurons.alpha1, b * c * s.neurons.alpha2,
                                  s.neurons.mu1, s.neurons.mu2, s.neurons.delta1,
                                  s.neurons.delta2);
  out.q0.x[0] = c * s.q0.x[0];
  return out;
}

}  // namespace spikeloop::analysis
