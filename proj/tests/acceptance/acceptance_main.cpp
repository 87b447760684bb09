// Acceptance suite: every release gate as an executable check, one
// PASS/FAIL line each. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "spikeloop/spikeloop.hpp"
#include "trace_checks.hpp"

using namespace spikeloop;
using hybrid::HybridState;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  if (!ok) ++g_failures;
}

bool in_window(double v, double lo, double hi) { return v >= lo && v <= hi; }

hybrid::HybridTrace run(const lif::ClosedLoopScenario& s) {
  return hybrid::simulate(lif::build_hybrid_system(s), s.q0, s.solver);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Nominal reproduction: ultimate bound 0.375 +- 0.02 (t >= 7.5), minimum
//    inter-spike 0.005 +- 5e-4 over the run and 0.341 +- 0.02 at steady state.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto trace = run(lif::fig3_nominal());
  const double runtime = seconds_since(t0);

  const double bound = analysis::ultimate_bound_estimate(trace, 7.5);
  const double gap_all = analysis::min_interspike(trace, 0.0).value_or(-1.0);
  const double gap_steady = analysis::min_interspike(trace, 7.5).value_or(-1.0);

  std::ostringstream detail;
  detail << "ultimate_bound=" << bound << " min_interspike=" << gap_all
         << " steady=" << gap_steady << " runtime=" << runtime << "s";
  const bool ok = in_window(bound, 0.355, 0.395) && in_window(gap_all, 0.0045, 0.0055) &&
                  in_window(gap_steady, 0.321, 0.361) && runtime < 10.0;
  report(1, "nominal reproduction", ok, detail.str());
}

// 2. Certified scenario: every certificate check passes with positive margin.
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cert = analysis::design_certificate(1.0, 0.5, 0.5, 0.5, 0.6, 1.0 / 6.0);

  lif::ClosedLoopScenario scenario{
      lif::PlantParams::scalar(1.0),
      lif::NeuronParams::symmetric(0.5, 0.5, 1.0 / 6.0),
      HybridState::scalar(0.36),
      nullptr,
      nullptr,
      hybrid::SolverOptions{},
  };
  scenario.solver.t_end = 15.0;
  const auto trace = run(scenario);
  const auto rep = analysis::certify_trace(trace, cert, 0.36);
  const double runtime = seconds_since(t0);

  std::ostringstream detail;
  detail << "bound_margin=" << rep.bound_margin << " dwell_margin=" << rep.dwell_margin
         << " xi_margin=" << rep.xi_margin << " runtime=" << runtime << "s";
  const bool ok = rep.all_ok() && rep.bound_margin > 0.0 && runtime < 5.0;
  report(2, "certified scenario", ok, detail.str());
}

// 3. Oracle equivalence: simulated jump times track the chained closed-form
//    spike-time oracle within 1e-6 s of cumulative drift per jump.
void criterion_3() {
  double worst = 0.0;
  bool ok = true;
  for (double x0 : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    auto scenario = lif::fig3_nominal();
    scenario.q0 = HybridState::scalar(x0);
    scenario.solver.t_end = 30.0;
    const auto trace = run(scenario);
    if (trace.jump_count() < 50) {
      ok = false;
      break;
    }
    double t_oracle = 0.0;
    double x = x0;
    for (int k = 0; k < 50; ++k) {
      const double dt = analysis::next_spike_time(x, 1.0, 0.5, 0.1);
      t_oracle += dt;
      const double x_pre = analysis::closed_form_state(x, 1.0, dt);
      x = x_pre > 0.0 ? x_pre - 0.5 : x_pre + 0.5;
      const double err = std::abs(trace.jumps[k].t - t_oracle);
      worst = std::max(worst, err / (k + 1));
      if (err > 1e-6 * (k + 1)) ok = false;
    }
  }
  std::ostringstream detail;
  detail << "worst per-jump drift=" << worst << "s over x0 in {0.5,1,2,5,10,20}";
  report(3, "oracle equivalence", ok, detail.str());
}

// 4. Jump arithmetic: at every jump the recorded state_after is bitwise the
//    jump-map image of state_before (the exact +-B alpha displacement), and
//    the firing residual is within 1e-9 of zero.
void criterion_4() {
  bool ok = true;
  std::int64_t jumps_checked = 0;
  auto check_trace = [&](const lif::ClosedLoopScenario& scenario) {
    const auto trace = run(scenario);
    for (const auto& jump : trace.jumps) {
      const auto image = lif::jump_map(jump.state_before, jump.active_guard, scenario.plant,
                                       scenario.neurons);
      if (!(image == jump.state_after)) ok = false;
      const auto r = lif::guard_residuals(jump.state_before, scenario.neurons);
      if (std::abs(r[jump.active_guard - 1]) > 1e-9) ok = false;
      ++jumps_checked;
    }
  };
  check_trace(lif::fig3_nominal());
  check_trace(lif::fig3_noisy_asym());
  std::ostringstream detail;
  detail << jumps_checked << " jumps checked bitwise";
  report(4, "jump arithmetic", ok, detail.str());
}

// 5. Scaling homogeneity: scaling (x0, alpha, delta) by c preserves jump
//    times to 1e-6 s and scales every x sample by c to 1e-6 relative error.
void criterion_5() {
  const auto base_scenario = lif::fig3_nominal();
  const auto base = run(base_scenario);
  bool ok = true;
  double worst_time = 0.0, worst_rel = 0.0;
  for (double c : {0.5, 2.0, 10.0}) {
    auto scaled_scenario = base_scenario;
    scaled_scenario.neurons = lif::NeuronParams::symmetric(0.5 * c, 0.5, 0.1 * c);
    scaled_scenario.q0 = HybridState::scalar(20.0 * c);
    const auto scaled = run(scaled_scenario);
    if (scaled.jump_count() != base.jump_count() || scaled.arcs.size() != base.arcs.size()) {
      ok = false;
      continue;
    }
    for (std::size_t k = 0; k < base.jumps.size(); ++k) {
      const double dt = std::abs(scaled.jumps[k].t - base.jumps[k].t);
      worst_time = std::max(worst_time, dt);
      if (dt > 1e-6) ok = false;
    }
    for (std::size_t a = 0; a < base.arcs.size(); ++a) {
      if (scaled.arcs[a].samples.size() != base.arcs[a].samples.size()) {
        ok = false;
        break;
      }
      for (std::size_t i = 0; i < base.arcs[a].samples.size(); ++i) {
        const double expected = c * base.arcs[a].samples[i].q.x[0];
        const double got = scaled.arcs[a].samples[i].q.x[0];
        const double rel = std::abs(got - expected) / std::max(1e-12, std::abs(expected));
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-6) ok = false;
      }
    }
  }
  std::ostringstream detail;
  detail << "worst jump-time shift=" << worst_time << "s, worst relative state error="
         << worst_rel;
  report(5, "scaling homogeneity", ok, detail.str());
}

// 6. Design round-trip: rho recovery to 1e-10 and the certificate identity
//    gamma^2 + (1-sigma)(rho+1)^2 = 1 to 1e-12, over 100 random draws.
void criterion_6() {
  std::mt19937_64 rng(20240605);
  std::uniform_real_distribution<double> rho_dist(0.01, 0.99);
  std::uniform_real_distribution<double> alpha_dist(0.05, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool ok = true;
  double worst_rho = 0.0, worst_identity = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double rho = rho_dist(rng);
    const double alpha = alpha_dist(rng);
    const double psi = analysis::roa_radius(rho, alpha);
    const double rho_back = analysis::solve_rho_for_roa(alpha, psi);
    worst_rho = std::max(worst_rho, std::abs(rho_back - rho));
    if (std::abs(rho_back - rho) > 1e-10) ok = false;

    const double lo = analysis::sigma_lower_bound(rho);
    const double sigma = lo + (1.0 - lo) * 0.999 * unit(rng);
    const auto cert =
        analysis::design_certificate(1.0, alpha, 0.5, rho, sigma, 0.5 * rho * alpha / 1.5);
    const double identity =
        cert.gamma * cert.gamma + (1.0 - sigma) * (rho + 1.0) * (rho + 1.0) - 1.0;
    worst_identity = std::max(worst_identity, std::abs(identity));
    if (std::abs(identity) > 1e-12) ok = false;
  }
  std::ostringstream detail;
  detail << "worst |rho error|=" << worst_rho << ", worst |identity residual|="
         << worst_identity;
  report(6, "design round-trip", ok, detail.str());
}

// 7. Integrator accuracy: flow matches e^{a dt} x_i to 1e-7 relative error
//    over arcs of length 1 for a in {-1, 0.3, 1, 3} at h = 1e-3.
void criterion_7() {
  bool ok = true;
  double worst = 0.0;
  for (double a : {-1.0, 0.3, 1.0, 3.0}) {
    auto flow = [a](double, const HybridState& q) {
      HybridState d;
      d.x = {a * q.x[0]};
      return d;
    };
    HybridState q = HybridState::scalar(1.0);
    double t = 0.0;
    for (int i = 0; i < 1000; ++i) {
      q = hybrid::integrate_flow(q, 1e-3, flow, t);
      t += 1e-3;
      const double exact = std::exp(a * t);
      const double rel = std::abs(q.x[0] - exact) / std::abs(exact);
      worst = std::max(worst, rel);
      if (rel > 1e-7) ok = false;
    }
  }
  std::ostringstream detail;
  detail << "worst relative error=" << worst;
  report(7, "integrator accuracy", ok, detail.str());
}

// 8. Noisy asymmetric scenario: bit-reproducible for a fixed seed, completes
//    without hitting the jump limit, steady-state |x| <= 1.2.
void criterion_8() {
  const auto scenario = lif::fig3_noisy_asym(42);
  const auto first = run(scenario);
  const auto second = run(lif::fig3_noisy_asym(42));

  const bool reproducible = testing::traces_bitwise_equal(first, second);
  const bool completed = first.meta.termination == hybrid::TerminationReason::time_horizon;
  const double bound = analysis::ultimate_bound_estimate(first, 7.5);
  const auto sys = lif::build_hybrid_system(scenario);
  const bool sound = testing::trace_invariant_violations(first, sys).empty();

  std::ostringstream detail;
  detail << "reproducible=" << (reproducible ? "yes" : "no") << " termination="
         << hybrid::to_string(first.meta.termination) << " steady bound=" << bound
         << " jumps=" << first.jump_count();
  report(8, "noisy asymmetric scenario", reproducible && completed && sound && bound <= 1.2,
         detail.str());
}

// 9. Zeno guard: a jump-limited run terminates with reason jump_limit and a
//    well-formed truncated trace.
void criterion_9() {
  auto scenario = lif::fig3_nominal();
  scenario.solver.t_end = 100.0;
  scenario.solver.j_max = 100;
  const auto sys = lif::build_hybrid_system(scenario);
  const auto trace = hybrid::simulate(sys, scenario.q0, scenario.solver);
  const bool sound = testing::trace_invariant_violations(trace, sys).empty();
  std::ostringstream detail;
  detail << "termination=" << hybrid::to_string(trace.meta.termination)
         << " jumps=" << trace.jump_count() << " arcs=" << trace.arcs.size();
  report(9, "Zeno guard",
         trace.meta.termination == hybrid::TerminationReason::jump_limit &&
             trace.jump_count() == 100 && sound,
         detail.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
