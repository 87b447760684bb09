#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spikeloop/analysis/certificate.hpp"
#include "spikeloop/analysis/certify.hpp"
#include "spikeloop/analysis/closed_form.hpp"
#include "spikeloop/hybrid/solver.hpp"
#include "spikeloop/lif/builtin.hpp"
#include "spikeloop/lif/loop.hpp"

using namespace spikeloop;
using namespace spikeloop::analysis;
using Catch::Approx;

namespace {

lif::ClosedLoopScenario certified_scenario() {
  lif::ClosedLoopScenario s{
      lif::PlantParams::scalar(1.0),
      lif::NeuronParams::symmetric(0.5, 0.5, 1.0 / 6.0),
      hybrid::HybridState::scalar(0.36),
      nullptr,
      nullptr,
      hybrid::SolverOptions{},
  };
  s.solver.t_end = 15.0;
  return s;
}

hybrid::HybridTrace run(const lif::ClosedLoopScenario& s) {
  return hybrid::simulate(lif::build_hybrid_system(s), s.q0, s.solver);
}

}  // namespace

TEST_CASE("closed-form state propagation") {
  CHECK(closed_form_state(1.0, 1.0, std::log(2.0)) == Approx(2.0).epsilon(1e-14));
  CHECK(closed_form_state(-3.0, 0.5, 0.0) == -3.0);
  CHECK(closed_form_state(20.0, 1.0, 0.0049938) == Approx(20.100125796021761).epsilon(1e-14));
  CHECK_THROWS_AS(closed_form_state(1.0, 1.0, -0.1), PreconditionError);
}

TEST_CASE("closed-form membrane potential") {
  CHECK(closed_form_xi(1.0, 1.0, 0.5, std::log(2.0)) ==
        Approx(0.8619288125423017).epsilon(1e-14));
  CHECK(closed_form_xi(7.0, 1.0, 0.5, 0.0) == 0.0);
  CHECK(closed_form_xi(0.0, 1.0, 0.5, 3.0) == 0.0);
  CHECK_THROWS_AS(closed_form_xi(1.0, -2.0, 0.5, 1.0), PreconditionError);
}

TEST_CASE("next spike time solves the threshold equation") {
  const double dt = next_spike_time(20.0, 1.0, 0.5, 0.1);
  CHECK(dt == Approx(4.9937500324609383e-3).margin(1e-11));
  CHECK(closed_form_xi(20.0, 1.0, 0.5, dt) == Approx(0.1).margin(1e-10));

  // mu = 0 degenerates to the logarithm closed form
  CHECK(next_spike_time(20.0, 1.0, 0.0, 0.1) == Approx(std::log(1.005)).margin(1e-12));

  CHECK_THROWS_AS(next_spike_time(0.0, 1.0, 0.5, 0.1), NoSpikeError);
  CHECK_THROWS_AS(next_spike_time(1.0, -1.0, 0.5, 0.1), PreconditionError);
}

TEST_CASE("next spike time is monotone in |x| and in delta") {
  double prev = next_spike_time(0.25, 1.0, 0.5, 0.1);
  for (double x : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    const double dt = next_spike_time(x, 1.0, 0.5, 0.1);
    CHECK(dt < prev);
    prev = dt;
  }
  prev = 0.0;
  for (double delta : {0.01, 0.02, 0.05, 0.1, 0.2, 0.3}) {
    const double dt = next_spike_time(5.0, 1.0, 0.5, delta);
    CHECK(dt > prev);
    prev = dt;
  }
}

TEST_CASE("certificate design by direct substitution") {
  const auto cert = design_certificate(1.0, 0.5, 0.5, 0.5, 0.6, 1.0 / 6.0);
  CHECK(cert.psi == Approx(0.6).epsilon(1e-14));
  CHECK(cert.delta_max == Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(cert.gamma == Approx(0.3162277660168379).epsilon(1e-14));
  CHECK(cert.upsilon == Approx(1.6).epsilon(1e-14));
  CHECK(cert.tau == Approx(0.10416666666666667).epsilon(1e-14));
}

TEST_CASE("boundary threshold delta = delta_max is admissible") {
  const auto cert = design_certificate(1.0, 0.5, 0.5, 0.3, 0.6, 0.1);
  CHECK(cert.delta_max == Approx(0.1).epsilon(1e-12));
  CHECK(cert.psi == Approx(0.9420289855072464).epsilon(1e-14));
}

TEST_CASE("design constraint violations name the inequality") {
  // sigma below its lower bound ((rho+1)^2-1)/(rho+1)^2 = 0.5555...
  try {
    design_certificate(1.0, 0.5, 0.5, 0.5, 0.5, 0.1);
    FAIL("expected DesignError");
  } catch (const DesignError& e) {
    CHECK(e.inequality.find("sigma") != std::string::npos);
  }
  try {
    design_certificate(1.0, 0.5, 0.5, 0.3, 0.6, 0.2);
    FAIL("expected DesignError");
  } catch (const DesignError& e) {
    CHECK(e.inequality.find("delta") != std::string::npos);
  }
  CHECK_THROWS_AS(design_certificate(-1.0, 0.5, 0.5, 0.5, 0.6, 0.1), DesignError);
  CHECK_THROWS_AS(design_certificate(1.0, 0.5, 0.5, 1.2, 0.6, 0.1), DesignError);
}

TEST_CASE("rho recovery from a requested region of attraction") {
  CHECK(solve_rho_for_roa(0.5, 0.6) == Approx(0.5).margin(1e-12));
  CHECK(solve_rho_for_roa(0.5, 0.9420289855) == Approx(0.3).margin(1e-9));
  CHECK_THROWS_AS(solve_rho_for_roa(0.5, 0.2), DesignError);
}

TEST_CASE("design round-trip and certificate identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rho_dist(0.01, 0.99);
  std::uniform_real_distribution<double> alpha_dist(0.05, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double rho = rho_dist(rng);
    const double alpha = alpha_dist(rng);
    const double psi = roa_radius(rho, alpha);
    REQUIRE(std::abs(solve_rho_for_roa(alpha, psi) - rho) <= 1e-10);

    const double lo = sigma_lower_bound(rho);
    const double sigma = lo + (1.0 - lo) * 0.999 * unit(rng);
    const auto cert = design_certificate(1.0, alpha, 0.5, rho, sigma,
                                         0.5 * rho * alpha / 1.5);
    const double identity = cert.gamma * cert.gamma + (1.0 - sigma) * (rho + 1.0) * (rho + 1.0);
    REQUIRE(std::abs(identity - 1.0) <= 1e-12);
    REQUIRE(cert.gamma > 0.0);
    REQUIRE(cert.gamma < 1.0);
  }
}

TEST_CASE("simulated jump times match the chained closed-form oracle") {
  for (double x0 : {2.0, 20.0}) {
    auto scenario = lif::fig3_nominal();
    scenario.q0 = hybrid::HybridState::scalar(x0);
    const auto trace = run(scenario);
    REQUIRE(trace.jump_count() >= 20);

    double t_oracle = 0.0;
    double x = x0;
    for (int k = 0; k < 20; ++k) {
      const double dt = next_spike_time(x, 1.0, 0.5, 0.1);
      t_oracle += dt;
      const double x_pre = closed_form_state(x, 1.0, dt);
      x = x_pre > 0.0 ? x_pre - 0.5 : x_pre + 0.5;
      REQUIRE(std::abs(trace.jumps[k].t - t_oracle) <= 1e-6 * (k + 1));
    }
  }
}

TEST_CASE("certified scenario passes certification") {
  const auto cert = design_certificate(1.0, 0.5, 0.5, 0.5, 0.6, 1.0 / 6.0);
  const auto trace = run(certified_scenario());
  const auto report = certify_trace(trace, cert, 0.36);
  CHECK(report.initial_condition_ok);
  CHECK(report.bound_ok);
  CHECK(report.dwell_ok);
  CHECK(report.xi_bounded_ok);
  CHECK(report.all_ok());
  CHECK(report.bound_margin > 0.0);
  CHECK(report.violations.empty());
}

TEST_CASE("the zero solution certifies trivially") {
  auto scenario = certified_scenario();
  scenario.q0 = hybrid::HybridState::scalar(0.0);
  const auto cert = design_certificate(1.0, 0.5, 0.5, 0.5, 0.6, 1.0 / 6.0);
  const auto report = certify_trace(run(scenario), cert, 0.0);
  CHECK(report.all_ok());
}

TEST_CASE("a scaled-up trace violates the bound at j = 0") {
  const auto cert = design_certificate(1.0, 0.5, 0.5, 0.5, 0.6, 1.0 / 6.0);
  auto trace = run(certified_scenario());
  for (auto& arc : trace.arcs)
    for (auto& s : arc.samples) s.q.x[0] *= 10.0;
  for (auto& jump : trace.jumps) {
    jump.state_before.x[0] *= 10.0;
    jump.state_after.x[0] *= 10.0;
  }
  const auto report = certify_trace(trace, cert, 0.36);
  CHECK_FALSE(report.bound_ok);
  REQUIRE_FALSE(report.violations.empty());
  const auto& first = report.violations.front();
  CHECK(first.quantity == "state_bound");
  CHECK(first.when.j == 0);
}

TEST_CASE("initial conditions outside the certified region are reported") {
  const auto cert = design_certificate(1.0, 0.5, 0.5, 0.3, 0.99, 0.1);
  const auto trace = run(lif::fig3_nominal());
  const auto report = certify_trace(trace, cert, 20.0);
  CHECK_FALSE(report.initial_condition_ok);
  REQUIRE_FALSE(report.violations.empty());
  CHECK(report.violations.front().quantity == "initial_condition");
}

TEST_CASE("per-jump contraction holds above alpha on a certified run") {
  // rho = 0.1 gives psi = 5.24 alpha, so the transient from x0 = 3 alpha
  // has several arcs starting above alpha where contraction must bite
  const auto cert = design_certificate(1.0, 0.5, 0.5, 0.1, 0.6, 1.0 / 30.0);
  lif::ClosedLoopScenario scenario{
      lif::PlantParams::scalar(1.0),
      lif::NeuronParams::symmetric(0.5, 0.5, 1.0 / 30.0),
      hybrid::HybridState::scalar(1.5),
      nullptr,
      nullptr,
      hybrid::SolverOptions{},
  };
  scenario.solver.t_end = 15.0;
  REQUIRE(std::abs(scenario.q0.x[0]) <= cert.sigma * cert.psi);
  const auto trace = run(scenario);

  int contraction_checks = 0;
  for (std::size_t k = 0; k < trace.jumps.size(); ++k) {
    const double x_start = std::abs(trace.arcs[k].samples.front().q.x[0]);
    if (x_start <= cert.alpha) continue;
    ++contraction_checks;
    const double x_post = std::abs(trace.jumps[k].state_after.x[0]);
    CHECK(x_post <= cert.gamma * x_start + 1e-9);
  }
  CHECK(contraction_checks > 0);
  CHECK(certify_trace(trace, cert, scenario.q0.x[0]).all_ok());
}

TEST_CASE("ultimate bound and inter-spike statistics") {
  const auto nominal = run(lif::fig3_nominal());
  CHECK(ultimate_bound_estimate(nominal, 7.5) == Approx(0.375).margin(0.02));
  CHECK(*min_interspike(nominal, 0.0) == Approx(0.005).margin(5e-4));
  CHECK(*min_interspike(nominal, 7.5) == Approx(0.341).margin(0.02));
  CHECK_THROWS_AS(ultimate_bound_estimate(nominal, 20.0), PreconditionError);

  const auto certified = run(certified_scenario());
  CHECK(ultimate_bound_estimate(certified, 7.5) <= 1.0);  // guaranteed 2*alpha

  auto zero = certified_scenario();
  zero.q0 = hybrid::HybridState::scalar(0.0);
  CHECK(ultimate_bound_estimate(run(zero), 7.5) == 0.0);

  auto one_jump = lif::fig3_nominal();
  one_jump.solver.j_max = 1;
  CHECK_FALSE(min_interspike(run(one_jump), 0.0).has_value());
}

TEST_CASE("gain rescaling reproduces the normalized loop") {
  // raw loop with b = 2, c = 3 and alpha = 0.05 is equivalent to the
  // normalized loop with alpha' = b c alpha = 0.3
  lif::ClosedLoopScenario raw{
      lif::PlantParams::scalar(1.0, 2.0, 3.0),
      lif::NeuronParams::symmetric(0.05, 0.5, 0.1),
      hybrid::HybridState::scalar(0.2 / 3.0),
      nullptr,
      nullptr,
      hybrid::SolverOptions{},
  };
  raw.solver.t_end = 10.0;
  const auto normalized = normalized_scalar_scenario(raw);
  CHECK(normalized.neurons.alpha1 == Approx(0.3).epsilon(1e-14));
  CHECK(normalized.q0.x[0] == Approx(0.2).epsilon(1e-14));

  const auto raw_trace = run(raw);
  const auto norm_trace = run(normalized);
  REQUIRE(raw_trace.jump_count() == norm_trace.jump_count());
  REQUIRE(raw_trace.jump_count() > 3);
  for (std::size_t k = 0; k < raw_trace.jumps.size(); ++k)
    CHECK(std::abs(raw_trace.jumps[k].t - norm_trace.jumps[k].t) <= 1e-9);

  const ScalarPlant plant(1.0, 2.0, 3.0);
  const auto cert = design_certificate(1.0, plant.normalized_amplitude(0.05), 0.5, 0.5,
                                       0.6, 0.1);
  const auto report = certify_trace(norm_trace, cert, normalized.q0.x[0]);
  CHECK(report.all_ok());
}

TEST_CASE("scalar plant gains must be positive for certification") {
  CHECK_THROWS_AS(ScalarPlant(-1.0), ConfigError);
  CHECK_THROWS_AS(ScalarPlant(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(ScalarPlant(1.0, 1.0, -2.0), ConfigError);
}

TEST_CASE("random admissible designs certify their own simulations") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const double a = 0.2 + 1.8 * unit(rng);
    const double alpha = 0.1 + 1.9 * unit(rng);
    const double mu = unit(rng);
    const double rho = 0.05 + 0.9 * unit(rng);
    const double sigma_lo = sigma_lower_bound(rho);
    const double sigma = sigma_lo + (1.0 - sigma_lo) * 0.98 * unit(rng);
    const double delta = (0.3 + 0.7 * unit(rng)) * rho * alpha / (mu + a);
    const auto cert = design_certificate(a, alpha, mu, rho, sigma, delta);

    const double x0 = (unit(rng) < 0.5 ? -1.0 : 1.0) * unit(rng) * sigma * cert.psi;
    lif::ClosedLoopScenario scenario{
        lif::PlantParams::scalar(a),
        lif::NeuronParams::symmetric(alpha, mu, delta),
        hybrid::HybridState::scalar(x0),
        nullptr,
        nullptr,
        hybrid::SolverOptions{},
    };
    scenario.solver.t_end = 8.0;
    const auto report = certify_trace(run(scenario), cert, x0);
    INFO("trial " << trial << ": a=" << a << " alpha=" << alpha << " mu=" << mu
                  << " rho=" << rho << " sigma=" << sigma << " delta=" << delta
                  << " x0=" << x0);
    REQUIRE(report.all_ok());
  }
}

TEST_CASE("stable poles simulate but are refused a certificate") {
  lif::ClosedLoopScenario scenario{
      lif::PlantParams::scalar(-1.0),
      lif::NeuronParams::symmetric(0.5, 0.5, 0.1),
      hybrid::HybridState::scalar(5.0),
      nullptr,
      nullptr,
      hybrid::SolverOptions{},
  };
  scenario.solver.t_end = 10.0;
  const auto sys = lif::build_hybrid_system(scenario);
  const auto trace = hybrid::simulate(sys, scenario.q0, scenario.solver);
  CHECK(trace.meta.termination == hybrid::TerminationReason::time_horizon);
  CHECK(trace.jump_count() >= 1);

  CHECK_THROWS_AS(design_certificate(-1.0, 0.5, 0.5, 0.5, 0.6, 0.1), DesignError);
}
