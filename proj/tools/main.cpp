// spikeloop CLI: scenario simulation, stability-certificate design, trace
// certification and reproduction of the reference spiking-control runs.
//
// Exit codes: 0 success, 2 invalid configuration or file format,
// 3 numerical failure or jump-limit truncation, 4 infeasible design,
// 5 certification violation, 6 output I/O failure.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spikeloop/io/csv.hpp"
#include "spikeloop/io/json.hpp"
#include "spikeloop/io/manifest.hpp"
#include "spikeloop/io/svg.hpp"
#include "spikeloop/spikeloop.hpp"

namespace fs = std::filesystem;
using namespace spikeloop;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitViolation = 5;
constexpr int kExitIo = 6;

struct SolverOverrides {
  std::optional<double> h;
  std::optional<double> t_end;
  std::optional<std::int64_t> j_max;
  std::optional<std::uint64_t> seed;
};

void add_solver_flags(CLI::App* cmd, SolverOverrides& ov) {
  // the step-size flag --h displaces the short help alias
  cmd->set_help_flag("--help", "Print help");
  cmd->add_option("--h", ov.h, "Integration step size [s]");
  cmd->add_option("--t-end", ov.t_end, "Simulation horizon [s]");
  cmd->add_option("--jmax", ov.j_max, "Jump limit (Zeno guard)");
  cmd->add_option("--seed", ov.seed, "Base seed for the random signals");
}

void apply_overrides(lif::ClosedLoopScenario& scenario, const SolverOverrides& ov) {
  if (ov.h) scenario.solver.h = *ov.h;
  if (ov.t_end) scenario.solver.t_end = *ov.t_end;
  if (ov.j_max) scenario.solver.j_max = *ov.j_max;
  if (ov.seed) {
    using signals::PiecewiseLinearSignal;
    auto reseed = [&](std::shared_ptr<const PiecewiseLinearSignal>& sig,
                      std::uint64_t stream) {
      if (sig)
        sig = std::make_shared<PiecewiseLinearSignal>(
            sig->grid_step(), sig->amplitude(),
            PiecewiseLinearSignal::derive_stream_seed(*ov.seed, stream));
    };
    reseed(scenario.disturbance, 1);
    reseed(scenario.noise, 2);
  }
}

struct LoadedScenario {
  lif::ClosedLoopScenario scenario;
  std::string name;
  std::uint64_t hash;
};

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

LoadedScenario load_scenario(const std::string& ref, const SolverOverrides& ov) {
  lif::ClosedLoopScenario scenario = [&] {
    if (ref == "fig3-nominal") return lif::fig3_nominal();
    if (ref == "fig3-noisy-asym") return lif::fig3_noisy_asym(ov.seed.value_or(lif::kDefaultNoisySeed));
    const std::string text = io::read_file(ref);
    return io::scenario_from_json(nlohmann::json::parse(text));
  }();
  apply_overrides(scenario, ov);
  scenario.validate();
  const std::string canonical = io::scenario_to_json(scenario).dump();
  return {std::move(scenario), ref, io::fnv1a64(canonical)};
}

struct SimulationArtifacts {
  hybrid::HybridTrace trace;
  io::RunManifest manifest;
};

SimulationArtifacts run_and_export(const LoadedScenario& loaded, const fs::path& out_dir,
                                   const std::string& stem, bool with_svg) {
  const auto& scenario = loaded.scenario;
  ensure_out_dir(out_dir);

  const auto start = std::chrono::steady_clock::now();
  auto trace = hybrid::simulate(lif::build_hybrid_system(scenario), scenario.q0, scenario.solver);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  trace.meta.scenario_hash = loaded.hash;

  io::RunManifest manifest;
  manifest.scenario = loaded.name;
  manifest.scenario_hash = loaded.hash;
  manifest.solver = scenario.solver;
  manifest.runtime_seconds = elapsed.count();
  manifest.jump_count = trace.jump_count();
  manifest.termination = hybrid::to_string(trace.meta.termination);
  const double t_cut = scenario.solver.t_end / 2.0;
  if (trace.final_time().t >= t_cut)
    manifest.ultimate_bound = analysis::ultimate_bound_estimate(trace, t_cut);
  if (auto gap = analysis::min_interspike(trace, 0.0)) manifest.min_interspike = *gap;

  auto emit = [&](const std::string& file, auto&& writer) {
    io::write_file_with(out_dir / file, writer);
    manifest.outputs.push_back(file);
  };
  emit(stem + "_trace.csv", [&](std::ostream& os) { io::write_trace_csv(trace, os); });
  emit(stem + "_events.csv", [&](std::ostream& os) { io::write_events_csv(trace, os); });
  if (scenario.disturbance)
    emit(stem + "_disturbance.csv", [&](std::ostream& os) {
      io::write_signal_csv(*scenario.disturbance, scenario.solver.t_end, os);
    });
  if (scenario.noise)
    emit(stem + "_noise.csv", [&](std::ostream& os) {
      io::write_signal_csv(*scenario.noise, scenario.solver.t_end, os);
    });
  if (with_svg)
    emit(stem + "_plot.svg", [&](std::ostream& os) {
      io::write_trace_svg(trace, scenario.neurons, os, loaded.name);
    });

  return {std::move(trace), std::move(manifest)};
}

int cmd_simulate(const std::string& scenario_ref, const SolverOverrides& ov,
                 const fs::path& out_dir, bool with_svg) {
  const auto loaded = load_scenario(scenario_ref, ov);
  auto artifacts = run_and_export(loaded, out_dir, "run", with_svg);
  io::write_file(out_dir / "manifest.json", io::manifest_to_json(artifacts.manifest).dump(2) + "\n");

  std::cout << "simulate " << loaded.name << ": jumps=" << artifacts.manifest.jump_count
            << " termination=" << artifacts.manifest.termination;
  if (artifacts.manifest.ultimate_bound)
    std::cout << " ultimate_bound=" << *artifacts.manifest.ultimate_bound;
  std::cout << '\n';
  if (artifacts.trace.meta.termination == hybrid::TerminationReason::time_horizon) return 0;
  std::cerr << "simulation truncated: " << artifacts.manifest.termination << '\n';
  return kExitNumerical;
}

int cmd_design(double a, double alpha, double mu, std::optional<double> psi,
               std::optional<double> rho_opt, std::optional<double> sigma_opt,
               std::optional<double> delta_opt, const fs::path& out_dir) {
  if (psi.has_value() == rho_opt.has_value())
    throw ConfigError("design: give exactly one of --psi or --rho");
  const double rho = psi ? analysis::solve_rho_for_roa(alpha, *psi) : *rho_opt;
  const double sigma_min = analysis::sigma_lower_bound(rho);
  const double sigma = sigma_opt.value_or(0.5 * (sigma_min + 1.0));
  const double delta_max = rho * alpha / (mu + a);
  const double delta = delta_opt.value_or(delta_max);
  const auto cert = analysis::design_certificate(a, alpha, mu, rho, sigma, delta);

  ensure_out_dir(out_dir);
  io::write_file(out_dir / "certificate.json", io::certificate_to_json_text(cert));

  std::cout << "design: rho=" << cert.rho << " psi=" << cert.psi << " delta=" << cert.delta
            << " (delta_max=" << cert.delta_max << ") gamma=" << cert.gamma
            << " tau=" << cert.tau << '\n'
            << "admissible sigma interval: [" << sigma_min << ", 1)\n"
            << "wrote " << (out_dir / "certificate.json").string() << '\n';
  return 0;
}

int cmd_certify(const std::string& trace_path, const std::string& cert_path, double x0,
                double state_scale, const fs::path& out_dir) {
  const std::string trace_text = io::read_file(trace_path);
  std::istringstream trace_stream(trace_text);
  auto trace = io::read_trace_csv(trace_stream);
  const auto cert = io::certificate_from_json(nlohmann::json::parse(io::read_file(cert_path)));

  if (state_scale != 1.0) {
    for (auto& arc : trace.arcs)
      for (auto& s : arc.samples)
        for (double& v : s.q.x) v *= state_scale;
    x0 *= state_scale;
  }

  const auto report = analysis::certify_trace(trace, cert, x0);
  ensure_out_dir(out_dir);
  io::write_file(out_dir / "report.json", io::report_to_json_text(report));

  io::RunManifest manifest;
  manifest.scenario = trace_path;
  manifest.scenario_hash = io::fnv1a64(trace_text);
  manifest.solver = trace.meta.solver;
  manifest.outputs = {"report.json"};
  manifest.jump_count = trace.jump_count();
  manifest.termination = "n/a";
  manifest.certification_verdict =
      report.all_ok() ? "pass" : "fail: " + report.violations.front().quantity;
  io::write_file(out_dir / "manifest.json", io::manifest_to_json(manifest).dump(2) + "\n");

  if (report.all_ok()) {
    std::cout << "certify: PASS (bound margin " << report.bound_margin << ", dwell margin "
              << report.dwell_margin << ", xi margin " << report.xi_margin << ")\n";
    return 0;
  }
  const auto& v = report.violations.front();
  std::cerr << "certify: FAIL first violation " << v.quantity << " at (t=" << v.when.t
            << ", j=" << v.when.j << "): observed " << v.observed << " allowed " << v.allowed
            << '\n';
  return kExitViolation;
}

int cmd_reproduce_fig3(const fs::path& out_dir, const SolverOverrides& ov) {
  auto nominal = load_scenario("fig3-nominal", ov);
  auto noisy = load_scenario("fig3-noisy-asym", ov);

  auto nominal_run = run_and_export(nominal, out_dir, "nominal", true);
  auto noisy_run = run_and_export(noisy, out_dir, "noisy_asym", true);

  const double t_cut = nominal.scenario.solver.t_end / 2.0;
  const double ultimate = analysis::ultimate_bound_estimate(nominal_run.trace, t_cut);
  const auto gap_all = analysis::min_interspike(nominal_run.trace, 0.0);
  const auto gap_steady = analysis::min_interspike(nominal_run.trace, t_cut);

  nlohmann::json summary{
      {"ultimate_bound", ultimate},
      {"min_interspike_all", gap_all ? nlohmann::json(*gap_all) : nlohmann::json()},
      {"min_interspike_steady", gap_steady ? nlohmann::json(*gap_steady) : nlohmann::json()},
      {"nominal_jumps", nominal_run.trace.jump_count()},
      {"noisy_jumps", noisy_run.trace.jump_count()},
      {"noisy_steady_bound", analysis::ultimate_bound_estimate(noisy_run.trace, t_cut)},
      {"seed", ov.seed.value_or(lif::kDefaultNoisySeed)},
  };
  io::write_file(out_dir / "summary.json", summary.dump(2) + "\n");

  std::ostringstream table;
  table << "metric,reference,observed\n";
  table << "ultimate_bound,0.375," << io::format_double(ultimate) << '\n';
  table << "min_interspike_all,0.005," << io::format_double(gap_all.value_or(0.0)) << '\n';
  table << "min_interspike_steady,0.341," << io::format_double(gap_steady.value_or(0.0)) << '\n';
  io::write_file(out_dir / "comparison.csv", table.str());

  io::RunManifest manifest = nominal_run.manifest;
  manifest.scenario = "reproduce-fig3";
  manifest.outputs.clear();
  for (const auto& o : nominal_run.manifest.outputs) manifest.outputs.push_back(o);
  for (const auto& o : noisy_run.manifest.outputs) manifest.outputs.push_back(o);
  manifest.outputs.push_back("summary.json");
  manifest.outputs.push_back("comparison.csv");
  manifest.runtime_seconds += noisy_run.manifest.runtime_seconds;
  io::write_file(out_dir / "manifest.json", io::manifest_to_json(manifest).dump(2) + "\n");

  std::cout << "reproduce-fig3: ultimate_bound=" << ultimate
            << " min_interspike_all=" << gap_all.value_or(0.0)
            << " min_interspike_steady=" << gap_steady.value_or(0.0) << " (reference 0.375 / 0.005 / 0.341)\n";
  std::cout << "outputs in " << out_dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spiking integrate-and-fire controller: simulation, design and certification"};
  app.require_subcommand(1);

  SolverOverrides overrides;

  auto* sim = app.add_subcommand("simulate", "Run a scenario (JSON file or builtin name)");
  std::string scenario_ref;
  std::string sim_out = "out";
  bool sim_svg = false;
  sim->add_option("scenario", scenario_ref,
                  "Scenario JSON path, or builtin: fig3-nominal | fig3-noisy-asym")
      ->required();
  sim->add_option("--out", sim_out, "Output directory");
  sim->add_flag("--svg", sim_svg, "Also write an SVG plot");
  add_solver_flags(sim, overrides);

  auto* design = app.add_subcommand("design", "Derive a stability certificate");
  double d_a = 0, d_alpha = 0, d_mu = 0;
  std::optional<double> d_psi, d_rho, d_sigma, d_delta;
  std::string design_out = "out";
  design->add_option("--a", d_a, "Plant pole (> 0)")->required();
  design->add_option("--alpha", d_alpha, "Spike amplitude (> 0)")->required();
  design->add_option("--mu", d_mu, "Neuron leak rate (>= 0)")->required();
  design->add_option("--psi", d_psi, "Desired region-of-attraction radius");
  design->add_option("--rho", d_rho, "Design parameter in (0,1)");
  design->add_option("--sigma", d_sigma, "Initial-condition fraction");
  design->add_option("--delta", d_delta, "Firing threshold (default: delta_max)");
  design->add_option("--out", design_out, "Output directory");

  auto* certify = app.add_subcommand("certify", "Check a trace against a certificate");
  std::string c_trace, c_cert;
  double c_x0 = 0.0, c_scale = 1.0;
  std::string certify_out = "out";
  certify->add_option("--trace", c_trace, "Trace CSV")->required();
  certify->add_option("--cert", c_cert, "Certificate JSON")->required();
  certify->add_option("--x0", c_x0, "Initial plant state of the run")->required();
  certify->add_option("--state-scale", c_scale,
                      "Output-gain rescaling c applied to states before certification");
  certify->add_option("--out", certify_out, "Output directory");

  auto* repro = app.add_subcommand("reproduce-fig3", "Run both reference scenarios");
  std::string repro_out = "fig3-out";
  repro->add_option("--out", repro_out, "Output directory");
  add_solver_flags(repro, overrides);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(scenario_ref, overrides, sim_out, sim_svg);
    if (design->parsed())
      return cmd_design(d_a, d_alpha, d_mu, d_psi, d_rho, d_sigma, d_delta, design_out);
    if (certify->parsed()) return cmd_certify(c_trace, c_cert, c_x0, c_scale, certify_out);
    if (repro->parsed()) return cmd_reproduce_fig3(repro_out, overrides);
  } catch (const DesignError& e) {
    std::cerr << "infeasible design: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid json: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
