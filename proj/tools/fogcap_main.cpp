#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fogcap/harness.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1; // infeasibility or validation failure
constexpr int kExitUsage = 2;      // usage or parse errors

struct Options {
  std::string scenario_path;
  std::string out_dir;
  std::string scheme;
  std::string lambda_grid; // start:stop:step
  std::optional<double> lambda;
  std::optional<int> m;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

fogcap::Scenario load_scenario(const Options& opt) {
  fogcap::Scenario sc;
  if (!opt.scenario_path.empty())
    sc = fogcap::Scenario::load(opt.scenario_path);
  if (opt.seed) sc.seed = *opt.seed;
  if (!opt.scheme.empty()) sc.scheme = opt.scheme;
  if (!opt.lambda_grid.empty()) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(opt.lambda_grid.c_str(), "%lf:%lf:%lf", &start, &stop,
                    &step) != 3)
      throw fogcap::ParameterError(
          "--lambda-grid expects <start>:<stop>:<step>");
    sc.lambda_min = start;
    sc.lambda_max = stop;
    sc.lambda_step = step;
  }
  if (opt.lambda) sc.lambda = *opt.lambda;
  sc.validate();
  return sc;
}

int cmd_analyze(const Options& opt) {
  const fogcap::Scenario sc = load_scenario(opt);

  double lambda = 0.0;
  if (sc.lambda) {
    lambda = *sc.lambda;
  } else if (!sc.device_rates.empty()) {
    lambda = fogcap::net_arrival_rate(
        fogcap::ArrivalProfile{sc.device_rates, sc.cloud_offload_rate});
  } else {
    std::cerr << "analyze: no arrival rate; pass --lambda or set lambda / "
                 "device_rates in the scenario\n";
    return kExitUsage;
  }
  const int m = opt.m.value_or(sc.m_init);

  const fogcap::QueueParameters params{lambda, sc.mu, m};
  const fogcap::ScalingPolicy policy{sc.m_min, sc.m_max, sc.w1_threshold,
                                     sc.w_sct_threshold, sc.pool_size};
  fogcap::DelayReport rep =
      fogcap::full_report(params, {sc.alpha, sc.beta, false});
  const bool sct1 = fogcap::evaluate_sct_placement(rep.w2, policy);
  if (sct1) rep = fogcap::full_report(params, {sc.alpha, sc.beta, true});

  std::cout << "lambda = " << lambda << " tasks/s\n"
            << "mu = " << sc.mu << " tasks/s per node\n"
            << "m = " << m << " nodes\n"
            << "rho = " << rep.rho << "\n"
            << "rho1 = " << rep.rho1 << "\n"
            << "rho2 = " << rep.rho2 << "\n"
            << "p0 = " << rep.p0 << "\n"
            << "p_wait = " << rep.p_wait << "\n"
            << "mean_tasks = " << rep.mean_tasks << "\n"
            << "w0 = " << rep.residual << " s\n"
            << "w1 = " << rep.w1 << " s\n"
            << "w2 = " << rep.w2 << " s\n"
            << "sct_class = " << (sct1 ? 1 : 2) << "\n"
            << "w_sct = " << (sct1 ? rep.w1 : rep.w2) << " s\n";
  return kExitOk;
}

int run_sweep_command(const Options& opt, bool force_all) {
  fogcap::Scenario sc = load_scenario(opt);
  if (force_all) sc.scheme = "all";

  std::vector<fogcap::SweepResult> sweeps;
  if (sc.scheme == "all") {
    for (const fogcap::SchemeSpec& scheme : fogcap::SchemeSpec::all())
      sweeps.push_back(fogcap::run_sweep(scheme, sc));
  } else {
    sweeps.push_back(
        fogcap::run_sweep(fogcap::SchemeSpec::from_name(sc.scheme), sc));
  }
  const fogcap::SweepResult baseline =
      fogcap::run_sweep(fogcap::SchemeSpec::baseline(), sc);

  const auto written = fogcap::emit_results(sweeps, std::nullopt, sc,
                                            kVersion, opt.out_dir);

  bool any_infeasible = false;
  for (const fogcap::SweepResult& sweep : sweeps) {
    const fogcap::PowerReport power = fogcap::power_consumption(sweep, baseline);
    std::cout << sweep.scheme.name << ": total_power = " << power.total_power
              << " P, reduction vs baseline = " << power.reduction_percent
              << " %";
    if (sweep.scheme.priority_enabled) {
      const auto sw = fogcap::find_sct_switch(sweep);
      if (sw)
        std::cout << ", sct switches to class 1 at lambda = " << *sw;
      else
        std::cout << ", sct stays in class 2";
    }
    std::cout << "\n";
    for (const fogcap::SweepPoint& p : sweep.points)
      if (!p.feasible) {
        any_infeasible = true;
        std::cout << "  infeasible at lambda = " << p.lambda
                  << " (m = " << p.chosen_m << ")\n";
      }
  }
  for (const auto& path : written) std::cout << "wrote " << path.string() << "\n";
  return (opt.strict && any_infeasible) ? kExitInfeasible : kExitOk;
}

int cmd_simulate(const Options& opt) {
  const fogcap::Scenario sc = load_scenario(opt);
  fogcap::SimSettings sim;
  sim.seed = sc.seed;
  sim.replications = sc.replications;
  sim.horizon_tasks = sc.horizon_tasks;
  sim.warmup_fraction = sc.warmup_fraction;

  const fogcap::ValidationReport report =
      fogcap::validate_against_des(fogcap::default_validation_grid(), sim);
  const auto written = fogcap::emit_results({}, report, sc, kVersion,
                                            opt.out_dir);

  int failed = 0;
  for (const fogcap::ValidationRow& row : report.rows) {
    if (!row.pass) ++failed;
    std::cout << (row.pass ? "pass" : "FAIL") << " lambda=" << row.lambda
              << " m=" << row.m << " " << row.metric
              << ": analytic=" << row.analytic
              << " simulated=" << row.simulated << " (se=" << row.std_error
              << ")\n";
  }
  for (const auto& path : written) std::cout << "wrote " << path.string() << "\n";
  std::cout << (failed == 0 ? "validation passed" : "validation FAILED")
            << " (" << report.rows.size() - failed << "/" << report.rows.size()
            << " checks)\n";
  return failed == 0 ? kExitOk : kExitInfeasible;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"fogcap: M/M/m priority-queue capacity planning for fog layers"};
  app.set_version_flag("--version", std::string("fogcap ") + kVersion);
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd, bool needs_out) {
    cmd->add_option("--scenario", opt.scenario_path,
                    "scenario file (defaults match the evaluation setup)");
    cmd->add_option("--seed", opt.seed, "override the scenario seed");
    if (needs_out)
      cmd->add_option("--out", opt.out_dir, "output directory")->required();
  };

  CLI::App* analyze =
      app.add_subcommand("analyze", "closed-form report for one operating point");
  add_common(analyze, false);
  analyze->add_option("--lambda", opt.lambda, "arrival rate, tasks/s");
  analyze->add_option("--m", opt.m, "fog node count (default: m_init)");

  CLI::App* sweep =
      app.add_subcommand("sweep", "sweep the lambda grid under one scheme");
  add_common(sweep, true);
  sweep->add_option("--scheme", opt.scheme,
                    "proposed|priority-only|scaling-only|baseline|all");
  sweep->add_option("--lambda-grid", opt.lambda_grid,
                    "<start>:<stop>:<step> grid override");
  sweep->add_flag("--strict", opt.strict,
                  "exit nonzero when any sweep point is infeasible");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "validate the analytics against the event simulator");
  add_common(simulate, true);

  CLI::App* compare =
      app.add_subcommand("compare", "sweep all four schemes (sweep --scheme all)");
  add_common(compare, true);
  compare->add_option("--lambda-grid", opt.lambda_grid,
                      "<start>:<stop>:<step> grid override");
  compare->add_flag("--strict", opt.strict,
                    "exit nonzero when any sweep point is infeasible");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(opt);
    if (sweep->parsed()) return run_sweep_command(opt, false);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (compare->parsed()) return run_sweep_command(opt, true);
  } catch (const fogcap::InstabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const fogcap::ScenarioParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fogcap::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  }
  return kExitUsage;
}
