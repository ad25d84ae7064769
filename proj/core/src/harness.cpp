#include "fogcap/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fogcap {

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

ClassMix effective_mix(const SchemeSpec& scheme, const Scenario& sc) {
  if (scheme.priority_enabled) return ClassMix{sc.alpha, sc.beta, false};
  return ClassMix{1.0, 0.0, false}; // one class: everything is "class 1"
}

ScalingPolicy policy_of(const Scenario& sc) {
  return ScalingPolicy{sc.m_min, sc.m_max, sc.w1_threshold,
                       sc.w_sct_threshold, sc.pool_size};
}

SweepPoint point_from_decision(double lambda, const ScalingDecision& d,
                               bool priority_enabled) {
  SweepPoint p;
  p.lambda = lambda;
  p.chosen_m = d.chosen_m;
  if (priority_enabled) {
    p.w1 = d.w1;
    p.w2 = d.w2;
    p.w_sct = d.w_sct;
    p.sct_in_class1 = d.sct_in_class1;
  } else {
    p.w1 = p.w2 = p.w_sct = d.w1; // single-class wait
    p.sct_in_class1 = false;
  }
  p.feasible = d.feasible;
  return p;
}

} // namespace

std::array<SchemeSpec, 4> SchemeSpec::all() {
  return {proposed(), priority_only(), scaling_only(), baseline()};
}

SchemeSpec SchemeSpec::from_name(std::string_view name) {
  for (const SchemeSpec& s : all())
    if (s.name == name) return s;
  throw ParameterError("unknown scheme '" + std::string(name) + "'");
}

SweepResult run_sweep(const SchemeSpec& scheme, const Scenario& scenario) {
  scenario.validate();
  const ClassMix mix = effective_mix(scheme, scenario);
  const ScalingPolicy policy = policy_of(scenario);
  SweepResult result{scheme, {}};

  if (scheme.scaling_enabled) {
    ScalingState state = initial_state(scenario.m_init, policy);
    for (double lambda : scenario.lambda_grid()) {
      if (!scenario.carry_state)
        state = initial_state(scenario.m_init, policy);
      auto [next, decision] =
          controller_step(state, lambda, scenario.mu, mix, policy);
      state = next;
      result.points.push_back(
          point_from_decision(lambda, decision, scheme.priority_enabled));
    }
    return result;
  }

  bool sct_in_class1 = false;
  for (double lambda : scenario.lambda_grid()) {
    if (!scenario.carry_state) sct_in_class1 = false;
    SweepPoint p;
    p.lambda = lambda;
    p.chosen_m = scenario.m_init;
    const QueueParameters q{lambda, scenario.mu, scenario.m_init};
    if (!is_stable(q)) {
      p.sct_in_class1 = sct_in_class1;
      p.feasible = false;
      result.points.push_back(p);
      continue;
    }
    const DelayReport rep =
        full_report(q, ClassMix{mix.alpha, mix.beta, sct_in_class1});
    if (scheme.priority_enabled) {
      const bool sct1 = evaluate_sct_placement(rep.w2, policy);
      p.w1 = rep.w1;
      p.w2 = rep.w2;
      p.w_sct = sct1 ? rep.w1 : rep.w2;
      p.sct_in_class1 = sct1;
      sct_in_class1 = sct1;
    } else {
      p.w1 = p.w2 = p.w_sct = rep.w1;
      p.sct_in_class1 = false;
    }
    p.feasible = true;
    result.points.push_back(p);
  }
  return result;
}

PowerReport power_consumption(const SweepResult& result,
                              const SweepResult& baseline) {
  if (result.points.size() != baseline.points.size())
    throw ParameterError("cannot compare sweeps over different grids");
  for (std::size_t i = 0; i < result.points.size(); ++i)
    if (result.points[i].lambda != baseline.points[i].lambda)
      throw ParameterError("cannot compare sweeps over different grids");

  PowerReport report;
  report.per_point_power.reserve(result.points.size());
  double total = 0.0;
  for (const SweepPoint& p : result.points) {
    report.per_point_power.push_back(static_cast<double>(p.chosen_m));
    total += p.chosen_m;
  }
  double base_total = 0.0;
  for (const SweepPoint& p : baseline.points) base_total += p.chosen_m;
  report.total_power = total;
  report.comparison_baseline_power = base_total;
  report.reduction_percent =
      total > 0.0 ? 100.0 * (base_total - total) / total : 0.0;
  return report;
}

std::optional<double> find_sct_switch(const SweepResult& result) {
  if (!result.scheme.priority_enabled)
    throw ParameterError("SCT switch is not applicable to scheme '" +
                         result.scheme.name + "'");
  for (const SweepPoint& p : result.points)
    if (p.sct_in_class1) return p.lambda;
  return std::nullopt;
}

bool ValidationReport::all_pass() const {
  for (const ValidationRow& row : rows)
    if (!row.pass) return false;
  return true;
}

std::vector<ValidationPoint> default_validation_grid() {
  return {
      {{1.0, 1.0, 2}, {0.2, 0.0, false}},
      {{1.0, 1.0, 2}, {0.2, 0.1, false}},
      {{2.0, 1.0, 4}, {0.3, 0.1, false}},
      {{5.0, 1.0, 8}, {0.2, 0.1, false}},
      {{7.0, 1.0, 10}, {0.5, 0.2, true}},
      {{10.0, 1.0, 15}, {0.2, 0.1, false}},
      {{10.0, 1.0, 15}, {0.2, 0.1, true}},
      {{12.0, 1.0, 16}, {0.1, 0.05, true}},
      {{14.0, 1.0, 20}, {0.2, 0.1, false}},
      {{14.0, 1.0, 20}, {0.2, 0.1, true}},
  };
}

ValidationReport validate_against_des(const std::vector<ValidationPoint>& grid,
                                      const SimSettings& sim,
                                      const ValidationTolerances& tol) {
  for (const ValidationPoint& pt : grid)
    if (!is_stable(pt.params))
      throw InstabilityError("validation grid contains an unstable point");

  ValidationReport report;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ValidationPoint& pt = grid[i];
    const DelayReport analytic = full_report(pt.params, pt.mix);

    SimConfig cfg;
    cfg.params = pt.params;
    cfg.mix = pt.mix;
    cfg.horizon_tasks = sim.horizon_tasks;
    cfg.warmup_fraction = sim.warmup_fraction;
    cfg.seed = sim.seed + 1000 * static_cast<std::uint64_t>(i);
    cfg.replications = sim.replications;
    const SimStats stats = run_simulation(cfg);

    auto row = [&](const char* metric, double expected, const Estimate& got) {
      const double err = std::abs(got.mean - expected);
      const bool pass = err <= std::max(tol.relative * std::abs(expected),
                                        tol.se_multiplier * got.std_error);
      report.rows.push_back(ValidationRow{pt.params.arrival_rate,
                                          pt.params.service_rate,
                                          pt.params.servers, metric, expected,
                                          got.mean, got.std_error, pass});
    };
    row("w1", analytic.w1, stats.w1);
    row("w2", analytic.w2, stats.w2);
    row("k", analytic.mean_tasks, stats.mean_tasks_in_system);
  }
  return report;
}

void write_delays_csv(std::ostream& os, std::span<const SweepResult> sweeps) {
  os << "lambda,scheme,class,delay_seconds\n";
  for (const SweepResult& sweep : sweeps) {
    for (const SweepPoint& p : sweep.points) {
      if (p.w1)
        os << fmt(p.lambda) << ',' << sweep.scheme.name << ",1," << fmt(*p.w1)
           << '\n';
      if (p.w2)
        os << fmt(p.lambda) << ',' << sweep.scheme.name << ",2," << fmt(*p.w2)
           << '\n';
      if (sweep.scheme.priority_enabled && p.w_sct)
        os << fmt(p.lambda) << ',' << sweep.scheme.name << ",sct,"
           << fmt(*p.w_sct) << '\n';
    }
  }
}

void write_nodes_power_csv(std::ostream& os,
                           std::span<const SweepResult> sweeps) {
  os << "lambda,scheme,nodes,power_units\n";
  for (const SweepResult& sweep : sweeps)
    for (const SweepPoint& p : sweep.points)
      os << fmt(p.lambda) << ',' << sweep.scheme.name << ',' << p.chosen_m
         << ',' << fmt(static_cast<double>(p.chosen_m)) << '\n';
}

void write_sct_csv(std::ostream& os, const SweepResult& sweep,
                   double w_sct_threshold) {
  os << "lambda,sct_class,w2_seconds,threshold_seconds\n";
  for (const SweepPoint& p : sweep.points) {
    if (!p.w2) continue;
    os << fmt(p.lambda) << ',' << (p.sct_in_class1 ? 1 : 2) << ','
       << fmt(*p.w2) << ',' << fmt(w_sct_threshold) << '\n';
  }
}

void write_validation_csv(std::ostream& os, const ValidationReport& report) {
  os << "lambda,mu,m,metric,analytic,simulated,stderr,pass\n";
  for (const ValidationRow& row : report.rows)
    os << fmt(row.lambda) << ',' << fmt(row.mu) << ',' << row.m << ','
       << row.metric << ',' << fmt(row.analytic) << ',' << fmt(row.simulated)
       << ',' << fmt(row.std_error) << ',' << (row.pass ? "true" : "false")
       << '\n';
}

std::vector<std::filesystem::path>
emit_results(std::span<const SweepResult> sweeps,
             const std::optional<ValidationReport>& validation,
             const Scenario& scenario, std::string_view tool_version,
             const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, auto&& writer) {
    const std::filesystem::path path = out_dir / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    writer(os);
    written.push_back(path);
  };

  if (!sweeps.empty()) {
    emit("delays.csv", [&](std::ostream& os) { write_delays_csv(os, sweeps); });
    emit("nodes_power.csv",
         [&](std::ostream& os) { write_nodes_power_csv(os, sweeps); });
    const SweepResult* sct_source = nullptr;
    for (const SweepResult& sweep : sweeps) {
      if (!sweep.scheme.priority_enabled) continue;
      if (sweep.scheme.name == "proposed") {
        sct_source = &sweep;
        break;
      }
      if (sct_source == nullptr) sct_source = &sweep;
    }
    if (sct_source != nullptr)
      emit("sct.csv", [&](std::ostream& os) {
        write_sct_csv(os, *sct_source, scenario.w_sct_threshold);
      });
  }
  if (validation)
    emit("validation.csv",
         [&](std::ostream& os) { write_validation_csv(os, *validation); });

  const std::filesystem::path manifest = out_dir / "manifest.txt";
  scenario.save(manifest,
                {"fogcap " + std::string(tool_version) + " run manifest"});
  written.push_back(manifest);
  return written;
}

} // namespace fogcap
