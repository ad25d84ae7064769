#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fogcap/des.hpp"
#include "fogcap/scaling.hpp"
#include "fogcap/scenario.hpp"

namespace fogcap {

/// The four comparison schemes: the proposed scheme enables both priority
/// classes and dynamic scaling; the others switch one or both off.
struct SchemeSpec {
  std::string name;
  bool priority_enabled;
  bool scaling_enabled;

  static SchemeSpec proposed() { return {"proposed", true, true}; }
  static SchemeSpec priority_only() { return {"priority-only", true, false}; }
  static SchemeSpec scaling_only() { return {"scaling-only", false, true}; }
  static SchemeSpec baseline() { return {"baseline", false, false}; }
  static std::array<SchemeSpec, 4> all();
  static SchemeSpec from_name(std::string_view name); ///< throws ParameterError
};

/// One sweep point. Delays are absent when the point is unstable at the
/// recorded node count. Non-priority schemes report the single-class mean
/// wait as w1, w2 and w_sct alike.
struct SweepPoint {
  double lambda;
  int chosen_m;
  std::optional<double> w1;
  std::optional<double> w2;
  std::optional<double> w_sct;
  bool sct_in_class1;
  bool feasible;
};

struct SweepResult {
  SchemeSpec scheme;
  std::vector<SweepPoint> points;
};

/// Power accounting in multiples of the unit node-power P: each allocated
/// node costs 1 P per sweep point. reduction_percent follows the paper's
/// arithmetic, (baseline - total) / total.
struct PowerReport {
  double total_power;
  std::vector<double> per_point_power;
  double comparison_baseline_power;
  double reduction_percent;
};

/// Sweep the scenario's lambda grid under one scheme. Scaling schemes run
/// the controller and (by default) carry its state from point to point;
/// fixed schemes evaluate the analytics at m_init. Non-priority schemes
/// treat all traffic as a single class (alpha = 1, beta = 0).
SweepResult run_sweep(const SchemeSpec& scheme, const Scenario& scenario);

/// Total and per-point power for `result`, compared against `baseline`.
/// Throws ParameterError when the two sweeps ran different grids.
PowerReport power_consumption(const SweepResult& result,
                              const SweepResult& baseline);

/// Smallest lambda at which SCT placement is class 1, if any. Only
/// meaningful for priority-enabled schemes; throws ParameterError otherwise.
std::optional<double> find_sct_switch(const SweepResult& result);

/// One analytics-vs-simulation check point.
struct ValidationPoint {
  QueueParameters params;
  ClassMix mix;
};

struct ValidationTolerances {
  double relative = 0.05;   ///< relative error allowed on each metric
  double se_multiplier = 3.0; ///< cross-replication standard errors allowed
};

struct SimSettings {
  std::uint64_t seed = 42;
  int replications = 20;
  std::int64_t horizon_tasks = 56000;
  double warmup_fraction = 0.1;
};

struct ValidationRow {
  double lambda;
  double mu;
  int m;
  std::string metric; ///< "w1", "w2" or "k"
  double analytic;
  double simulated;
  double std_error;
  bool pass;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  bool all_pass() const;
};

/// Ten stable configurations spanning the evaluation ranges, including the
/// (lambda=1, m=2) and (lambda=10, m=15) anchor points.
std::vector<ValidationPoint> default_validation_grid();

/// Simulate every grid point and compare measured W1, W2 and mean tasks
/// against the closed forms. A metric passes when the difference is within
/// max(relative * analytic, se_multiplier * SE). Unstable grid points are
/// rejected up front.
ValidationReport validate_against_des(const std::vector<ValidationPoint>& grid,
                                      const SimSettings& sim,
                                      const ValidationTolerances& tol = {});

// CSV emitters. Headers, comma separators, LF line endings; floats use the
// shortest round-trip form, so identical inputs give identical bytes.
void write_delays_csv(std::ostream& os, std::span<const SweepResult> sweeps);
void write_nodes_power_csv(std::ostream& os,
                           std::span<const SweepResult> sweeps);
void write_sct_csv(std::ostream& os, const SweepResult& sweep,
                   double w_sct_threshold);
void write_validation_csv(std::ostream& os, const ValidationReport& report);

/// Write every applicable file into out_dir: delays.csv and nodes_power.csv
/// when sweeps are present, sct.csv for the proposed (else first
/// priority-enabled) sweep, validation.csv when a report is given, and
/// manifest.txt capturing the scenario that produced everything (replayable
/// via --scenario). Returns the paths written, in a fixed order.
std::vector<std::filesystem::path>
emit_results(std::span<const SweepResult> sweeps,
             const std::optional<ValidationReport>& validation,
             const Scenario& scenario, std::string_view tool_version,
             const std::filesystem::path& out_dir);

} // namespace fogcap
