#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fogcap/errors.hpp"

namespace fogcap {

/// Scenario file parse failure; the message carries the offending line.
class ScenarioParseError : public ParameterError {
public:
  using ParameterError::ParameterError;
};

/// A full run description in one flat key/value file. Defaults are the
/// evaluation parameters (lambda 1..14 tasks/s, mu = 1, alpha = 0.2,
/// beta = 0.1, 18 initial nodes in [15, 20], thresholds 0.01 s / 0.02 s).
/// Manifests written after a run use the same format, so a manifest can be
/// replayed as-is via --scenario.
struct Scenario {
  // station and class mix
  double mu = 1.0;
  double alpha = 0.2;
  double beta = 0.1;

  // scaling policy
  int m_init = 18;
  int m_max = 20;
  int m_min = 15;
  int pool_size = 20;
  double w1_threshold = 0.01;
  double w_sct_threshold = 0.02;

  // sweep grid and mode
  double lambda_min = 1.0;
  double lambda_max = 14.0;
  double lambda_step = 1.0;
  bool carry_state = true;
  std::string scheme = "proposed";

  // single-point arrival rate for `analyze` (optional; device_rates win
  // when present)
  std::optional<double> lambda;

  // simulation settings
  std::uint64_t seed = 42;
  int replications = 20;
  std::int64_t horizon_tasks = 56000;
  double warmup_fraction = 0.1;

  // per-device arrivals feeding the net-rate computation
  std::vector<double> device_rates;
  double cloud_offload_rate = 0.0;

  static Scenario load(const std::filesystem::path& path);
  static Scenario parse(const std::string& text, const std::string& origin);

  /// Serialize every field in a fixed order; `header` lines are emitted
  /// as leading comments (used for the tool version in manifests).
  std::string serialize(const std::vector<std::string>& header = {}) const;
  void save(const std::filesystem::path& path,
            const std::vector<std::string>& header = {}) const;

  /// Re-check every module-level invariant the fields feed into.
  void validate() const;

  /// Sweep grid values lambda_min, +step, ... up to lambda_max.
  std::vector<double> lambda_grid() const;
};

} // namespace fogcap
