#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "fogcap/queueing.hpp"

namespace fogcap {

/// One simulation experiment: an M/M/m station with two non-preemptive
/// priority classes. The horizon counts completed tasks; the first
/// warmup_fraction of completions is discarded as transient.
struct SimConfig {
  QueueParameters params;
  ClassMix mix;
  std::int64_t horizon_tasks = 60000;
  double warmup_fraction = 0.1;
  std::uint64_t seed = 1;
  int replications = 20;

  /// Full-experiment checks: replications >= 2 and at least 10,000
  /// post-warmup completions per replication.
  void validate() const;
};

/// Lifecycle of one simulated task. `cls` is the priority queue it joined
/// (SCT tasks carry the class their placement assigned).
struct TaskRecord {
  std::int64_t id;
  int cls; ///< 1 or 2
  bool is_sct;
  double arrival_time;
  double service_start;
  double departure_time;
  double service_demand; ///< drawn at arrival; equals departure - start
};

/// One line of the event trace. Queue lengths and the busy-server count
/// reflect the state after the event is applied; a departure record shows
/// the state before the freed server is re-dispatched (the dispatch emits
/// its own `start` record at the same timestamp).
struct TraceRecord {
  enum class Kind { arrival, start, departure };
  double time;
  Kind kind;
  std::int64_t task_id;
  int cls;
  bool is_sct;
  int queue1;
  int queue2;
  int busy;
};

using TraceSink = std::function<void(const TraceRecord&)>;

struct ReplicationOptions {
  bool collect_tasks = false; ///< return every TaskRecord (small runs only)
  TraceSink trace;            ///< invoked once per trace record when set
};

/// Raw measurements from a single replication. Per-class means cover
/// post-warmup completions; integrals cover the post-warmup window.
struct ReplicationResult {
  std::int64_t completed1 = 0;
  std::int64_t completed2 = 0;
  std::int64_t completed_sct = 0;
  std::int64_t completed = 0;
  double mean_w1 = 0.0;
  double mean_w2 = 0.0;
  double mean_w_sct = 0.0;
  double mean_sojourn = 0.0;
  double population_integral = 0.0;
  double busy_integral = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  bool divergence_warning = false; ///< set when the config is unstable
  std::vector<TaskRecord> tasks;   ///< filled only when collect_tasks
};

/// A cross-replication mean with its standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Replication-aggregated statistics (standard errors are across
/// replications, never within one run).
struct SimStats {
  Estimate w1;
  Estimate w2;
  Estimate w_sct;
  Estimate mean_tasks_in_system;
  double utilization_observed = 0.0;
  std::int64_t completed_class1 = 0;
  std::int64_t completed_class2 = 0;
  std::int64_t completed_sct = 0;
  int replications = 0;
  bool divergence_warning = false;
};

/// Simulate one replication with the given seed. Poisson arrivals are
/// labelled i.i.d. (alpha, beta, 1-alpha-beta) for (class 1, SCT, class 2);
/// a freed server always takes the class-1 queue head first, FCFS within
/// class, no preemption. Unstable configs run to the horizon and carry a
/// divergence warning.
ReplicationResult run_replication(const SimConfig& config, std::uint64_t seed);
ReplicationResult run_replication(const SimConfig& config, std::uint64_t seed,
                                  const ReplicationOptions& options);

/// Run config.replications independent replications seeded config.seed,
/// config.seed + 1, ... and aggregate. Same config and seed give
/// bit-identical results.
SimStats run_simulation(const SimConfig& config);

/// Time-average number of tasks in the system over the post-warmup window.
double measure_mean_tasks(const ReplicationResult& run);

/// Text form of one trace record: time,kind,task_id,class,is_sct,q1,q2,busy
void write_trace_record(std::ostream& os, const TraceRecord& record);

} // namespace fogcap
