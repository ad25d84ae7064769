#include "fogcap/des.hpp"

#include <atomic>
#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <ostream>
#include <queue>
#include <random>
#include <thread>

namespace fogcap {

namespace {

// 53-bit uniform in [0,1); spelled out so the stream is generator-portable.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-transform exponential; u in [0,1) keeps the draw finite.
double exp_draw(std::mt19937_64& rng, double rate) {
  return -std::log1p(-uniform01(rng)) / rate;
}

struct Event {
  double time;
  std::uint64_t seq; // FIFO tie-break for simultaneous events
  bool is_departure;
  std::int64_t task;
};

struct LaterFirst {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

struct Task {
  int cls;
  bool is_sct;
  double arrival;
  double start = 0.0;
  double demand;
  double departure = 0.0;
};

class Replication {
public:
  Replication(const SimConfig& cfg, std::uint64_t seed,
              const ReplicationOptions& opt)
      : cfg_(cfg), opt_(opt), rng_(seed) {}

  ReplicationResult run() {
    const double lambda = cfg_.params.arrival_rate;
    const std::int64_t horizon = cfg_.horizon_tasks;
    const std::int64_t warmup =
        static_cast<std::int64_t>(cfg_.warmup_fraction * horizon);
    if (horizon < 1 || horizon - warmup < 1)
      throw InsufficientHorizonError(
          "horizon leaves no post-warmup completions");

    bool in_window = warmup == 0;
    double last_time = 0.0;
    std::int64_t completed = 0;
    schedule(exp_draw(rng_, lambda), false, -1);

    while (!calendar_.empty()) {
      const Event ev = calendar_.top();
      calendar_.pop();
      if (in_window) {
        const double dt = ev.time - last_time;
        const auto in_system =
            static_cast<double>(busy_ + q1_.size() + q2_.size());
        result_.population_integral += dt * in_system;
        result_.busy_integral += dt * busy_;
      }
      last_time = ev.time;

      if (!ev.is_departure) {
        handle_arrival(ev.time, lambda);
        continue;
      }

      Task& task = tasks_[ev.task];
      task.departure = ev.time;
      --busy_;
      ++completed;
      if (completed > warmup) record_completion(task);
      if (!in_window && completed >= warmup) {
        in_window = true;
        result_.window_start = ev.time;
      }
      trace(TraceRecord::Kind::departure, ev.task, ev.time);
      if (completed >= horizon) {
        result_.window_end = ev.time;
        break;
      }
      dispatch_next(ev.time);
    }

    finalize();
    return std::move(result_);
  }

private:
  void schedule(double time, bool is_departure, std::int64_t task) {
    calendar_.push(Event{time, seq_++, is_departure, task});
  }

  void handle_arrival(double now, double lambda) {
    const double label = uniform01(rng_);
    const double demand = exp_draw(rng_, cfg_.params.service_rate);
    schedule(now + exp_draw(rng_, lambda), false, -1);

    Task task;
    task.arrival = now;
    task.demand = demand;
    if (label < cfg_.mix.alpha) {
      task.cls = 1;
      task.is_sct = false;
    } else if (label < cfg_.mix.alpha + cfg_.mix.beta) {
      task.is_sct = true;
      task.cls = cfg_.mix.sct_in_class1 ? 1 : 2;
    } else {
      task.cls = 2;
      task.is_sct = false;
    }
    const auto id = static_cast<std::int64_t>(tasks_.size());
    tasks_.push_back(task);

    if (busy_ < cfg_.params.servers) {
      begin_service(id, now);
      trace(TraceRecord::Kind::arrival, id, now);
      trace(TraceRecord::Kind::start, id, now);
    } else {
      (task.cls == 1 ? q1_ : q2_).push_back(id);
      trace(TraceRecord::Kind::arrival, id, now);
    }
  }

  void begin_service(std::int64_t id, double now) {
    Task& task = tasks_[id];
    task.start = now;
    ++busy_;
    schedule(now + task.demand, true, id);
  }

  void dispatch_next(double now) {
    std::deque<std::int64_t>* queue = nullptr;
    if (!q1_.empty())
      queue = &q1_;
    else if (!q2_.empty())
      queue = &q2_;
    if (queue == nullptr) return;
    const std::int64_t id = queue->front();
    queue->pop_front();
    begin_service(id, now);
    trace(TraceRecord::Kind::start, id, now);
  }

  void record_completion(const Task& task) {
    const double wait = task.start - task.arrival;
    ++result_.completed;
    sum_sojourn_ += task.departure - task.arrival;
    if (task.cls == 1) {
      ++result_.completed1;
      sum_w1_ += wait;
    } else {
      ++result_.completed2;
      sum_w2_ += wait;
    }
    if (task.is_sct) {
      ++result_.completed_sct;
      sum_w_sct_ += wait;
    }
  }

  void trace(TraceRecord::Kind kind, std::int64_t id, double now) {
    if (!opt_.trace) return;
    const Task& task = tasks_[id];
    opt_.trace(TraceRecord{now, kind, id, task.cls, task.is_sct,
                           static_cast<int>(q1_.size()),
                           static_cast<int>(q2_.size()), busy_});
  }

  void finalize() {
    if (result_.completed == 0)
      throw InsufficientHorizonError("no post-warmup completions");
    const auto n = static_cast<double>(result_.completed);
    result_.mean_sojourn = sum_sojourn_ / n;
    if (result_.completed1 > 0) result_.mean_w1 = sum_w1_ / result_.completed1;
    if (result_.completed2 > 0) result_.mean_w2 = sum_w2_ / result_.completed2;
    if (result_.completed_sct > 0)
      result_.mean_w_sct = sum_w_sct_ / result_.completed_sct;
    result_.divergence_warning = !is_stable(cfg_.params);
    if (opt_.collect_tasks) {
      result_.tasks.reserve(tasks_.size());
      for (std::size_t i = 0; i < tasks_.size(); ++i) {
        const Task& t = tasks_[i];
        result_.tasks.push_back(TaskRecord{static_cast<std::int64_t>(i), t.cls,
                                           t.is_sct, t.arrival, t.start,
                                           t.departure, t.demand});
      }
    }
  }

  const SimConfig& cfg_;
  const ReplicationOptions& opt_;
  std::mt19937_64 rng_;
  std::priority_queue<Event, std::vector<Event>, LaterFirst> calendar_;
  std::uint64_t seq_ = 0;
  std::vector<Task> tasks_;
  std::deque<std::int64_t> q1_;
  std::deque<std::int64_t> q2_;
  int busy_ = 0;
  double sum_w1_ = 0.0;
  double sum_w2_ = 0.0;
  double sum_w_sct_ = 0.0;
  double sum_sojourn_ = 0.0;
  ReplicationResult result_;
};

Estimate across(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return Estimate{mean, sd / std::sqrt(n)};
}

} // namespace

void SimConfig::validate() const {
  params.validate();
  mix.validate();
  if (horizon_tasks < 1) throw ParameterError("horizon_tasks must be >= 1");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
    throw ParameterError("warmup_fraction must be in [0, 1)");
  if (replications < 2)
    throw ParameterError("replications must be >= 2 (standard errors are "
                         "computed across replications)");
  const auto warmup =
      static_cast<std::int64_t>(warmup_fraction * horizon_tasks);
  if (horizon_tasks - warmup < 10000)
    throw ParameterError(
        "horizon too short: need >= 10000 post-warmup completions");
}

ReplicationResult run_replication(const SimConfig& config, std::uint64_t seed,
                                  const ReplicationOptions& options) {
  config.params.validate();
  config.mix.validate();
  if (!(config.warmup_fraction >= 0.0 && config.warmup_fraction < 1.0))
    throw ParameterError("warmup_fraction must be in [0, 1)");
  return Replication(config, seed, options).run();
}

ReplicationResult run_replication(const SimConfig& config,
                                  std::uint64_t seed) {
  return run_replication(config, seed, ReplicationOptions{});
}

SimStats run_simulation(const SimConfig& config) {
  config.validate();
  const int reps = config.replications;

  std::vector<ReplicationResult> runs(reps);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min(hw, static_cast<unsigned>(reps));
  std::vector<std::future<void>> pending;
  pending.reserve(workers);
  std::atomic<int> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pending.push_back(std::async(std::launch::async, [&] {
      for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1))
        runs[r] = run_replication(config, config.seed + r);
    }));
  }
  for (auto& f : pending) f.get();

  std::vector<double> w1s, w2s, sct, pop, util;
  w1s.reserve(reps);
  w2s.reserve(reps);
  sct.reserve(reps);
  pop.reserve(reps);
  util.reserve(reps);
  SimStats stats;
  for (const ReplicationResult& r : runs) {
    w1s.push_back(r.mean_w1);
    w2s.push_back(r.mean_w2);
    sct.push_back(r.mean_w_sct);
    pop.push_back(measure_mean_tasks(r));
    const double window = r.window_end - r.window_start;
    util.push_back(window > 0.0
                       ? r.busy_integral / (window * config.params.servers)
                       : 0.0);
    stats.completed_class1 += r.completed1;
    stats.completed_class2 += r.completed2;
    stats.completed_sct += r.completed_sct;
    stats.divergence_warning |= r.divergence_warning;
  }
  stats.w1 = across(w1s);
  stats.w2 = across(w2s);
  stats.w_sct = across(sct);
  stats.mean_tasks_in_system = across(pop);
  stats.utilization_observed = across(util).mean;
  stats.replications = reps;
  return stats;
}

double measure_mean_tasks(const ReplicationResult& run) {
  const double window = run.window_end - run.window_start;
  return window > 0.0 ? run.population_integral / window : 0.0;
}

void write_trace_record(std::ostream& os, const TraceRecord& record) {
  const char* kind = record.kind == TraceRecord::Kind::arrival ? "arrival"
                     : record.kind == TraceRecord::Kind::start ? "start"
                                                               : "departure";
  os << record.time << ',' << kind << ',' << record.task_id << ','
     << record.cls << ',' << (record.is_sct ? 1 : 0) << ',' << record.queue1
     << ',' << record.queue2 << ',' << record.busy << '\n';
}

} // namespace fogcap
