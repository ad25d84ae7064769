#pragma once

#include <utility>
#include <vector>

#include "fogcap/errors.hpp"

namespace fogcap {

/// Loads with rho above 1 - kStabilityMargin are treated as unstable.
inline constexpr double kStabilityMargin = 1e-9;

/// The (lambda, mu, m) triple of an M/M/m station.
struct QueueParameters {
  double arrival_rate; ///< lambda, tasks/s into the fog layer
  double service_rate; ///< mu, tasks/s per fog node
  int servers;         ///< m, fog node count

  void validate() const; ///< throws ParameterError on bad values
};

/// Per-device task sources plus the stream offloaded straight to the cloud.
struct ArrivalProfile {
  std::vector<double> device_rates;
  double cloud_offload_rate = 0.0;

  void validate() const;
};

/// Traffic split into priority classes. alpha is the delay-sensitive share,
/// beta the system-critical (SCT) share; SCT tasks join class 1 or class 2
/// according to sct_in_class1.
struct ClassMix {
  double alpha;
  double beta;
  bool sct_in_class1 = false;

  void validate() const;
};

/// Per-server utilization split between the two priority classes.
/// rho1 + rho2 == rho exactly by construction.
struct ClassUtilization {
  double rho1;
  double rho2;
};

/// Closed-form M/M/m quantities for one configuration.
struct DelayReport {
  double rho;        ///< lambda / (m mu)
  double rho1;       ///< class-1 utilization
  double rho2;       ///< class-2 utilization
  double p0;         ///< empty-system steady-state probability
  double p_wait;     ///< probability an arrival has to queue (Erlang C)
  double mean_tasks; ///< mean number of tasks in the system
  double residual;   ///< W0, mean residual service seen by a queued arrival, s
  double w1;         ///< mean class-1 queueing delay, s
  double w2;         ///< mean class-2 queueing delay, s
};

/// Net task rate reaching the fog layer: sum of device rates minus the
/// cloud-offloaded stream. Throws ParameterError if the offload exceeds
/// the total.
double net_arrival_rate(const ArrivalProfile& profile);

/// Per-server utilization rho = lambda / (m mu).
double utilization(const QueueParameters& params);

/// True iff rho <= 1 - kStabilityMargin.
bool is_stable(const QueueParameters& params);

/// Steady-state probability of an empty system,
///   pi0 = [ sum_{k<m} (m rho)^k/k! + (m rho)^m/m! * 1/(1-rho) ]^-1.
/// Evaluated by term ratios normalized at the largest term; no factorials,
/// no overflow for large m. Throws InstabilityError when rho is unstable.
double steady_state_p0(const QueueParameters& params);

/// Erlang C: probability an arriving task must wait,
///   P_m = (m rho)^m / (m! (1-rho)) * pi0.
double wait_probability(const QueueParameters& params);

/// Mean number of tasks in the system, K = m rho + rho/(1-rho) * P_m.
double mean_tasks(const QueueParameters& params);

/// Split rho between the classes: (alpha*rho, rho - alpha*rho) with SCT in
/// class 2, ((alpha+beta)*rho, remainder) with SCT in class 1.
ClassUtilization class_utilizations(double rho, const ClassMix& mix);

/// Mean residual service time seen by a queued arrival,
///   W0 = P_m/(m rho) * (rho1/mu1 + rho2/mu2).
/// Defined as 0 when the system carries no load.
double residual_service_time(double p_wait, const QueueParameters& params,
                             const ClassUtilization& util, double mu1,
                             double mu2);

/// Equal-class-rate form: mu1 = mu2 = params.service_rate, which collapses
/// W0 to P_m/(m mu).
double residual_service_time(double p_wait, const QueueParameters& params,
                             const ClassUtilization& util);

/// Non-preemptive priority queueing delays:
///   W1 = W0/(1-rho1),  W2 = W0/((1-rho1-rho2)(1-rho1)).
/// W1 <= W2 always. Throws InstabilityError when either class saturates.
std::pair<double, double> class_delays(double w0, const ClassUtilization& util);

/// Evaluate everything above for one configuration.
DelayReport full_report(const QueueParameters& params, const ClassMix& mix);

/// Mean sojourn time for a class with queueing delay `wait`. Not compared
/// against thresholds anywhere; thresholds apply to queueing delay only.
inline double sojourn_time(double wait, double service_rate) {
  return wait + 1.0 / service_rate;
}

} // namespace fogcap
