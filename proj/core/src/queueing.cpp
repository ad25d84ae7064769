#include "fogcap/queueing.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace fogcap {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

[[noreturn]] void throw_unstable(double rho, const QueueParameters& q) {
  std::ostringstream os;
  os << "unstable configuration: rho = " << rho << " > " << 1.0 - kStabilityMargin
     << " (lambda=" << q.arrival_rate << ", mu=" << q.service_rate
     << ", m=" << q.servers << ")";
  throw InstabilityError(os.str());
}

struct ErlangTerms {
  double p0;
  double p_wait;
};

// Evaluates Eq. (2)/(3) with every term expressed relative to the largest
// term t_peak = a^peak/peak!, a = m*rho. Ratios decay away from the peak,
// so the sums never overflow regardless of m.
ErlangTerms erlang(const QueueParameters& q, double rho) {
  const int m = q.servers;
  const double a = q.arrival_rate / q.service_rate; // m * rho
  const double tail = 1.0 / (1.0 - rho);
  const int peak = static_cast<int>(a); // <= m-1 since rho < 1

  double sum = 0.0; // sum_{k=0}^{m-1} t_k / t_peak
  double r = 1.0;
  for (int k = peak; k >= 0; --k) {
    sum += r;
    if (k > 0) r *= static_cast<double>(k) / a;
  }
  r = 1.0;
  for (int k = peak + 1; k < m; ++k) {
    r *= a / static_cast<double>(k);
    sum += r;
  }
  const double r_m = r * a / m; // t_m / t_peak
  const double total = sum + r_m * tail;

  const double log_t_peak = peak * std::log(a) - std::lgamma(peak + 1.0);
  ErlangTerms out;
  out.p0 = std::exp(-log_t_peak) / total;
  out.p_wait = r_m * tail / total;
  return out;
}

double stable_rho(const QueueParameters& q) {
  q.validate();
  const double rho = utilization(q);
  if (rho > 1.0 - kStabilityMargin) throw_unstable(rho, q);
  return rho;
}

} // namespace

void QueueParameters::validate() const {
  if (!finite_positive(arrival_rate))
    throw ParameterError("arrival_rate must be finite and > 0");
  if (!finite_positive(service_rate))
    throw ParameterError("service_rate must be finite and > 0");
  if (servers < 1) throw ParameterError("servers must be >= 1");
}

void ArrivalProfile::validate() const {
  for (double r : device_rates)
    if (!(std::isfinite(r) && r >= 0.0))
      throw ParameterError("device rates must be finite and >= 0");
  if (!(std::isfinite(cloud_offload_rate) && cloud_offload_rate >= 0.0))
    throw ParameterError("cloud_offload_rate must be finite and >= 0");
}

void ClassMix::validate() const {
  if (!(std::isfinite(alpha) && alpha >= 0.0))
    throw ParameterError("alpha must be finite and >= 0");
  if (!(std::isfinite(beta) && beta >= 0.0))
    throw ParameterError("beta must be finite and >= 0");
  if (alpha + beta > 1.0)
    throw ParameterError("alpha + beta must not exceed 1");
}

double net_arrival_rate(const ArrivalProfile& profile) {
  profile.validate();
  const double total = std::accumulate(profile.device_rates.begin(),
                                       profile.device_rates.end(), 0.0);
  if (profile.cloud_offload_rate > total)
    throw ParameterError("cloud_offload_rate exceeds the total device rate");
  return total - profile.cloud_offload_rate;
}

double utilization(const QueueParameters& params) {
  params.validate();
  return params.arrival_rate / (params.servers * params.service_rate);
}

bool is_stable(const QueueParameters& params) {
  return utilization(params) <= 1.0 - kStabilityMargin;
}

double steady_state_p0(const QueueParameters& params) {
  const double rho = stable_rho(params);
  return erlang(params, rho).p0;
}

double wait_probability(const QueueParameters& params) {
  const double rho = stable_rho(params);
  return erlang(params, rho).p_wait;
}

double mean_tasks(const QueueParameters& params) {
  const double rho = stable_rho(params);
  return params.servers * rho + rho / (1.0 - rho) * erlang(params, rho).p_wait;
}

ClassUtilization class_utilizations(double rho, const ClassMix& mix) {
  mix.validate();
  if (!(std::isfinite(rho) && rho >= 0.0))
    throw ParameterError("rho must be finite and >= 0");
  if (rho > 1.0 - kStabilityMargin)
    throw InstabilityError("rho must be < 1 to split class utilizations");
  const double share1 = mix.sct_in_class1 ? mix.alpha + mix.beta : mix.alpha;
  const double rho1 = share1 * rho;
  return {rho1, rho - rho1}; // rho1 + rho2 == rho exactly
}

double residual_service_time(double p_wait, const QueueParameters& params,
                             const ClassUtilization& util, double mu1,
                             double mu2) {
  params.validate();
  if (!finite_positive(mu1) || !finite_positive(mu2))
    throw ParameterError("class service rates must be finite and > 0");
  const double m_rho = params.arrival_rate / params.service_rate;
  if (m_rho == 0.0) return 0.0; // no load, nothing in service
  return p_wait / m_rho * (util.rho1 / mu1 + util.rho2 / mu2);
}

double residual_service_time(double p_wait, const QueueParameters& params,
                             const ClassUtilization& util) {
  return residual_service_time(p_wait, params, util, params.service_rate,
                               params.service_rate);
}

std::pair<double, double> class_delays(double w0, const ClassUtilization& util) {
  if (util.rho1 > 1.0 - kStabilityMargin ||
      util.rho1 + util.rho2 > 1.0 - kStabilityMargin)
    throw InstabilityError("class utilizations leave no stable capacity");
  const double w1 = w0 / (1.0 - util.rho1);
  const double w2 = w0 / ((1.0 - util.rho1 - util.rho2) * (1.0 - util.rho1));
  return {w1, w2};
}

DelayReport full_report(const QueueParameters& params, const ClassMix& mix) {
  const double rho = stable_rho(params);
  const ErlangTerms e = erlang(params, rho);
  const ClassUtilization util = class_utilizations(rho, mix);
  const double w0 = residual_service_time(e.p_wait, params, util);
  const auto [w1, w2] = class_delays(w0, util);

  DelayReport rep;
  rep.rho = rho;
  rep.rho1 = util.rho1;
  rep.rho2 = util.rho2;
  rep.p0 = e.p0;
  rep.p_wait = e.p_wait;
  rep.mean_tasks = params.servers * rho + rho / (1.0 - rho) * e.p_wait;
  rep.residual = w0;
  rep.w1 = w1;
  rep.w2 = w2;
  return rep;
}

} // namespace fogcap
