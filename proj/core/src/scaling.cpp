#include "fogcap/scaling.hpp"

#include <cmath>
#include <limits>

namespace fogcap {

namespace {

void check_state(const ScalingState& state, const ScalingPolicy& policy) {
  if (state.current_m < policy.m_min || state.current_m > state.effective_m_max ||
      state.effective_m_max > policy.m_max)
    throw ParameterError("scaling state outside policy bounds");
}

void check_load(double lambda, double mu) {
  if (!(std::isfinite(lambda) && lambda > 0.0))
    throw ParameterError("lambda must be finite and > 0");
  if (!(std::isfinite(mu) && mu > 0.0))
    throw ParameterError("mu must be finite and > 0");
}

} // namespace

void ScalingPolicy::validate() const {
  if (m_min < 1 || m_min > m_max)
    throw ParameterError("need 1 <= m_min <= m_max");
  if (!(w1_threshold > 0.0) || !(w_sct_threshold > 0.0))
    throw ParameterError("delay thresholds must be > 0");
  if (pool_size < m_min)
    throw ParameterError("pool_size cannot hold even m_min nodes");
}

ScalingState initial_state(int m_init, const ScalingPolicy& policy) {
  policy.validate();
  if (m_init < policy.m_min || m_init > policy.m_max)
    throw ParameterError("m_init outside [m_min, m_max]");
  if (policy.pool_size < m_init)
    throw ParameterError("pool_size cannot hold m_init nodes");
  return ScalingState{m_init, false, policy.m_max};
}

bool evaluate_sct_placement(double w2, const ScalingPolicy& policy) {
  return !(policy.w_sct_threshold > w2);
}

double class1_delay(double lambda, double mu, int m, const ClassMix& mix,
                    bool sct_in_class1) {
  QueueParameters q{lambda, mu, m};
  if (!is_stable(q)) return std::numeric_limits<double>::infinity();
  return full_report(q, ClassMix{mix.alpha, mix.beta, sct_in_class1}).w1;
}

ScalingState scale_up(ScalingState state, double lambda, double mu,
                      const ClassMix& mix, const ScalingPolicy& policy) {
  policy.validate();
  check_state(state, policy);
  check_load(lambda, mu);
  auto w1 = [&](int m) {
    return class1_delay(lambda, mu, m, mix, state.sct_in_class1);
  };
  while (w1(state.current_m) > policy.w1_threshold &&
         state.current_m < state.effective_m_max) {
    if (policy.pool_size - state.current_m > 0) {
      ++state.current_m;
    } else {
      state.effective_m_max = state.current_m; // pool exhausted, permanent
      break;
    }
  }
  return state;
}

ScalingState scale_down(ScalingState state, double lambda, double mu,
                        const ClassMix& mix, const ScalingPolicy& policy) {
  policy.validate();
  check_state(state, policy);
  check_load(lambda, mu);
  auto w1 = [&](int m) {
    return class1_delay(lambda, mu, m, mix, state.sct_in_class1);
  };
  auto stable_at = [&](int m) {
    return lambda / (m * mu) <= 1.0 - kStabilityMargin;
  };
  while (state.current_m > policy.m_min && stable_at(state.current_m - 1) &&
         w1(state.current_m - 1) <= policy.w1_threshold) {
    --state.current_m;
  }
  return state;
}

std::pair<ScalingState, ScalingDecision>
controller_step(ScalingState state, double lambda, double mu,
                const ClassMix& mix, const ScalingPolicy& policy) {
  policy.validate();
  check_state(state, policy);
  check_load(lambda, mu);
  mix.validate();

  const bool carried_placement = state.sct_in_class1;
  const double w1_now =
      class1_delay(lambda, mu, state.current_m, mix, carried_placement);
  ScalingState next = w1_now > policy.w1_threshold
                          ? scale_up(state, lambda, mu, mix, policy)
                          : scale_down(state, lambda, mu, mix, policy);

  ScalingDecision decision;
  decision.chosen_m = next.current_m;
  QueueParameters chosen{lambda, mu, next.current_m};
  if (is_stable(chosen)) {
    const DelayReport rep =
        full_report(chosen, ClassMix{mix.alpha, mix.beta, carried_placement});
    const bool sct1 = evaluate_sct_placement(rep.w2, policy);
    decision.sct_in_class1 = sct1;
    decision.w1 = rep.w1;
    decision.w2 = rep.w2;
    decision.w_sct = sct1 ? rep.w1 : rep.w2;
    decision.feasible = rep.w1 <= policy.w1_threshold;
    next.sct_in_class1 = sct1;
  } else {
    decision.sct_in_class1 = carried_placement;
    decision.feasible = false;
  }
  return {next, decision};
}

} // namespace fogcap
