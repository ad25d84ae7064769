#pragma once

#include <optional>
#include <utility>

#include "fogcap/queueing.hpp"

namespace fogcap {

/// Bounds and thresholds governing the dynamic fog-node allocation.
struct ScalingPolicy {
  int m_min;
  int m_max;
  double w1_threshold;    ///< class-1 delay target, s
  double w_sct_threshold; ///< SCT delay target, s
  int pool_size;          ///< fog nodes that exist and can be allocated

  void validate() const;
};

/// Mutable allocation state carried across controller steps.
/// effective_m_max starts at policy.m_max and is lowered permanently when
/// the node pool runs dry during a scale-up.
struct ScalingState {
  int current_m;
  bool sct_in_class1 = false;
  int effective_m_max;
};

/// One controller step's outcome. w1/w2 are evaluated at chosen_m under the
/// SCT placement the scaler enforced (the one carried into the step);
/// sct_in_class1 is the re-evaluated placement that takes effect next step,
/// and w_sct follows it (w1 when true, w2 when false). Delays are absent
/// when even chosen_m cannot stabilize the load.
struct ScalingDecision {
  int chosen_m;
  bool sct_in_class1;
  std::optional<double> w1;
  std::optional<double> w2;
  std::optional<double> w_sct;
  bool feasible;
};

/// State for a fresh scenario run starting at m_init nodes, SCT in class 2.
ScalingState initial_state(int m_init, const ScalingPolicy& policy);

/// SCT goes to class 1 exactly when w2 has reached the SCT threshold.
/// Ties count as reached: critical tasks get the conservative placement.
bool evaluate_sct_placement(double w2, const ScalingPolicy& policy);

/// Mean class-1 queueing delay at m servers; +infinity when unstable.
/// The placement flag inside `mix` is ignored; `sct_in_class1` decides.
double class1_delay(double lambda, double mu, int m, const ClassMix& mix,
                    bool sct_in_class1);

/// Add nodes one at a time while W1(m) exceeds the threshold and headroom
/// remains. An empty pool pins effective_m_max at the level reached.
ScalingState scale_up(ScalingState state, double lambda, double mu,
                      const ClassMix& mix, const ScalingPolicy& policy);

/// Release nodes while the (m-1)-node system would stay stable and within
/// the class-1 threshold, never below m_min.
ScalingState scale_down(ScalingState state, double lambda, double mu,
                        const ClassMix& mix, const ScalingPolicy& policy);

/// One full control pass: evaluate W1 under the carried SCT placement,
/// scale in the indicated direction, then re-evaluate the SCT placement
/// for the next step. Deterministic in its inputs.
std::pair<ScalingState, ScalingDecision>
controller_step(ScalingState state, double lambda, double mu,
                const ClassMix& mix, const ScalingPolicy& policy);

} // namespace fogcap
