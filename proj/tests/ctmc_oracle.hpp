#pragma once

// Test-only oracle: steady state of the M/M/m birth-death chain obtained by
// iterating the balance equations on a truncated state space. Keeps no code
// in common with the closed-form implementation it checks.

namespace fogcap::testing {

struct CtmcSolution {
  double p0;
  double p_wait;     // mass on states with all m servers busy
  double mean_tasks; // sum k * pi_k
  int states;        // truncation point actually used
};

// Truncates once the remaining (geometric) tail mass drops below
// `tail_mass` relative to the running total. Requires lambda < m * mu.
CtmcSolution solve_birth_death(double lambda, double mu, int m,
                               double tail_mass = 1e-12);

} // namespace fogcap::testing
