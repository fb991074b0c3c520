#pragma once

#include <span>
#include <vector>

#include "delgame/params.hpp"

namespace delgame {

struct ExitIndices {
  long nu1;  // first index with cumulative x >= threshold_a
  long nu2;  // first index with cumulative y >= threshold_b
  long rho;  // min(nu1, nu2): index at which the game is seen to end
};

/// Scans per-interval casualty increments (index 0 first) and returns the
/// exit indices. Both thresholds must be crossed somewhere in the supplied
/// paths, otherwise NoCrossing is thrown.
ExitIndices exit_indices(std::span<const long> x_increments,
                         std::span<const long> y_increments, long threshold_a,
                         long threshold_b);

/// One simulated game. Increments are recorded only on request.
struct PathOutcome {
  long nu1 = 0;
  long nu2 = 0;
  long rho = 0;
  double tau_rho = 0.0;  // observation epoch at which defeat is seen
  double tau_pre = 0.0;  // epoch of the last observation before that
  long a_rho = 0;
  long b_rho = 0;
  long a_pre = 0;
  long b_pre = 0;
  std::vector<long> x_increments;
  std::vector<long> y_increments;
};

}  // namespace delgame
