#include "delgame/game.hpp"

#include <algorithm>

namespace delgame {

ExitIndices exit_indices(std::span<const long> x_increments,
                         std::span<const long> y_increments, long threshold_a,
                         long threshold_b) {
  long nu1 = -1, nu2 = -1;
  long sum_x = 0, sum_y = 0;
  const size_t len = std::max(x_increments.size(), y_increments.size());
  for (size_t i = 0; i < len; ++i) {
    if (nu1 < 0 && i < x_increments.size()) {
      sum_x += x_increments[i];
      if (sum_x >= threshold_a) nu1 = static_cast<long>(i);
    }
    if (nu2 < 0 && i < y_increments.size()) {
      sum_y += y_increments[i];
      if (sum_y >= threshold_b) nu2 = static_cast<long>(i);
    }
    if (nu1 >= 0 && nu2 >= 0) break;
  }
  if (nu1 < 0)
    fail(ErrorCode::NoCrossing, "x path never reaches its threshold");
  if (nu2 < 0)
    fail(ErrorCode::NoCrossing, "y path never reaches its threshold");
  return {nu1, nu2, std::min(nu1, nu2)};
}

}  // namespace delgame
