#pragma once

#include <vector>

#include "pcmas/matrix_game.hpp"

namespace pcmas {

/// Probability vector over one player's actions.
struct MixedStrategy {
  std::vector<double> probs;

  /// Entries in [0,1] (within eps) and summing to 1 within 1e-9.
  bool is_valid(double eps = 1e-9) const;

  friend bool operator==(const MixedStrategy&, const MixedStrategy&) = default;
};

/// Minimax solution of a zero-sum game. strat1 guarantees player 1 at
/// least value - 1e-6 against every pure column; strat2 holds player 1
/// to at most value + 1e-6 against every pure row. The solver verifies
/// both bounds before returning.
struct ZeroSumSolution {
  double value = 0.0;
  MixedStrategy strat1;
  MixedStrategy strat2;
};

/// Solves the game by linear programming (dense simplex with Bland's
/// rule on the normalized form). Exact up to round-off for the small
/// matrices this library works with.
ZeroSumSolution solve_zero_sum(const ZeroSumGame& g);

}  // namespace pcmas
