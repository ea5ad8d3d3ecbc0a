#pragma once

#include <optional>
#include <utility>

#include "pcmas/matrix_game.hpp"
#include "pcmas/zero_sum_solver.hpp"

namespace pcmas {

/// Punishing strategies for both roles. punish_as_p1 is player 1's
/// minimax strategy in the projected game; punish_as_p2 is player 1's
/// strategy in the projection of the role-swapped game. v and v_prime
/// are the corresponding game values, so a deviator's guaranteed payoff
/// ceiling is -v (resp. -v_prime) in each role.
struct PunishmentPlan {
  MixedStrategy punish_as_p1;
  MixedStrategy punish_as_p2;
  double v = 0.0;
  double v_prime = 0.0;
};

PunishmentPlan punishment_plan(const MatrixGame& g);

/// (b, b'): the best payoff a deviator can obtain in each role against
/// an opponent playing the law.
std::pair<double, double> incentive(const MatrixGame& g, JointAction law);

/// Efficient solution minimizing b + b'; ties broken lexicographically.
JointAction best_social_law(const MatrixGame& g);

/// Expected per-encounter payoff of a single malicious agent among n-1
/// others of which p punish:
///   (n-1-p)/(2(n-1)) * (b+b') - p/(2(n-1)) * (v+v').
/// Requires n >= 2 and 0 <= p <= n-1.
double expected_malicious_payoff(const MatrixGame& g, JointAction law, int n,
                                 int p);

struct DeterrenceReport {
  double b = 0.0, b_prime = 0.0;  ///< best deviation payoffs per role
  double e = 0.0, e_prime = 0.0;  ///< law payoffs per role
  double v = 0.0, v_prime = 0.0;  ///< projected-game values
  int n = 0;
  /// Least p in [0, n-1] for which deviation becomes strictly
  /// unprofitable; empty when no punisher count deters.
  std::optional<int> p_min;
};

/// Scans p = 0..n-1 for the least count satisfying the strict deterrence
/// inequality. Throws std::invalid_argument when n < 2 or the law is out
/// of bounds.
DeterrenceReport deterrence_report(const MatrixGame& g, JointAction law,
                                   int n);

}  // namespace pcmas
