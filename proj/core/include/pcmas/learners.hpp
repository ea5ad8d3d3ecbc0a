#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pcmas/rng.hpp"

namespace pcmas {

// Two-action convention used throughout the teaching code: the promoted
// action (Coop in the prisoner's dilemma, action "1" of a game matrix)
// has index 0 for both players.
inline constexpr int kCoop = 0;
inline constexpr int kDefect = 1;

/// Softmax selection probabilities P(a) proportional to exp(q[a]/T),
/// computed with max-subtraction so extreme q/T ratios neither overflow
/// nor underflow. Throws std::invalid_argument when T <= 0.
std::vector<double> boltzmann(std::span<const double> q, double T);

/// Probability of action 0 in the two-action case.
double boltzmann_p0(double q0, double q1, double T);

/// Blind Q-learner: one exponentially averaged value per action.
struct BqlState {
  std::array<double, 2> q{0.0, 0.0};
  double alpha = 0.1;

  void update(int action, double reward) {
    q[action] = (1.0 - alpha) * q[action] + alpha * reward;
  }
};

/// Q-learner over states encoding the last `memory` joint actions.
/// Each joint action is the base-4 digit 2*(own action) + (other action),
/// most recent digit least significant.
struct QlState {
  explicit QlState(int memory, double alpha = 0.1, double gamma = 0.9);

  int memory = 1;
  double alpha = 0.1;
  double gamma = 0.9;
  std::vector<double> q;  ///< num_states() x 2, row-major, zero-initialized
  int current_state = 0;

  int num_states() const { return 1 << (2 * memory); }

  double q_at(int s, int a) const { return q[2 * s + a]; }
  double& q_at(int s, int a) { return q[2 * s + a]; }

  /// max_a q(s, a)
  double state_value(int s) const {
    return q_at(s, 0) > q_at(s, 1) ? q_at(s, 0) : q_at(s, 1);
  }

  /// q(s0,a) <- (1-alpha) q(s0,a) + alpha (R + gamma V(s1));
  /// current_state moves to s1.
  void update(int s0, int action, double reward, int s1);

  /// State reached from current_state after observing a joint action.
  int next_state(int own_action, int other_action) const {
    return (current_state * 4 + 2 * own_action + other_action) &
           (num_states() - 1);
  }
};

/// Encodes a full history window (oldest first) of (own, other) action
/// pairs. Throws std::invalid_argument unless history.size() == memory.
int encode_state(std::span<const std::array<int, 2>> history, int memory);

/// Fixed temperature, or the decay recurrence
/// T(0) = t0, T(n+1) = T(n)*rate + offset.
struct TemperatureSchedule {
  enum class Kind { fixed, decay };

  Kind kind = Kind::fixed;
  double t = 1.0;  ///< fixed temperature
  double t0 = 75.0, rate = 0.9, offset = 0.05;

  static TemperatureSchedule fixed(double temperature) {
    return {Kind::fixed, temperature, 0, 0, 0};
  }
  static TemperatureSchedule decay(double t0 = 75.0, double rate = 0.9,
                                   double offset = 0.05) {
    return {Kind::decay, 0, t0, rate, offset};
  }
};

/// Temperature at step n (n >= 0). The decay value is computed in closed
/// form around the recurrence fixed point offset/(1-rate), which is
/// algebraically identical to iterating the recurrence.
double temperature_at(const TemperatureSchedule& schedule, long long n);

/// Boltzmann-samples an action; consumes exactly one uniform draw.
int act(const BqlState& s, double T, Rng& rng);
int act(const QlState& s, double T, Rng& rng);

}  // namespace pcmas
