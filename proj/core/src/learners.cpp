#include "pcmas/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcmas {

std::vector<double> boltzmann(std::span<const double> q, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (q.empty()) throw std::invalid_argument("empty action-value vector");

  double top = *std::max_element(q.begin(), q.end()) / T;
  std::vector<double> probs(q.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    probs[i] = std::exp(q[i] / T - top);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

double boltzmann_p0(double q0, double q1, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("temperature must be positive");
  double top = std::max(q0, q1) / T;
  double e0 = std::exp(q0 / T - top);
  double e1 = std::exp(q1 / T - top);
  return e0 / (e0 + e1);
}

QlState::QlState(int memory, double alpha, double gamma)
    : memory(memory), alpha(alpha), gamma(gamma) {
  if (memory < 1) throw std::invalid_argument("QL memory must be >= 1");
  q.assign(static_cast<std::size_t>(num_states()) * 2, 0.0);
}

void QlState::update(int s0, int action, double reward, int s1) {
  if (s0 < 0 || s0 >= num_states() || s1 < 0 || s1 >= num_states())
    throw std::out_of_range("QL state out of range");
  q_at(s0, action) =
      (1.0 - alpha) * q_at(s0, action) + alpha * (reward + gamma * state_value(s1));
  current_state = s1;
}

int encode_state(std::span<const std::array<int, 2>> history, int memory) {
  if (static_cast<int>(history.size()) != memory)
    throw std::invalid_argument("history length must equal the memory size");
  int state = 0;
  for (const auto& joint : history)  // oldest first => most significant first
    state = state * 4 + 2 * joint[0] + joint[1];
  return state;
}

double temperature_at(const TemperatureSchedule& schedule, long long n) {
  if (n < 0) throw std::invalid_argument("step must be >= 0");
  if (schedule.kind == TemperatureSchedule::Kind::fixed) return schedule.t;
  if (schedule.rate == 1.0) return schedule.t0 + schedule.offset * n;
  // T(n) = fp + (t0 - fp) rate^n around the fixed point fp = offset/(1-rate)
  double fp = schedule.offset / (1.0 - schedule.rate);
  return fp + (schedule.t0 - fp) * std::pow(schedule.rate, static_cast<double>(n));
}

int act(const BqlState& s, double T, Rng& rng) {
  double p0 = boltzmann_p0(s.q[0], s.q[1], T);
  return rng.next_double() < p0 ? 0 : 1;
}

int act(const QlState& s, double T, Rng& rng) {
  double p0 =
      boltzmann_p0(s.q_at(s.current_state, 0), s.q_at(s.current_state, 1), T);
  return rng.next_double() < p0 ? 0 : 1;
}

}  // namespace pcmas
