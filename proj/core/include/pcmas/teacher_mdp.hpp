#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "pcmas/teaching.hpp"

namespace pcmas {

/// Uniform discretization of the student's (q(0), q(1)) plane into
/// cells x cells square cells over [q_lo, q_hi] per axis.
struct QGrid {
  double q_lo = -13.0;
  double q_hi = 13.0;
  int cells = 200;

  int num_states() const { return cells * cells; }
  double cell_width() const { return (q_hi - q_lo) / cells; }

  /// Cell index along one axis: values are clamped to [q_lo, q_hi], then
  /// floor((q - q_lo) * cells / (q_hi - q_lo)) with the top edge mapped
  /// to the last cell. Points exactly on a cell boundary round up.
  int axis_index(double q) const;

  double axis_center(int index) const {
    return q_lo + (index + 0.5) * cell_width();
  }

  /// Row-major state id of the nearest cell center.
  int state_of(double q0, double q1) const {
    return axis_index(q0) * cells + axis_index(q1);
  }

  std::pair<double, double> state_center(int state) const {
    return {axis_center(state / cells), axis_center(state % cells)};
  }

  void validate() const;  ///< q_lo < q_hi, cells >= 2
};

/// The teacher's decision process over the discretized student states.
/// For every (state, teacher action) there are at most two successors,
/// one per student action; rows sum to 1 within 1e-12 by construction.
struct TmdpModel {
  struct Transition {
    std::array<int, 2> succ{0, 0};
    std::array<double, 2> prob{0.0, 0.0};
  };

  QGrid grid;
  double temperature = 1.0;
  double alpha = 0.1;
  std::array<double, 2> u{1.0, 0.0};
  std::vector<std::array<Transition, 2>> trans;  ///< [state][teacher action]
  std::vector<double> reward;                    ///< U(s) = sum_a rho(s,a) u(a)

  int num_states() const { return static_cast<int>(reward.size()); }
};

/// Builds the model: at each cell center, the student's response is the
/// Boltzmann distribution at the fixed temperature, and the successor of
/// (state, student action, teacher action) is the grid snap of the
/// exponential-average update with the matrix payoff.
TmdpModel build_tmdp(const TeachingGame& game, const QGrid& grid,
                     double temperature, double alpha = 0.1);

struct PolicySolution {
  std::vector<double> value;
  std::vector<std::uint8_t> policy;
  double gamma0 = 0.99;
  double residual = 0.0;                  ///< final sup-norm residual
  std::vector<double> residual_history;   ///< one entry per sweep
};

/// Jacobi value iteration on
///   V(s) = U(s) + gamma0 * max_a sum_s' P(s,s',a) V(s')
/// until the sup-norm residual drops below tol. The series starts at the
/// current state, so V equals the discounted expected valuation of the
/// student's actions from that state. Ties in the argmax resolve to the
/// lowest action index. Throws std::invalid_argument unless
/// 0 <= gamma0 < 1 and tol > 0.
PolicySolution value_iteration(const TmdpModel& model, double gamma0 = 0.99,
                               double tol = 1e-6);

/// Fixed-policy value by iterating the same backup without the max.
/// Only state-dependent policies (one action per model state) can be
/// evaluated here; history-dependent behaviors such as the mirroring
/// teachers are not functions of the model state and are estimated by
/// Monte-Carlo rollout instead (mc_value in the experiments module).
std::vector<double> evaluate_policy(const TmdpModel& model,
                                    std::span<const std::uint8_t> policy,
                                    double gamma0, double tol = 1e-6);

/// Replays the student's exponential-average updates on exact
/// (unsnapped) values from a stream of (student action, reward) pairs.
std::pair<double, double> track_student(
    std::pair<double, double> q0, double alpha,
    std::span<const std::pair<int, double>> observed);

/// A solved policy packaged for execution and file storage.
struct TeachingPolicy {
  QGrid grid;
  double temperature = 1.0;
  double gamma0 = 0.99;
  double alpha = 0.1;
  std::vector<std::uint8_t> actions;
  std::vector<double> value;
};

TeachingPolicy make_teaching_policy(const TmdpModel& model,
                                    const PolicySolution& solution);

// Binary policy file, version 1, little-endian:
//   magic "PCMASPL1", u32 version, u32 cells,
//   f64 q_lo, q_hi, temperature, gamma0, alpha,
//   u8 action[cells^2] (row-major), f64 value[cells^2].
void save_policy(const std::filesystem::path& path, const TeachingPolicy& p);
TeachingPolicy load_policy(const std::filesystem::path& path);

/// Executes a solved policy against a live BQL student. The teacher
/// replays the student's updates on continuous values and snaps only for
/// the policy lookup. Must be armed with the student's initial state;
/// begin_session throws std::logic_error when the student is not a BQL
/// (a Q-learner's state cannot be tracked by this policy).
class PolicyTeacher final : public Teacher {
 public:
  explicit PolicyTeacher(std::shared_ptr<const TeachingPolicy> policy);

  void begin_session(const Student& student, Rng& rng) override;
  int act(long long n, Rng& rng) override;
  void observe(int student_action, int teacher_action,
               double student_reward) override;
  std::string name() const override { return "optimal"; }

  std::pair<double, double> tracked_q() const { return {q_[0], q_[1]}; }

 private:
  std::shared_ptr<const TeachingPolicy> policy_;
  std::array<double, 2> q_{0.0, 0.0};
  double alpha_ = 0.1;
  bool tracking_ = false;
};

/// Decay-schedule executor: holds policies solved at a grid of fixed
/// temperatures and, each round, applies the one whose temperature is
/// nearest (in log space) to the current scheduled temperature. An
/// approximation; outputs that use it are flagged as approximate.
class TemperatureGridPolicyTeacher final : public Teacher {
 public:
  TemperatureGridPolicyTeacher(
      std::vector<std::shared_ptr<const TeachingPolicy>> policies,
      TemperatureSchedule schedule);

  void begin_session(const Student& student, Rng& rng) override;
  int act(long long n, Rng& rng) override;
  void observe(int student_action, int teacher_action,
               double student_reward) override;
  std::string name() const override { return "optimal-decay"; }

 private:
  std::vector<std::shared_ptr<const TeachingPolicy>> policies_;  // by temperature
  TemperatureSchedule schedule_;
  std::array<double, 2> q_{0.0, 0.0};
  double alpha_ = 0.1;
  bool tracking_ = false;
};

/// The default temperature grid for decay-schedule execution:
/// `count` log-spaced temperatures from hi down to lo.
std::vector<double> log_temperature_grid(double hi = 75.0, double lo = 0.5,
                                         int count = 12);

}  // namespace pcmas
