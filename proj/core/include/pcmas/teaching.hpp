#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcmas/learners.hpp"

namespace pcmas {

/// 2x2 teaching game seen from the student's side. Rows are student
/// actions (1, 2), columns teacher actions (I, II):
///   a = (1, I)   b = (1, II)
///   c = (2, I)   d = (2, II)
/// The optional teacher entries use the same layout but hold the
/// teacher's own reward. `target` is the student action the teacher
/// promotes; `u` is the teacher's valuation of student actions and
/// defaults to u(target) = 1, u(other) = 0.
struct TeachingGame {
  double a = 0, b = 0, c = 0, d = 0;
  std::optional<std::array<double, 4>> teacher_entries;
  int target = kCoop;
  std::array<double, 2> u{1.0, 0.0};

  double student_payoff(int student_action, int teacher_action) const;
  /// Throws std::invalid_argument when the game has no teacher entries.
  double teacher_payoff(int student_action, int teacher_action) const;

  double min_student_payoff() const;
  double max_student_payoff() const;

  /// The prisoner's dilemma instance used throughout the teaching
  /// experiments: a=10, b=-13, c=13, d=-6, symmetric teacher entries.
  static TeachingGame prisoners_dilemma();
  /// The block-pushing coordination game: (3,3) (2,6) / (6,2) (1,1) with
  /// action 0 = push hard; the promoted student action is "hard".
  static TeachingGame block_pushing();
};

// JSON: {"a":10,"b":-13,"c":13,"d":-6,
//        "teacher":{"a":10,"b":13,"c":-13,"d":-6},
//        "target":1, "u":[1,0]}
// "teacher" and "u" are optional; "target" is the 1-based student action.
TeachingGame teaching_game_from_json(const std::string& text);
std::string teaching_game_to_json(const TeachingGame& g);
TeachingGame load_teaching_game(const std::filesystem::path& path);

enum class GameClass { dominant, preemptable, challenging };

struct Classification {
  GameClass kind = GameClass::challenging;
  /// For preemptable games, the teacher action under which the target
  /// action strictly beats the alternative.
  std::optional<int> preempt_action;
};

/// Three-way rule on the target action's dominance. With target = 0:
/// a > c and b > d is dominant; exactly one strict inequality is
/// preemptable; anything else (including ties) is challenging.
Classification classify(const TeachingGame& g);

/// a + b + gamma (a + c) - (c + d + gamma (b + d)):
/// the predictor of mirroring-teacher success on a Q-learning student.
double dif(const TeachingGame& g, double gamma);

struct SessionLog {
  struct Round {
    std::uint8_t student = 0;
    std::uint8_t teacher = 0;
    double reward = 0.0;
  };
  std::vector<Round> rounds;

  /// Fraction of student actions equal to `action` within [from, to).
  double rate_of(int action, std::size_t from, std::size_t to) const;
  /// Fraction of student actions equal to action 0 over the whole log.
  double coop_rate() const { return rate_of(kCoop, 0, rounds.size()); }
};

using Student = std::variant<BqlState, QlState>;

/// A teacher behavior with per-session mutable state. One instance per
/// session; sessions on different threads must use distinct instances.
class Teacher {
 public:
  virtual ~Teacher() = default;

  /// Called once before the first round. May draw from rng (drawn before
  /// the student's own session-start draws).
  virtual void begin_session(const Student& student, Rng& rng);

  /// Action for round n (0-based). Stochastic teachers draw from rng.
  virtual int act(long long n, Rng& rng) = 0;

  /// Joint outcome of round n, reported after both actions resolved.
  virtual void observe(int student_action, int teacher_action,
                       double student_reward);

  virtual std::string name() const = 0;
};

class FixedActionTeacher final : public Teacher {
 public:
  explicit FixedActionTeacher(int action) : action_(action) {}
  int act(long long, Rng&) override { return action_; }
  std::string name() const override;

 private:
  int action_;
};

/// Mirrors the student's previous action; opens with Coop.
class TftTeacher final : public Teacher {
 public:
  int act(long long, Rng&) override { return last_student_; }
  void observe(int student_action, int, double) override {
    last_student_ = student_action;
  }
  std::string name() const override { return "tft"; }

 private:
  int last_student_ = kCoop;
};

/// Defects only after two consecutive student defections; opens Coop.
class TwoTftTeacher final : public Teacher {
 public:
  int act(long long, Rng&) override {
    return (prev1_ == kDefect && prev2_ == kDefect) ? kDefect : kCoop;
  }
  void observe(int student_action, int, double) override {
    prev2_ = prev1_;
    prev1_ = student_action;
  }
  std::string name() const override { return "2tft"; }

 private:
  int prev1_ = kCoop;  // student action at n-1
  int prev2_ = kCoop;  // student action at n-2
};

/// Plays before_action for the first switch_at rounds, after_action from
/// then on.
class DelayedSwitchTeacher final : public Teacher {
 public:
  DelayedSwitchTeacher(long long switch_at, int before_action,
                       int after_action);
  int act(long long n, Rng&) override {
    return n < switch_at_ ? before_ : after_;
  }
  std::string name() const override;

 private:
  long long switch_at_;
  int before_;
  int after_;
};

/// "Teaching" with another learner: the teacher runs its own BQL or QL
/// over the game's teacher entries, with its own schedule. A QL teacher
/// encodes joint actions from its own perspective (own action in the
/// high bit of the digit).
class LearnerTeacher final : public Teacher {
 public:
  LearnerTeacher(Student learner, TeachingGame game,
                 TemperatureSchedule schedule);

  void begin_session(const Student& student, Rng& rng) override;
  int act(long long n, Rng& rng) override;
  void observe(int student_action, int teacher_action, double) override;
  std::string name() const override { return "learner"; }

  const Student& learner() const { return learner_; }

 private:
  Student learner_;
  TeachingGame game_;
  TemperatureSchedule schedule_;
};

/// Runs one teaching session of `iterations` rounds. Per round:
/// temperature from the schedule, teacher acts (seeing history up to the
/// previous round), student Boltzmann-samples, the student's payoff
/// comes from the game matrix, the student updates (QL state advances by
/// the joint action), and the teacher observes the outcome.
/// Deterministic given the seed.
SessionLog run_session(Student student, Teacher& teacher,
                       const TeachingGame& game, long long iterations,
                       const TemperatureSchedule& schedule,
                       std::uint64_t seed);

/// Convenience overload when the final student state is needed.
SessionLog run_session(Student& student, Teacher& teacher,
                       const TeachingGame& game, long long iterations,
                       const TemperatureSchedule& schedule, Rng& rng);

}  // namespace pcmas
