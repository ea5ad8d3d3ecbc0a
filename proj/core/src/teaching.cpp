#include "pcmas/teaching.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pcmas {

double TeachingGame::student_payoff(int student_action,
                                    int teacher_action) const {
  if (student_action < 0 || student_action > 1 || teacher_action < 0 ||
      teacher_action > 1)
    throw std::out_of_range("teaching-game actions are 0 or 1");
  if (student_action == 0) return teacher_action == 0 ? a : b;
  return teacher_action == 0 ? c : d;
}

double TeachingGame::teacher_payoff(int student_action,
                                    int teacher_action) const {
  if (!teacher_entries)
    throw std::invalid_argument("game has no teacher payoff entries");
  if (student_action < 0 || student_action > 1 || teacher_action < 0 ||
      teacher_action > 1)
    throw std::out_of_range("teaching-game actions are 0 or 1");
  const auto& t = *teacher_entries;
  if (student_action == 0) return teacher_action == 0 ? t[0] : t[1];
  return teacher_action == 0 ? t[2] : t[3];
}

double TeachingGame::min_student_payoff() const {
  return std::min({a, b, c, d});
}

double TeachingGame::max_student_payoff() const {
  return std::max({a, b, c, d});
}

TeachingGame TeachingGame::prisoners_dilemma() {
  TeachingGame g;
  g.a = 10;
  g.b = -13;
  g.c = 13;
  g.d = -6;
  // symmetric game: the teacher's reward at (s, t) is the student's at (t, s)
  g.teacher_entries = {{10, 13, -13, -6}};
  g.target = kCoop;
  g.u = {1.0, 0.0};
  return g;
}

TeachingGame TeachingGame::block_pushing() {
  TeachingGame g;
  g.a = 3;   // both push hard
  g.b = 2;   // student hard, teacher gentle
  g.c = 6;   // student gentle, teacher hard
  g.d = 1;   // both gentle
  g.teacher_entries = {{3, 6, 2, 1}};
  g.target = 0;  // push hard
  g.u = {1.0, 0.0};
  return g;
}

TeachingGame teaching_game_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TeachingGame g;
  g.a = j.at("a").get<double>();
  g.b = j.at("b").get<double>();
  g.c = j.at("c").get<double>();
  g.d = j.at("d").get<double>();
  if (j.contains("teacher")) {
    const auto& t = j.at("teacher");
    g.teacher_entries = {{t.at("a").get<double>(), t.at("b").get<double>(),
                          t.at("c").get<double>(), t.at("d").get<double>()}};
  }
  if (j.contains("target")) {
    int target = j.at("target").get<int>();  // 1-based in files
    if (target != 1 && target != 2)
      throw std::invalid_argument("target must be 1 or 2");
    g.target = target - 1;
  }
  g.u = {g.target == 0 ? 1.0 : 0.0, g.target == 1 ? 1.0 : 0.0};
  if (j.contains("u")) {
    const auto& u = j.at("u");
    if (!u.is_array() || u.size() != 2)
      throw std::invalid_argument("u must be a pair");
    g.u = {u[0].get<double>(), u[1].get<double>()};
  }
  return g;
}

std::string teaching_game_to_json(const TeachingGame& g) {
  nlohmann::json j{{"a", g.a}, {"b", g.b}, {"c", g.c}, {"d", g.d}};
  if (g.teacher_entries) {
    const auto& t = *g.teacher_entries;
    j["teacher"] = {{"a", t[0]}, {"b", t[1]}, {"c", t[2]}, {"d", t[3]}};
  }
  j["target"] = g.target + 1;
  j["u"] = {g.u[0], g.u[1]};
  return j.dump(2);
}

TeachingGame load_teaching_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open game file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return teaching_game_from_json(buffer.str());
}

Classification classify(const TeachingGame& g) {
  // Payoffs of the target and the alternative action under each teacher
  // column. target_vs[t] > other_vs[t] means teacher action t makes the
  // target look strictly better. Any tie classifies as challenging: the
  // easy-teaching arguments need strict dominance.
  double target_vs_0 = g.target == 0 ? g.a : g.c;
  double target_vs_1 = g.target == 0 ? g.b : g.d;
  double other_vs_0 = g.target == 0 ? g.c : g.a;
  double other_vs_1 = g.target == 0 ? g.d : g.b;

  if (target_vs_0 == other_vs_0 || target_vs_1 == other_vs_1)
    return {GameClass::challenging, {}};
  bool wins_0 = target_vs_0 > other_vs_0;
  bool wins_1 = target_vs_1 > other_vs_1;
  if (wins_0 && wins_1) return {GameClass::dominant, {}};
  if (wins_0) return {GameClass::preemptable, 0};
  if (wins_1) return {GameClass::preemptable, 1};
  return {GameClass::challenging, {}};
}

double dif(const TeachingGame& g, double gamma) {
  return g.a + g.b + gamma * (g.a + g.c) - (g.c + g.d + gamma * (g.b + g.d));
}

double SessionLog::rate_of(int action, std::size_t from, std::size_t to) const {
  to = std::min(to, rounds.size());
  if (from >= to) return 0.0;
  std::size_t hits = 0;
  for (std::size_t k = from; k < to; ++k)
    if (rounds[k].student == action) ++hits;
  return static_cast<double>(hits) / static_cast<double>(to - from);
}

void Teacher::begin_session(const Student&, Rng&) {}
void Teacher::observe(int, int, double) {}

std::string FixedActionTeacher::name() const {
  return action_ == kCoop ? "fixed:I" : "fixed:II";
}

DelayedSwitchTeacher::DelayedSwitchTeacher(long long switch_at,
                                           int before_action, int after_action)
    : switch_at_(switch_at), before_(before_action), after_(after_action) {
  if (switch_at < 0) throw std::invalid_argument("switch threshold must be >= 0");
}

std::string DelayedSwitchTeacher::name() const {
  return "delayed:" + std::to_string(switch_at_);
}

LearnerTeacher::LearnerTeacher(Student learner, TeachingGame game,
                               TemperatureSchedule schedule)
    : learner_(std::move(learner)), game_(std::move(game)),
      schedule_(schedule) {
  if (!game_.teacher_entries)
    throw std::invalid_argument("learner teacher needs teacher payoff entries");
}

void LearnerTeacher::begin_session(const Student&, Rng& rng) {
  if (auto* ql = std::get_if<QlState>(&learner_))
    ql->current_state = static_cast<int>(rng.next_below(ql->num_states()));
}

int LearnerTeacher::act(long long n, Rng& rng) {
  double T = temperature_at(schedule_, n);
  return std::visit([&](const auto& l) { return pcmas::act(l, T, rng); },
                    learner_);
}

void LearnerTeacher::observe(int student_action, int teacher_action, double) {
  double reward = game_.teacher_payoff(student_action, teacher_action);
  if (auto* bql = std::get_if<BqlState>(&learner_)) {
    bql->update(teacher_action, reward);
  } else {
    auto& ql = std::get<QlState>(learner_);
    int s0 = ql.current_state;
    // from the teacher's own perspective: own action first
    int s1 = ql.next_state(teacher_action, student_action);
    ql.update(s0, teacher_action, reward, s1);
  }
}

SessionLog run_session(Student& student, Teacher& teacher,
                       const TeachingGame& game, long long iterations,
                       const TemperatureSchedule& schedule, Rng& rng) {
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");

  teacher.begin_session(student, rng);
  if (auto* ql = std::get_if<QlState>(&student)) {
    // fictitious uniformly random prior history, logged as a seeded draw
    ql->current_state = static_cast<int>(rng.next_below(ql->num_states()));
  }

  SessionLog log;
  log.rounds.reserve(static_cast<std::size_t>(iterations));
  for (long long n = 0; n < iterations; ++n) {
    double T = temperature_at(schedule, n);
    int teacher_action = teacher.act(n, rng);
    int student_action =
        std::visit([&](const auto& s) { return act(s, T, rng); }, student);
    double reward = game.student_payoff(student_action, teacher_action);

    if (auto* bql = std::get_if<BqlState>(&student)) {
      bql->update(student_action, reward);
    } else {
      auto& ql = std::get<QlState>(student);
      int s0 = ql.current_state;
      int s1 = ql.next_state(student_action, teacher_action);
      ql.update(s0, student_action, reward, s1);
    }
    teacher.observe(student_action, teacher_action, reward);
    log.rounds.push_back({static_cast<std::uint8_t>(student_action),
                          static_cast<std::uint8_t>(teacher_action), reward});
  }
  return log;
}

SessionLog run_session(Student student, Teacher& teacher,
                       const TeachingGame& game, long long iterations,
                       const TemperatureSchedule& schedule,
                       std::uint64_t seed) {
  Rng rng(seed);
  return run_session(student, teacher, game, iterations, schedule, rng);
}

}  // namespace pcmas
