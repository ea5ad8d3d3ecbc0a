#include "pcmas/population.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "pcmas/punishment.hpp"
#include "pcmas/rng.hpp"

namespace pcmas {

void PopulationConfig::validate() const {
  if (n < 2) throw std::invalid_argument("population needs n >= 2");
  if (p < 0 || c < 0 || m < 0)
    throw std::invalid_argument("agent counts must be non-negative");
  if (p + c + m != n)
    throw std::invalid_argument("agent counts must satisfy p + c + m = n");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!game.in_bounds(law)) throw std::invalid_argument("law outside the game");
}

namespace {

enum class Role { punishing, conforming, malicious };

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  long long count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double sd() const {
    if (count < 2) return 0.0;
    double mean = sum / count;
    return std::sqrt(std::max(0.0, (sum_sq - count * mean * mean) / (count - 1)));
  }
};

int sample(const MixedStrategy& strategy, Rng& rng) {
  double u = rng.next_double();
  double acc = 0.0;
  int last = static_cast<int>(strategy.probs.size()) - 1;
  for (int a = 0; a <= last; ++a) {
    acc += strategy.probs[a];
    if (u < acc) return a;
  }
  return last;
}

int best_response_as_p1(const MatrixGame& g, JointAction law) {
  int best = 0;
  for (int i = 1; i < g.rows(); ++i)
    if (g.payoff1(i, law.j) > g.payoff1(best, law.j)) best = i;
  return best;
}

int best_response_as_p2(const MatrixGame& g, JointAction law) {
  int best = 0;
  for (int j = 1; j < g.cols(); ++j)
    if (g.payoff2(law.i, j) > g.payoff2(law.i, best)) best = j;
  return best;
}

}  // namespace

DeviationVerdict rational_deviation_check(const PopulationConfig& config) {
  config.validate();
  const Payoffs& at_law = config.game.payoff(config.law);
  double law_value = (at_law.p1 + at_law.p2) / 2.0;
  double deviation_value =
      expected_malicious_payoff(config.game, config.law, config.n, config.p);
  // deviation happens only on a strict expected gain; an indifferent
  // agent conforms
  return deviation_value > law_value ? DeviationVerdict::deviates
                                     : DeviationVerdict::conforms;
}

PopStats run_population(const PopulationConfig& config, std::ostream* trace) {
  config.validate();
  Rng rng(config.seed);

  PunishmentPlan plan;
  if (config.p > 0) plan = punishment_plan(config.game);

  const int law_as_p1 = config.law.i;
  const int law_as_p2 = config.law.j;
  const int exploit_as_p1 = best_response_as_p1(config.game, config.law);
  const int exploit_as_p2 = best_response_as_p2(config.game, config.law);

  const bool malicious_deviates =
      config.malicious_policy == MaliciousPolicy::exploit ||
      rational_deviation_check(config) == DeviationVerdict::deviates;

  // agents [0, p) punish, [p, p+c) conform, [p+c, n) are malicious
  auto role_of = [&](int agent) {
    if (agent < config.p) return Role::punishing;
    if (agent < config.p + config.c) return Role::conforming;
    return Role::malicious;
  };

  PopStats stats;
  stats.participations.assign(config.n, 0);
  Accumulator by_role[3];
  Accumulator malicious_payoffs;
  bool triggered = false;

  if (trace) *trace << "iter,agent1,agent2,action1,action2,pay1,pay2\n";

  for (long long iter = 0; iter < config.iterations; ++iter) {
    // unordered pair, uniform without replacement
    int first = static_cast<int>(rng.next_below(config.n));
    int second = static_cast<int>(rng.next_below(config.n - 1));
    if (second >= first) ++second;
    // fair coin for the player-1 role
    bool first_is_p1 = rng.next_double() < 0.5;
    int agent1 = first_is_p1 ? first : second;
    int agent2 = first_is_p1 ? second : first;
    Role role1 = role_of(agent1);
    Role role2 = role_of(agent2);

    bool punished1 = role1 == Role::punishing && triggered;
    bool punished2 = role2 == Role::punishing && triggered;

    int action1;
    if (punished1)
      action1 = sample(plan.punish_as_p1, rng);
    else if (role1 == Role::malicious && malicious_deviates)
      action1 = exploit_as_p1;
    else
      action1 = law_as_p1;

    int action2;
    if (punished2)
      action2 = sample(plan.punish_as_p2, rng);
    else if (role2 == Role::malicious && malicious_deviates)
      action2 = exploit_as_p2;
    else
      action2 = law_as_p2;

    double pay1, pay2;
    if (role1 == Role::malicious && role2 == Role::malicious) {
      pay1 = pay2 = config.mal_vs_mal_payoff;
    } else {
      const Payoffs& cell = config.game.payoff({action1, action2});
      pay1 = cell.p1;
      pay2 = cell.p2;
    }

    if (role1 == Role::malicious && action1 != law_as_p1) ++stats.deviations;
    if (role2 == Role::malicious && action2 != law_as_p2) ++stats.deviations;
    if (punished1) ++stats.punishments;
    if (punished2) ++stats.punishments;

    by_role[static_cast<int>(role1)].add(pay1);
    by_role[static_cast<int>(role2)].add(pay2);
    if (role1 == Role::malicious) malicious_payoffs.add(pay1);
    if (role2 == Role::malicious) malicious_payoffs.add(pay2);
    ++stats.participations[agent1];
    ++stats.participations[agent2];

    if (trace)
      *trace << iter << ',' << agent1 + 1 << ',' << agent2 + 1 << ','
             << action1 + 1 << ',' << action2 + 1 << ',' << pay1 << ','
             << pay2 << '\n';

    // deviations this round are observed by every punisher from the next
    // round on (play is simultaneous)
    if (!triggered &&
        ((role1 == Role::malicious && action1 != law_as_p1) ||
         (role2 == Role::malicious && action2 != law_as_p2)))
      triggered = true;
  }

  auto fill = [&](RoleStats& out, const Accumulator& acc) {
    out.total_payoff = acc.sum;
    out.encounters = acc.count;
  };
  fill(stats.punishing, by_role[0]);
  fill(stats.conforming, by_role[1]);
  fill(stats.malicious, by_role[2]);
  stats.malicious_payoff_sd = malicious_payoffs.sd();
  return stats;
}

// --- JSON ---------------------------------------------------------------

PopulationConfig population_config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  PopulationConfig config;
  config.n = j.at("n").get<int>();
  config.p = j.at("p").get<int>();
  config.c = j.at("c").get<int>();
  config.m = j.at("m").get<int>();
  if (j.at("game").is_string())
    config.game = load_matrix_game(j.at("game").get<std::string>());
  else
    config.game = matrix_game_from_json(j.at("game").dump());
  const auto& law = j.at("law");
  if (!law.is_array() || law.size() != 2)
    throw std::invalid_argument("law must be a [i, j] pair (1-based)");
  config.law = {law[0].get<int>() - 1, law[1].get<int>() - 1};
  if (j.contains("malicious_policy")) {
    std::string policy = j.at("malicious_policy").get<std::string>();
    if (policy == "exploit")
      config.malicious_policy = MaliciousPolicy::exploit;
    else if (policy == "rational")
      config.malicious_policy = MaliciousPolicy::rational;
    else
      throw std::invalid_argument("malicious_policy must be exploit|rational");
  }
  if (j.contains("mal_vs_mal_payoff"))
    config.mal_vs_mal_payoff = j.at("mal_vs_mal_payoff").get<double>();
  config.iterations = j.at("iterations").get<long long>();
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  config.validate();
  return config;
}

PopulationConfig load_population_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return population_config_from_json(buffer.str());
}

std::string pop_stats_to_json(const PopStats& stats) {
  nlohmann::json j{
      {"punishing",
       {{"mean_payoff", stats.punishing.mean_payoff()},
        {"encounters", stats.punishing.encounters}}},
      {"conforming",
       {{"mean_payoff", stats.conforming.mean_payoff()},
        {"encounters", stats.conforming.encounters}}},
      {"malicious",
       {{"mean_payoff", stats.malicious.mean_payoff()},
        {"encounters", stats.malicious.encounters},
        {"payoff_sd", stats.malicious_payoff_sd}}},
      {"deviations", stats.deviations},
      {"punishments", stats.punishments},
      {"participations", stats.participations}};
  return j.dump(2);
}

}  // namespace pcmas
