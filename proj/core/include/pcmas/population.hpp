#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcmas/matrix_game.hpp"

namespace pcmas {

enum class MaliciousPolicy {
  exploit,   ///< always best-respond to the law, unable to tell agent types
  rational,  ///< decide once, ex ante, whether deviation pays
};

/// Population of n agents matched pairwise: p punishers, c conformers,
/// m malicious (p + c + m = n).
struct PopulationConfig {
  int n = 0, p = 0, c = 0, m = 0;
  MatrixGame game;
  JointAction law;
  MaliciousPolicy malicious_policy = MaliciousPolicy::exploit;
  double mal_vs_mal_payoff = 0.0;
  long long iterations = 0;
  std::uint64_t seed = 0;

  void validate() const;  ///< throws std::invalid_argument on bad counts
};

struct RoleStats {
  double total_payoff = 0.0;
  long long encounters = 0;

  double mean_payoff() const {
    return encounters ? total_payoff / encounters : 0.0;
  }
};

struct PopStats {
  RoleStats punishing, conforming, malicious;
  long long deviations = 0;    ///< malicious non-law actions observed
  long long punishments = 0;   ///< punisher participations in punishment mode
  std::vector<long long> participations;  ///< per agent

  /// Sample standard deviation of the malicious per-encounter payoff.
  double malicious_payoff_sd = 0.0;
};

/// Simulates the iterative game: each iteration an unordered pair is
/// drawn uniformly, roles are assigned by a fair coin, conformers and
/// pre-trigger punishers play the law, malicious agents play per policy,
/// and after the first observed deviation every punisher permanently
/// switches to its punishing strategy (grim trigger). Two malicious
/// agents who meet each receive mal_vs_mal_payoff. Deterministic given
/// the seed. When trace is non-null, one CSV row per iteration is
/// written: iter,agent1,agent2,action1,action2,pay1,pay2 (agents and
/// actions 1-based).
PopStats run_population(const PopulationConfig& config,
                        std::ostream* trace = nullptr);

enum class DeviationVerdict { deviates, conforms };

/// The ex-ante comparison a rational malicious agent makes: conform
/// exactly when the expected deviation payoff is strictly below the law
/// payoff (e+e')/2.
DeviationVerdict rational_deviation_check(const PopulationConfig& config);

// JSON config, law 1-based; "game" is either a file path or an inline
// game object:
// {"n":16,"p":9,"c":6,"m":1,"game":"example1.json","law":[1,1],
//  "malicious_policy":"exploit","mal_vs_mal_payoff":0,
//  "iterations":100000,"seed":1}
PopulationConfig population_config_from_json(const std::string& text);
PopulationConfig load_population_config(const std::filesystem::path& path);
std::string pop_stats_to_json(const PopStats& stats);

}  // namespace pcmas
