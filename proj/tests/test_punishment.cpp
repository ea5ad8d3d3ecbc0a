#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pcmas/punishment.hpp"

using namespace pcmas;

namespace {

MatrixGame example1() {
  return {2, 2, {{2, 2}, {-10, 10}, {10, -10}, {-5, -5}}};
}

MatrixGame example2() {
  return {2, 2, {{0, 0}, {-10, 10}, {10, -10}, {-5, -5}}};
}

}  // namespace

TEST_CASE("punishment plan for the prisoner's dilemma") {
  PunishmentPlan plan = punishment_plan(example1());
  CHECK(plan.v == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(plan.v_prime == doctest::Approx(5.0).epsilon(1e-9));
  // pure strategy 2 in both roles; deviator ceiling is -5
  CHECK(plan.punish_as_p1.probs[1] == doctest::Approx(1.0));
  CHECK(plan.punish_as_p2.probs[1] == doctest::Approx(1.0));
}

TEST_CASE("symmetric games punish identically in both roles") {
  for (const MatrixGame& g : {example1(), example2()}) {
    PunishmentPlan plan = punishment_plan(g);
    CHECK(plan.v == plan.v_prime);
    REQUIRE(plan.punish_as_p1.probs.size() == plan.punish_as_p2.probs.size());
    for (std::size_t k = 0; k < plan.punish_as_p1.probs.size(); ++k)
      CHECK(plan.punish_as_p1.probs[k] ==
            doctest::Approx(plan.punish_as_p2.probs[k]));
  }
}

TEST_CASE("plan value matches the grid oracle on the projected matrix") {
  PunishmentPlan plan = punishment_plan(example2());
  double grid = oracles::grid_search_value(project(example2()));
  CHECK(std::abs(plan.v - grid) < 1e-6);
}

TEST_CASE("guarantee property on random games") {
  // Playing punish_as_p1 in g holds player 2 below -v + eps whatever
  // pure strategy player 2 uses, and symmetrically for punish_as_p2.
  Rng rng(31);
  for (int round = 0; round < 40; ++round) {
    int rows = 1 + static_cast<int>(rng.next_below(4));
    int cols = 1 + static_cast<int>(rng.next_below(4));
    MatrixGame g = oracles::random_matrix_game(rng, rows, cols);
    PunishmentPlan plan = punishment_plan(g);

    for (int j = 0; j < cols; ++j) {
      double opp = 0.0;
      for (int i = 0; i < rows; ++i)
        opp += plan.punish_as_p1.probs[i] * g.payoff2(i, j);
      CHECK(opp <= -plan.v + 1e-6);
    }
    for (int i = 0; i < rows; ++i) {
      double opp = 0.0;
      for (int j = 0; j < cols; ++j)
        opp += plan.punish_as_p2.probs[j] * g.payoff1(i, j);
      CHECK(opp <= -plan.v_prime + 1e-6);
    }
  }
}

TEST_CASE("incentive to deviate") {
  CHECK(incentive(example2(), {0, 0}) == std::pair{10.0, 10.0});
  CHECK(incentive(example2(), {1, 0}) == std::pair{10.0, -5.0});
  CHECK(incentive(example2(), {0, 1}) == std::pair{-5.0, 10.0});

  MatrixGame constant(2, 2, std::vector<Payoffs>(4, {4, 4}));
  CHECK(incentive(constant, {0, 0}) == std::pair{4.0, 4.0});
}

TEST_CASE("best social law minimizes b + b'") {
  CHECK(best_social_law(example2()) == JointAction{0, 1});
  CHECK(best_social_law(example1()) == JointAction{0, 0});

  MatrixGame constant(2, 2, std::vector<Payoffs>(4, {4, 4}));
  CHECK(best_social_law(constant) == JointAction{0, 0});
}

TEST_CASE("expected malicious payoff") {
  MatrixGame pd = example1();
  CHECK(expected_malicious_payoff(pd, {0, 0}, 16, 9) == doctest::Approx(1.0));
  CHECK(expected_malicious_payoff(pd, {0, 0}, 16, 0) == doctest::Approx(10.0));
  CHECK(expected_malicious_payoff(pd, {0, 0}, 16, 15) == doctest::Approx(-5.0));
  CHECK_THROWS_AS(expected_malicious_payoff(pd, {0, 0}, 16, 16),
                  std::invalid_argument);
}

TEST_CASE("deterrence thresholds") {
  MatrixGame pd = example1();

  DeterrenceReport r16 = deterrence_report(pd, {0, 0}, 16);
  CHECK(r16.b + r16.b_prime == 20);
  CHECK(r16.e + r16.e_prime == 4);
  CHECK(r16.v + r16.v_prime == doctest::Approx(10.0));
  REQUIRE(r16.p_min.has_value());
  CHECK(*r16.p_min == 9);  // p=8 leaves the deviator exactly at the law payoff

  DeterrenceReport r2 = deterrence_report(pd, {0, 0}, 2);
  REQUIRE(r2.p_min.has_value());
  CHECK(*r2.p_min == 1);

  // with the law already a best response (b+b' = e+e'), a single
  // punisher tips the strict inequality; p = 0 cannot, since the
  // deviation payoff then equals the law payoff exactly
  MatrixGame tame(2, 2, {{5, 5}, {1, 1}, {1, 1}, {0, 0}});
  DeterrenceReport tame_report = deterrence_report(tame, {0, 0}, 8);
  REQUIRE(tame_report.p_min.has_value());
  CHECK(*tame_report.p_min == 1);
  CHECK(tame_report.b + tame_report.b_prime ==
        tame_report.e + tame_report.e_prime);

  CHECK_THROWS_AS(deterrence_report(pd, {0, 0}, 1), std::invalid_argument);
}

TEST_CASE("p_min is the least p satisfying the strict inequality") {
  Rng rng(77);
  for (int round = 0; round < 30; ++round) {
    MatrixGame g = oracles::random_matrix_game(rng, 2, 3);
    JointAction law = best_social_law(g);
    int n = 3 + static_cast<int>(rng.next_below(14));
    DeterrenceReport report = deterrence_report(g, law, n);

    const Payoffs& at_law = g.payoff(law);
    double law_value = (at_law.p1 + at_law.p2) / 2.0;
    std::optional<int> expected;
    for (int p = 0; p <= n - 1; ++p) {
      if (expected_malicious_payoff(g, law, n, p) < law_value) {
        expected = p;
        break;
      }
    }
    CHECK(report.p_min == expected);
  }
}

TEST_CASE("deviation payoff decreases in the punisher count") {
  MatrixGame pd = example1();
  double previous = expected_malicious_payoff(pd, {0, 0}, 16, 0);
  for (int p = 1; p <= 15; ++p) {
    double current = expected_malicious_payoff(pd, {0, 0}, 16, p);
    CHECK(current < previous);
    previous = current;
  }
}
