#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pcmas/zero_sum_solver.hpp"

using namespace pcmas;

namespace {

// strat1 guarantees value - eps against all columns and strat2 caps the
// row player at value + eps against all rows; together they certify the
// game value to within eps without any external oracle.
void check_guarantees(const ZeroSumGame& g, const ZeroSumSolution& sol,
                      double eps = 1e-6) {
  REQUIRE(sol.strat1.is_valid());
  REQUIRE(sol.strat2.is_valid());
  for (int j = 0; j < g.cols(); ++j) {
    double v = 0.0;
    for (int i = 0; i < g.rows(); ++i) v += sol.strat1.probs[i] * g.at(i, j);
    CHECK(v >= sol.value - eps);
  }
  for (int i = 0; i < g.rows(); ++i) {
    double v = 0.0;
    for (int j = 0; j < g.cols(); ++j) v += sol.strat2.probs[j] * g.at(i, j);
    CHECK(v <= sol.value + eps);
  }
}

}  // namespace

TEST_CASE("projected prisoner's dilemma has a pure saddle at 5") {
  ZeroSumGame gp(2, 2, {-2, -10, 10, 5});
  ZeroSumSolution sol = solve_zero_sum(gp);
  CHECK(sol.value == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(sol.strat1.probs[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.strat2.probs[1] == doctest::Approx(1.0).epsilon(1e-9));
  check_guarantees(gp, sol);
}

TEST_CASE("mixed 2x2 equilibrium") {
  ZeroSumGame g(2, 2, {3, -1, -2, 4});
  ZeroSumSolution sol = solve_zero_sum(g);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.strat1.probs[0] == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(sol.strat1.probs[1] == doctest::Approx(0.4).epsilon(1e-9));
  check_guarantees(g, sol);
}

TEST_CASE("1x1 game") {
  ZeroSumGame g(1, 1, {-3.5});
  ZeroSumSolution sol = solve_zero_sum(g);
  CHECK(sol.value == doctest::Approx(-3.5));
  CHECK(sol.strat1.probs == std::vector<double>{1.0});
  CHECK(sol.strat2.probs == std::vector<double>{1.0});
}

TEST_CASE("agrees with the closed-form oracle on random 2x2 games") {
  Rng rng(11);
  for (int round = 0; round < 300; ++round) {
    ZeroSumGame g = oracles::random_zero_sum(rng, 2, 2);
    ZeroSumSolution sol = solve_zero_sum(g);
    oracles::TwoByTwo expected = oracles::solve_2x2(g);
    CHECK(std::abs(sol.value - expected.value) < 1e-6);
    check_guarantees(g, sol);
  }
}

TEST_CASE("agrees with the grid-search oracle on random 3x3 games") {
  Rng rng(13);
  for (int round = 0; round < 25; ++round) {
    ZeroSumGame g = oracles::random_zero_sum(rng, 3, 3);
    ZeroSumSolution sol = solve_zero_sum(g);
    double grid_value = oracles::grid_search_value(g);
    CHECK(std::abs(sol.value - grid_value) < 1e-6);
    check_guarantees(g, sol);
  }
}

TEST_CASE("guarantees hold on rectangular and larger games") {
  Rng rng(17);
  for (int round = 0; round < 40; ++round) {
    int rows = 1 + static_cast<int>(rng.next_below(6));
    int cols = 1 + static_cast<int>(rng.next_below(6));
    ZeroSumGame g = oracles::random_zero_sum(rng, rows, cols);
    check_guarantees(g, solve_zero_sum(g));
  }
}

TEST_CASE("degenerate ties") {
  ZeroSumGame flat(3, 3, std::vector<double>(9, 2.5));
  ZeroSumSolution sol = solve_zero_sum(flat);
  CHECK(sol.value == doctest::Approx(2.5));
  check_guarantees(flat, sol);
}
