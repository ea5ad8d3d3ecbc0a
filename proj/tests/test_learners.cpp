#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pcmas/learners.hpp"

using namespace pcmas;

TEST_CASE("boltzmann basics") {
  std::array<double, 2> even{0.0, 0.0};
  auto p = boltzmann(even, 5.0);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));

  std::array<double, 2> q{1.0, 0.0};
  p = boltzmann(q, 1.0);
  CHECK(p[0] == doctest::Approx(0.7310585786).epsilon(1e-5));
  CHECK(p[1] == doctest::Approx(0.2689414214).epsilon(1e-5));

  CHECK_THROWS_AS(boltzmann(q, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(boltzmann(q, -1.0), std::invalid_argument);
}

TEST_CASE("boltzmann is stable and normalized at extreme ratios") {
  std::array<double, 2> q{10.0, -6.0};
  auto p = boltzmann(q, 0.01);  // |q/T| = 1600: naive exp would overflow
  CHECK(p[0] > 1.0 - 1e-12);
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));

  std::array<double, 3> wide{700.0, -700.0, 0.0};
  auto probs = boltzmann(wide, 1.0);
  double sum = probs[0] + probs[1] + probs[2];
  CHECK(std::isfinite(sum));
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boltzmann limits") {
  std::array<double, 2> q{2.0, 1.0};
  CHECK(boltzmann(q, 1e-3)[0] > 1.0 - 1e-12);     // argmax in the cold limit
  auto hot = boltzmann(q, 1e6);                   // uniform in the hot limit
  CHECK(hot[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("blind learner update") {
  BqlState s;
  s.update(0, 10.0);
  CHECK(s.q[0] == doctest::Approx(1.0));
  CHECK(s.q[1] == 0.0);

  s.q = {1.0, 0.0};
  s.update(0, -13.0);
  CHECK(s.q[0] == doctest::Approx(-0.4));

  BqlState frozen;
  frozen.alpha = 0.0;
  frozen.q = {3.0, -2.0};
  frozen.update(0, 100.0);
  CHECK(frozen.q[0] == 3.0);
}

TEST_CASE("q-learner update") {
  QlState s(1);
  s.update(0, 0, 10.0, 1);
  CHECK(s.q_at(0, 0) == doctest::Approx(1.0));
  CHECK(s.current_state == 1);

  QlState t(1);
  t.q_at(1, 0) = -6.0;
  t.q_at(1, 1) = -7.0;
  t.update(0, 1, 13.0, 1);
  CHECK(t.q_at(0, 1) == doctest::Approx(0.76));  // 0.1 * (13 + 0.9 * -6)

  QlState frozen(1, 0.0);
  frozen.update(0, 0, 100.0, 0);
  CHECK(frozen.q_at(0, 0) == 0.0);
}

TEST_CASE("q-learner update touches exactly one cell") {
  QlState s(2);
  for (auto& v : s.q) v = 0.25;
  std::vector<double> before = s.q;
  s.update(5, 1, 3.0, 9);
  int changed = 0;
  for (std::size_t k = 0; k < s.q.size(); ++k)
    if (s.q[k] != before[k]) ++changed;
  CHECK(changed == 1);
  CHECK(s.q_at(5, 1) != 0.25);
}

TEST_CASE("state encoding") {
  using Joint = std::array<int, 2>;
  const Joint cc{0, 0}, dd{1, 1}, cd{0, 1}, dc{1, 0};
  CHECK(encode_state(std::vector{cc}, 1) == 0);
  CHECK(encode_state(std::vector{dd}, 1) == 3);

  // older (Coop, Defect), recent (Defect, Coop): 4*1 + 2
  CHECK(encode_state(std::vector{cd, dc}, 2) == 6);

  CHECK_THROWS_AS(encode_state(std::vector{cc}, 2), std::invalid_argument);
}

TEST_CASE("state shifting matches the encoding") {
  using Joint = std::array<int, 2>;
  const Joint cc{0, 0}, cd{0, 1}, dc{1, 0};
  QlState s(2);
  s.current_state = encode_state(std::vector{cd, dc}, 2);
  // new joint action (Coop, Coop): the (C,D) pair falls out of the window
  CHECK(s.next_state(0, 0) == encode_state(std::vector{dc, cc}, 2));
}

TEST_CASE("temperature schedules") {
  auto decay = TemperatureSchedule::decay();
  CHECK(temperature_at(decay, 0) == doctest::Approx(75.0));
  CHECK(temperature_at(decay, 1) == doctest::Approx(67.55).epsilon(1e-9));
  CHECK(std::abs(temperature_at(decay, 200) - 0.5) < 1e-6);

  auto fixed = TemperatureSchedule::fixed(2.5);
  CHECK(temperature_at(fixed, 0) == 2.5);
  CHECK(temperature_at(fixed, 123456) == 2.5);
}

TEST_CASE("sampling frequencies and determinism") {
  BqlState even;
  Rng rng(5);
  int coop = 0;
  for (int k = 0; k < 100000; ++k) coop += act(even, 1.0, rng) == kCoop;
  CHECK(std::abs(coop / 100000.0 - 0.5) < 0.005);

  BqlState sharp;
  sharp.q = {10.0, -6.0};
  Rng rng2(6);
  for (int k = 0; k < 100000; ++k) REQUIRE(act(sharp, 0.01, rng2) == kCoop);

  Rng a(9), b(9);
  BqlState s;
  for (int k = 0; k < 1000; ++k) CHECK(act(s, 2.0, a) == act(s, 2.0, b));
}

TEST_CASE("acting consumes exactly one uniform draw") {
  BqlState bql;
  QlState ql(2);
  Rng acted(77), advanced(77);
  act(bql, 1.5, acted);
  advanced.next_double();
  CHECK(acted.next_u64() == advanced.next_u64());

  Rng acted_ql(78), advanced_ql(78);
  act(ql, 1.5, acted_ql);
  advanced_ql.next_double();
  CHECK(acted_ql.next_u64() == advanced_ql.next_u64());
}

TEST_CASE("values stay inside the reward range") {
  // convex-combination closure: with rewards from the teaching matrix
  // and zero initialization, q never leaves [-13, 13]
  const double rewards[4] = {10, -13, 13, -6};
  BqlState s;
  Rng rng(321);
  for (int k = 0; k < 1000000; ++k) {
    int action = static_cast<int>(rng.next_below(2));
    double reward = rewards[rng.next_below(4)];
    s.update(action, reward);
    REQUIRE(s.q[action] >= -13.0);
    REQUIRE(s.q[action] <= 13.0);
  }
}
