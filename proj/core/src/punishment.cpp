#include "pcmas/punishment.hpp"

#include <limits>
#include <stdexcept>

namespace pcmas {

PunishmentPlan punishment_plan(const MatrixGame& g) {
  ZeroSumSolution as_p1 = solve_zero_sum(project(g));
  ZeroSumSolution as_p2 = solve_zero_sum(project(transpose(g)));
  return {std::move(as_p1.strat1), std::move(as_p2.strat1), as_p1.value,
          as_p2.value};
}

std::pair<double, double> incentive(const MatrixGame& g, JointAction law) {
  if (!g.in_bounds(law)) throw std::invalid_argument("law outside the game");
  double b = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.rows(); ++i) b = std::max(b, g.payoff1(i, law.j));
  double b_prime = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.cols(); ++j)
    b_prime = std::max(b_prime, g.payoff2(law.i, j));
  return {b, b_prime};
}

JointAction best_social_law(const MatrixGame& g) {
  JointAction best{};
  double best_sum = std::numeric_limits<double>::infinity();
  for (JointAction law : efficient_solutions(g)) {
    auto [b, b_prime] = incentive(g, law);
    if (b + b_prime < best_sum) {  // first hit wins ties: scan is lexicographic
      best_sum = b + b_prime;
      best = law;
    }
  }
  return best;
}

double expected_malicious_payoff(const MatrixGame& g, JointAction law, int n,
                                 int p) {
  if (n < 2) throw std::invalid_argument("population needs n >= 2");
  if (p < 0 || p > n - 1)
    throw std::invalid_argument("punisher count must be in [0, n-1]");
  auto [b, b_prime] = incentive(g, law);
  PunishmentPlan plan = punishment_plan(g);
  double others = n - 1;
  return (others - p) / (2.0 * others) * (b + b_prime) -
         p / (2.0 * others) * (plan.v + plan.v_prime);
}

DeterrenceReport deterrence_report(const MatrixGame& g, JointAction law,
                                   int n) {
  if (n < 2) throw std::invalid_argument("population needs n >= 2");
  if (!g.in_bounds(law)) throw std::invalid_argument("law outside the game");

  DeterrenceReport report;
  report.n = n;
  std::tie(report.b, report.b_prime) = incentive(g, law);
  const Payoffs& at_law = g.payoff(law);
  report.e = at_law.p1;
  report.e_prime = at_law.p2;
  PunishmentPlan plan = punishment_plan(g);
  report.v = plan.v;
  report.v_prime = plan.v_prime;

  // Least p making deviation strictly unprofitable:
  //   (n-1-p)/(n-1) (b+b') - p/(n-1) (v+v') < e+e'
  // Scanned rather than rearranged; n is small in every intended use and
  // the scan keeps the strictness of the inequality explicit.
  double others = n - 1;
  for (int p = 0; p <= n - 1; ++p) {
    double deviation = (others - p) / others * (report.b + report.b_prime) -
                       p / others * (report.v + report.v_prime);
    if (deviation < report.e + report.e_prime) {
      report.p_min = p;
      break;
    }
  }
  return report;
}

}  // namespace pcmas
