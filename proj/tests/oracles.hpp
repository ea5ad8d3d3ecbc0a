// Test-only oracles, independent of the library's solver and
// value-iteration paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pcmas/matrix_game.hpp"
#include "pcmas/rng.hpp"
#include "pcmas/teacher_mdp.hpp"

namespace oracles {

struct TwoByTwo {
  double value;
  std::array<double, 2> strat1;
  std::array<double, 2> strat2;
};

// Closed-form 2x2 zero-sum solution: pure saddle point if one exists,
// otherwise the interior mixed equilibrium
//   v = (ad - bc) / (a + d - b - c),
//   p(row 1) = (d - c) / (a + d - b - c),
//   q(col 1) = (d - b) / (a + d - b - c).
inline TwoByTwo solve_2x2(const pcmas::ZeroSumGame& g) {
  const double a = g.at(0, 0), b = g.at(0, 1), c = g.at(1, 0), d = g.at(1, 1);

  double maximin = std::max(std::min(a, b), std::min(c, d));
  double minimax = std::min(std::max(a, c), std::max(b, d));
  if (maximin == minimax) {
    TwoByTwo out{maximin, {0, 0}, {0, 0}};
    out.strat1[std::min(a, b) >= std::min(c, d) ? 0 : 1] = 1.0;
    out.strat2[std::max(a, c) <= std::max(b, d) ? 0 : 1] = 1.0;
    return out;
  }
  double delta = a + d - b - c;
  double p = (d - c) / delta;
  double q = (d - b) / delta;
  return {(a * d - b * c) / delta, {p, 1 - p}, {q, 1 - q}};
}

// Value of a row-player mixed strategy: exact best response by the
// column player (minimum over pure columns).
inline double payoff_floor(const pcmas::ZeroSumGame& g,
                           const std::vector<double>& x) {
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.cols(); ++j) {
    double v = 0.0;
    for (int i = 0; i < g.rows(); ++i) v += x[i] * g.at(i, j);
    worst = std::min(worst, v);
  }
  return worst;
}

namespace detail {

// Enumerates simplex points with coordinates center +- radius on a grid
// of `steps` points per free axis and keeps the best payoff floor.
// `center` is taken by value: `best` may alias the caller's center.
inline void grid_pass(const pcmas::ZeroSumGame& g, std::vector<double> center,
                      double radius, int steps, std::vector<double>& best,
                      double& best_value) {
  const int m = g.rows();
  std::vector<double> x(m, 0.0);

  auto consider = [&](const std::vector<double>& candidate) {
    double v = payoff_floor(g, candidate);
    if (v > best_value) {
      best_value = v;
      best = candidate;
    }
  };

  if (m == 1) {
    consider({1.0});
    return;
  }

  auto coord = [&](int axis, int k) {
    double lo = std::max(0.0, center[axis] - radius);
    double hi = std::min(1.0, center[axis] + radius);
    return lo + (hi - lo) * k / (steps - 1);
  };

  if (m == 2) {
    for (int k = 0; k < steps; ++k) {
      x[0] = coord(0, k);
      x[1] = 1.0 - x[0];
      if (x[1] >= -1e-12) {
        x[1] = std::max(0.0, x[1]);
        consider(x);
      }
    }
    return;
  }
  // m == 3: two free axes
  for (int k0 = 0; k0 < steps; ++k0) {
    x[0] = coord(0, k0);
    for (int k1 = 0; k1 < steps; ++k1) {
      x[1] = coord(1, k1);
      x[2] = 1.0 - x[0] - x[1];
      if (x[2] >= -1e-12) {
        x[2] = std::max(0.0, x[2]);
        consider(x);
      }
    }
  }
}

}  // namespace detail

// Mixed-strategy grid search with successive refinement around the
// incumbent: ~steps^(m-1) points per level, exact inner best response.
// Supports games with up to 3 rows.
inline double grid_search_value(const pcmas::ZeroSumGame& g, int steps = 141,
                                int levels = 6) {
  const int m = g.rows();
  std::vector<double> best(m, 1.0 / m);
  double best_value = -std::numeric_limits<double>::infinity();

  double radius = 1.0;
  for (int level = 0; level < levels; ++level) {
    detail::grid_pass(g, best, radius, steps, best, best_value);
    radius = std::max(4.0 * radius / steps, 1e-12);
  }
  return best_value;
}

// H-step finite-horizon optimal values, by brute-force backward
// induction from V = 0. Independent of the library's sweep code.
inline std::vector<double> finite_horizon_values(const pcmas::TmdpModel& model,
                                                 double gamma0, int horizon) {
  std::vector<double> v(model.num_states(), 0.0);
  std::vector<double> next(model.num_states(), 0.0);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < model.num_states(); ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < 2; ++a) {
        const auto& t = model.trans[s][a];
        best = std::max(best, t.prob[0] * v[t.succ[0]] + t.prob[1] * v[t.succ[1]]);
      }
      next[s] = model.reward[s] + gamma0 * best;
    }
    v.swap(next);
  }
  return v;
}

inline pcmas::ZeroSumGame random_zero_sum(pcmas::Rng& rng, int rows, int cols,
                                          double scale = 10.0) {
  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(rows) * cols);
  for (int k = 0; k < rows * cols; ++k)
    cells.push_back(scale * (2.0 * rng.next_double() - 1.0));
  return {rows, cols, std::move(cells)};
}

inline pcmas::MatrixGame random_matrix_game(pcmas::Rng& rng, int rows,
                                            int cols, double scale = 10.0) {
  std::vector<pcmas::Payoffs> cells;
  cells.reserve(static_cast<std::size_t>(rows) * cols);
  for (int k = 0; k < rows * cols; ++k)
    cells.push_back({scale * (2.0 * rng.next_double() - 1.0),
                     scale * (2.0 * rng.next_double() - 1.0)});
  return {rows, cols, std::move(cells)};
}

}  // namespace oracles
