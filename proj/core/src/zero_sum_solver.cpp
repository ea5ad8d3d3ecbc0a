#include "pcmas/zero_sum_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pcmas {

bool MixedStrategy::is_valid(double eps) const {
  double sum = 0.0;
  for (double p : probs) {
    if (p < -eps || p > 1.0 + eps) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= eps;
}

namespace {

constexpr double kEps = 1e-11;

// Dense tableau simplex for
//   max 1'y  s.t.  A y <= 1, y >= 0
// with every entry of A positive, so the slack basis is feasible and the
// optimum is finite. Bland's rule prevents cycling. On return, y holds
// the primal solution and duals the shadow prices of the m constraints.
double simplex_max(const std::vector<std::vector<double>>& a, int m, int n,
                   std::vector<double>& y, std::vector<double>& duals) {
  // tableau: m constraint rows + objective row; n vars + m slacks + rhs
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + m + 1, 0.0));
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][n + m] = 1.0;  // rhs
    basis[i] = n + i;
  }
  for (int j = 0; j < n; ++j) t[m][j] = -1.0;  // maximize sum(y)

  for (;;) {
    // Bland: entering = lowest-index column with negative reduced cost.
    int pivot_col = -1;
    for (int j = 0; j < n + m; ++j) {
      if (t[m][j] < -kEps) {
        pivot_col = j;
        break;
      }
    }
    if (pivot_col < 0) break;

    // Leaving row: min ratio, ties by lowest basis index.
    int pivot_row = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (t[i][pivot_col] > kEps) {
        double ratio = t[i][n + m] / t[i][pivot_col];
        if (ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps &&
             (pivot_row < 0 || basis[i] < basis[pivot_row]))) {
          best_ratio = ratio;
          pivot_row = i;
        }
      }
    }
    if (pivot_row < 0)
      throw std::logic_error("unbounded zero-sum LP; payoffs not shifted positive?");

    double inv = 1.0 / t[pivot_row][pivot_col];
    for (double& v : t[pivot_row]) v *= inv;
    for (int i = 0; i <= m; ++i) {
      if (i == pivot_row) continue;
      double factor = t[i][pivot_col];
      if (factor == 0.0) continue;
      for (int j = 0; j <= n + m; ++j) t[i][j] -= factor * t[pivot_row][j];
    }
    basis[pivot_row] = pivot_col;
  }

  y.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) y[basis[i]] = t[i][n + m];
  duals.assign(m, 0.0);
  for (int i = 0; i < m; ++i) duals[i] = t[m][n + i];
  return t[m][n + m];
}

void normalize(std::vector<double>& probs) {
  double sum = 0.0;
  for (double& p : probs) {
    if (p < 0.0) p = 0.0;  // clip simplex round-off
    sum += p;
  }
  for (double& p : probs) p /= sum;
}

}  // namespace

ZeroSumSolution solve_zero_sum(const ZeroSumGame& g) {
  const int m = g.rows();
  const int n = g.cols();

  // Shift so all entries are >= 1; the game value shifts by the same
  // constant and the optimal strategies are unchanged.
  double lo = std::numeric_limits<double>::infinity();
  for (double v : g.cells()) lo = std::min(lo, v);
  const double shift = 1.0 - lo;

  std::vector<std::vector<double>> a(m, std::vector<double>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = g.at(i, j) + shift;

  // Column player: max 1'y s.t. A y <= 1. The optimal objective equals
  // 1 / (shifted value); the row player's strategy comes out of the
  // duals by LP duality.
  std::vector<double> y, duals;
  double objective = simplex_max(a, m, n, y, duals);
  if (!(objective > 0.0))
    throw std::logic_error("degenerate zero-sum LP objective");

  ZeroSumSolution sol;
  sol.value = 1.0 / objective - shift;
  sol.strat2.probs = std::move(y);
  normalize(sol.strat2.probs);
  sol.strat1.probs = std::move(duals);
  normalize(sol.strat1.probs);

  // Verify the minimax guarantees before returning.
  constexpr double kTol = 1e-6;
  for (int j = 0; j < n; ++j) {
    double got = 0.0;
    for (int i = 0; i < m; ++i) got += sol.strat1.probs[i] * g.at(i, j);
    if (got < sol.value - kTol)
      throw std::logic_error("solver row strategy misses its guarantee");
  }
  for (int i = 0; i < m; ++i) {
    double got = 0.0;
    for (int j = 0; j < n; ++j) got += sol.strat2.probs[j] * g.at(i, j);
    if (got > sol.value + kTol)
      throw std::logic_error("solver column strategy misses its guarantee");
  }
  if (!sol.strat1.is_valid() || !sol.strat2.is_valid())
    throw std::logic_error("solver produced an invalid mixed strategy");
  return sol;
}

}  // namespace pcmas
