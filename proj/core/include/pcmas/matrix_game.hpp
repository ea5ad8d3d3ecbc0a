#pragma once

#include <compare>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace pcmas {

/// Joint action in a 2-person game. Indices are 0-based inside the
/// library; the CLI and the JSON file formats use the 1-based convention
/// common in strategic-form notation.
struct JointAction {
  int i = 0;  ///< player-1 action
  int j = 0;  ///< player-2 action

  friend bool operator==(const JointAction&, const JointAction&) = default;
  friend auto operator<=>(const JointAction&, const JointAction&) = default;
};

struct Payoffs {
  double p1 = 0.0;
  double p2 = 0.0;

  friend bool operator==(const Payoffs&, const Payoffs&) = default;
};

/// 2-person game in strategic form. Cells are stored row-major; payoffs
/// are finite doubles. Immutable after construction.
class MatrixGame {
 public:
  MatrixGame() = default;
  MatrixGame(int rows, int cols, std::vector<Payoffs> cells);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool in_bounds(JointAction a) const {
    return a.i >= 0 && a.i < rows_ && a.j >= 0 && a.j < cols_;
  }

  /// Payoff pair at a joint action. Throws std::out_of_range when the
  /// action is outside the game.
  const Payoffs& payoff(JointAction a) const;

  double payoff1(int i, int j) const { return payoff({i, j}).p1; }
  double payoff2(int i, int j) const { return payoff({i, j}).p2; }

  const std::vector<Payoffs>& cells() const { return cells_; }

  friend bool operator==(const MatrixGame&, const MatrixGame&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Payoffs> cells_;
};

/// Zero-sum game; cells hold player 1's payoff, player 2 receives the
/// negation.
class ZeroSumGame {
 public:
  ZeroSumGame() = default;
  ZeroSumGame(int rows, int cols, std::vector<double> cells);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double at(int i, int j) const;
  const std::vector<double>& cells() const { return cells_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> cells_;
};

/// All joint actions maximizing the payoff sum, in lexicographic order.
/// Never empty for a valid game; ties are not broken (sums are compared
/// exactly, so inputs are expected to be binary-representable rationals).
std::vector<JointAction> efficient_solutions(const MatrixGame& g);

/// p_player(s_ref) - p_player(s_played): positive values are punishments
/// w.r.t. the reference joint action, negative values are benefits.
double punishment_benefit(const MatrixGame& g, JointAction s_ref,
                          JointAction s_played, int player);

/// The projected game: entry (i,j) is -P2(i,j).
ZeroSumGame project(const MatrixGame& g);

/// The role-swapped game: dimensions swap and payoff(j,i) becomes
/// (P2(i,j), P1(i,j)).
MatrixGame transpose(const MatrixGame& g);

/// Shape check for the general k-person form: a game of k players with
/// action counts n_1..n_k is a k-dimensional matrix of prod(n_i) payoff
/// vectors of length k. Only the k = 2 case has computational paths in
/// this library (every punishment result is stated for pairwise
/// encounters); this helper exists so k-person data can at least be
/// validated on ingestion.
bool valid_k_person_shape(std::span<const int> action_counts,
                          std::size_t payoff_vectors,
                          std::size_t payoff_vector_length);

// --- JSON file format ------------------------------------------------
//
// {"rows": 2, "cols": 2,
//  "payoffs": [[2,2], [-10,10], [10,-10], [-5,-5]]}
//
// "payoffs" is row-major; each entry is a [p1, p2] pair. Zero-sum games
// use plain numbers (player 1's payoff) instead of pairs.

MatrixGame matrix_game_from_json(const std::string& text);
std::string matrix_game_to_json(const MatrixGame& g);
MatrixGame load_matrix_game(const std::filesystem::path& path);

ZeroSumGame zero_sum_game_from_json(const std::string& text);
std::string zero_sum_game_to_json(const ZeroSumGame& g);

}  // namespace pcmas
