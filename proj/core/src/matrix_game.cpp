#include "pcmas/matrix_game.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pcmas {

MatrixGame::MatrixGame(int rows, int cols, std::vector<Payoffs> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows_ < 1 || cols_ < 1)
    throw std::invalid_argument("matrix game needs at least one action per player");
  if (cells_.size() != static_cast<std::size_t>(rows_) * cols_)
    throw std::invalid_argument("payoff cell count does not match rows*cols");
  for (const auto& cell : cells_)
    if (!std::isfinite(cell.p1) || !std::isfinite(cell.p2))
      throw std::invalid_argument("payoffs must be finite");
}

const Payoffs& MatrixGame::payoff(JointAction a) const {
  if (!in_bounds(a)) {
    std::ostringstream msg;
    msg << "joint action (" << a.i << "," << a.j << ") outside " << rows_
        << "x" << cols_ << " game";
    throw std::out_of_range(msg.str());
  }
  return cells_[static_cast<std::size_t>(a.i) * cols_ + a.j];
}

ZeroSumGame::ZeroSumGame(int rows, int cols, std::vector<double> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows_ < 1 || cols_ < 1)
    throw std::invalid_argument("zero-sum game needs at least one action per player");
  if (cells_.size() != static_cast<std::size_t>(rows_) * cols_)
    throw std::invalid_argument("payoff cell count does not match rows*cols");
  for (double v : cells_)
    if (!std::isfinite(v)) throw std::invalid_argument("payoffs must be finite");
}

double ZeroSumGame::at(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw std::out_of_range("zero-sum game index out of range");
  return cells_[static_cast<std::size_t>(i) * cols_ + j];
}

std::vector<JointAction> efficient_solutions(const MatrixGame& g) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& cell : g.cells()) best = std::max(best, cell.p1 + cell.p2);

  std::vector<JointAction> out;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      if (g.payoff1(i, j) + g.payoff2(i, j) == best) out.push_back({i, j});
  return out;  // row-major scan is already lexicographic
}

double punishment_benefit(const MatrixGame& g, JointAction s_ref,
                          JointAction s_played, int player) {
  if (player != 1 && player != 2)
    throw std::invalid_argument("player must be 1 or 2");
  const Payoffs& ref = g.payoff(s_ref);
  const Payoffs& played = g.payoff(s_played);
  return player == 1 ? ref.p1 - played.p1 : ref.p2 - played.p2;
}

ZeroSumGame project(const MatrixGame& g) {
  std::vector<double> cells;
  cells.reserve(g.cells().size());
  for (const auto& cell : g.cells()) cells.push_back(-cell.p2);
  return {g.rows(), g.cols(), std::move(cells)};
}

MatrixGame transpose(const MatrixGame& g) {
  std::vector<Payoffs> cells(g.cells().size());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      cells[static_cast<std::size_t>(j) * g.rows() + i] = {g.payoff2(i, j),
                                                           g.payoff1(i, j)};
  return {g.cols(), g.rows(), std::move(cells)};
}

bool valid_k_person_shape(std::span<const int> action_counts,
                          std::size_t payoff_vectors,
                          std::size_t payoff_vector_length) {
  if (action_counts.empty()) return false;
  std::size_t cells = 1;
  for (int n : action_counts) {
    if (n < 1) return false;
    cells *= static_cast<std::size_t>(n);
  }
  return payoff_vectors == cells &&
         payoff_vector_length == action_counts.size();
}

// --- JSON -------------------------------------------------------------

namespace {

nlohmann::json parse(const std::string& text) {
  return nlohmann::json::parse(text);
}

}  // namespace

MatrixGame matrix_game_from_json(const std::string& text) {
  nlohmann::json j = parse(text);
  int rows = j.at("rows").get<int>();
  int cols = j.at("cols").get<int>();
  std::vector<Payoffs> cells;
  for (const auto& entry : j.at("payoffs")) {
    if (!entry.is_array() || entry.size() != 2)
      throw std::invalid_argument("each payoff entry must be a [p1, p2] pair");
    cells.push_back({entry[0].get<double>(), entry[1].get<double>()});
  }
  return {rows, cols, std::move(cells)};
}

std::string matrix_game_to_json(const MatrixGame& g) {
  nlohmann::json payoffs = nlohmann::json::array();
  for (const auto& cell : g.cells())
    payoffs.push_back({cell.p1, cell.p2});
  nlohmann::json j{{"rows", g.rows()}, {"cols", g.cols()}, {"payoffs", payoffs}};
  return j.dump(2);
}

MatrixGame load_matrix_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open game file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return matrix_game_from_json(buffer.str());
}

ZeroSumGame zero_sum_game_from_json(const std::string& text) {
  nlohmann::json j = parse(text);
  int rows = j.at("rows").get<int>();
  int cols = j.at("cols").get<int>();
  std::vector<double> cells;
  for (const auto& entry : j.at("payoffs")) cells.push_back(entry.get<double>());
  return {rows, cols, std::move(cells)};
}

std::string zero_sum_game_to_json(const ZeroSumGame& g) {
  nlohmann::json j{{"rows", g.rows()}, {"cols", g.cols()}, {"payoffs", g.cells()}};
  return j.dump(2);
}

}  // namespace pcmas
