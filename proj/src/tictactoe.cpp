#include <array>
#include <set>

#include "rit/dataset.hpp"
#include "rit/error.hpp"
#include "rit/random.hpp"

namespace rit {

namespace {

constexpr std::uint64_t kNoiseStream = 0x5454544e4fULL;

using Board = std::array<std::uint8_t, 9>;  // 0 empty, 1 black, 2 white

constexpr std::array<std::array<int, 3>, 8> kLines{{
    {0, 1, 2}, {3, 4, 5}, {6, 7, 8},  // rows
    {0, 3, 6}, {1, 4, 7}, {2, 5, 8},  // columns
    {0, 4, 8}, {2, 4, 6},             // diagonals
}};

bool wins(const Board& board, std::uint8_t player) {
  for (const auto& line : kLines)
    if (board[line[0]] == player && board[line[1]] == player && board[line[2]] == player) return true;
  return false;
}

// Final boards keyed by their base-3 code, which also fixes the output order.
void play(Board& board, std::uint8_t to_move, int filled, std::set<std::pair<int, Board>>& finals) {
  for (int cell = 0; cell < 9; ++cell) {
    if (board[cell] != 0) continue;
    board[cell] = to_move;
    if (wins(board, to_move)) {
      int code = 0;
      for (auto v : board) code = code * 3 + v;
      finals.emplace(code, board);
    } else if (filled + 1 < 9) {
      play(board, static_cast<std::uint8_t>(3 - to_move), filled + 1, finals);
    }
    board[cell] = 0;
  }
}

}  // namespace

SparseDataset generate_tictactoe(std::size_t noise_vars, double noise_density, std::uint64_t seed) {
  if (!(noise_density > 0.0 && noise_density < 1.0))
    throw ConfigError("noise density must lie in (0, 1)");

  std::set<std::pair<int, Board>> finals;
  Board empty{};
  play(empty, 1, 0, finals);

  std::vector<IndexSet> rows;
  std::vector<std::uint8_t> labels;
  rows.reserve(finals.size());
  std::size_t obs = 0;
  for (const auto& [code, board] : finals) {
    IndexSet row;
    for (Index cell = 0; cell < 9; ++cell)
      if (board[cell] == 1) row.push_back(cell);
    for (Index cell = 0; cell < 9; ++cell)
      if (board[cell] == 2) row.push_back(9 + cell);
    Stream rng(seed, kNoiseStream, obs++);
    for (std::size_t k = 0; k < noise_vars; ++k)
      if (bernoulli(rng, noise_density)) row.push_back(static_cast<Index>(18 + k));
    rows.push_back(std::move(row));
    labels.push_back(wins(board, 1) ? 1 : 0);
  }
  return SparseDataset(18 + noise_vars, std::move(rows), std::move(labels));
}

}  // namespace rit
