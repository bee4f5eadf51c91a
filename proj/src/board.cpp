#include "ktour/board.hpp"

#include <string>

#include "ktour/error.hpp"

namespace ktour {

namespace {

constexpr std::array<std::array<int, 2>, 8> kKnightOffsets{{
    {1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2},
}};

std::string dims(int rows, int cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace

BoardSpec make_board(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw InvalidBoardError("board dimensions must be positive, got " +
                            dims(rows, cols));
  }
  if (static_cast<long long>(rows) * cols > kMaxSquares) {
    throw UnsupportedSizeError("board " + dims(rows, cols) + " exceeds " +
                               std::to_string(kMaxSquares) + " squares");
  }
  return BoardSpec{rows, cols};
}

void require_countable(const BoardSpec& board) {
  if (board.squares() < 2) {
    throw InvalidBoardError("board " + dims(board.rows, board.cols) +
                            " is degenerate; at least two squares required");
  }
}

std::vector<Square> knight_moves_from(Square sq, const BoardSpec& board) {
  const int row = board.row_of(sq);
  const int col = board.col_of(sq);
  OccupancyMask found;
  for (const auto& [dr, dc] : kKnightOffsets) {
    if (board.contains(row + dr, col + dc)) {
      found.insert(board.square_at(row + dr, col + dc));
    }
  }
  std::vector<Square> moves;
  while (!found.empty()) moves.push_back(found.pop_lowest());
  return moves;
}

AdjacencyTable::AdjacencyTable(const BoardSpec& board) : board_(board) {
  for (int sq = 0; sq < board.squares(); ++sq) {
    lists_[sq] = knight_moves_from(static_cast<Square>(sq), board);
    for (Square to : lists_[sq]) masks_[sq].insert(to);
  }
}

int AdjacencyTable::directed_edge_count() const noexcept {
  int total = 0;
  for (int sq = 0; sq < squares(); ++sq) total += degree(static_cast<Square>(sq));
  return total;
}

AdjacencyTable build_adjacency(const BoardSpec& board) {
  return AdjacencyTable(board);
}

}  // namespace ktour
