#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace ktour {

// Row-major square index: index = row * cols + col, row 0 is the bottom rank.
using Square = std::uint8_t;

inline constexpr int kMaxSquares = 64;

struct BoardSpec {
  int rows = 0;
  int cols = 0;

  int squares() const noexcept { return rows * cols; }
  bool is_square() const noexcept { return rows == cols; }

  Square square_at(int row, int col) const noexcept {
    return static_cast<Square>(row * cols + col);
  }
  int row_of(Square sq) const noexcept { return sq / cols; }
  int col_of(Square sq) const noexcept { return sq % cols; }
  bool contains(int row, int col) const noexcept {
    return row >= 0 && row < rows && col >= 0 && col < cols;
  }

  friend bool operator==(const BoardSpec&, const BoardSpec&) = default;
};

// Validates dimensions. Throws InvalidBoardError for a nonpositive dimension
// and UnsupportedSizeError above kMaxSquares.
BoardSpec make_board(int rows, int cols);

// Geometric knight-move test, independent of any AdjacencyTable.
inline bool knight_adjacent(const BoardSpec& board, Square a, Square b) {
  const int dr = board.row_of(a) - board.row_of(b);
  const int dc = board.col_of(a) - board.col_of(b);
  return dr * dr + dc * dc == 5;
}

// Throws InvalidBoardError unless the board has at least two squares.
void require_countable(const BoardSpec& board);

// Knight destinations from sq, ascending by index.
std::vector<Square> knight_moves_from(Square sq, const BoardSpec& board);

// Fixed-width visited set for boards of up to 64 squares.
class OccupancyMask {
 public:
  constexpr OccupancyMask() = default;
  constexpr explicit OccupancyMask(std::uint64_t bits) : bits_(bits) {}

  static constexpr OccupancyMask single(Square sq) {
    return OccupancyMask(std::uint64_t{1} << sq);
  }
  static constexpr OccupancyMask all(int squares) {
    return OccupancyMask(squares >= 64 ? ~std::uint64_t{0}
                                       : (std::uint64_t{1} << squares) - 1);
  }

  constexpr bool test(Square sq) const { return (bits_ >> sq) & 1u; }
  constexpr void insert(Square sq) { bits_ |= std::uint64_t{1} << sq; }
  constexpr void remove(Square sq) { bits_ &= ~(std::uint64_t{1} << sq); }
  constexpr int count() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr OccupancyMask operator&(OccupancyMask o) const {
    return OccupancyMask(bits_ & o.bits_);
  }
  constexpr OccupancyMask operator|(OccupancyMask o) const {
    return OccupancyMask(bits_ | o.bits_);
  }
  constexpr OccupancyMask operator~() const { return OccupancyMask(~bits_); }

  // Removes and returns the lowest member. Requires !empty().
  constexpr Square pop_lowest() {
    auto sq = static_cast<Square>(std::countr_zero(bits_));
    bits_ &= bits_ - 1;
    return sq;
  }

  friend constexpr bool operator==(OccupancyMask, OccupancyMask) = default;

 private:
  std::uint64_t bits_ = 0;
};

// The knight graph of a board. Immutable once built.
class AdjacencyTable {
 public:
  explicit AdjacencyTable(const BoardSpec& board);

  const BoardSpec& board() const noexcept { return board_; }
  int squares() const noexcept { return board_.squares(); }

  std::span<const Square> neighbors(Square sq) const {
    return {lists_[sq].data(), lists_[sq].size()};
  }
  OccupancyMask neighbor_mask(Square sq) const noexcept { return masks_[sq]; }
  int degree(Square sq) const noexcept {
    return static_cast<int>(lists_[sq].size());
  }
  bool adjacent(Square a, Square b) const noexcept {
    return masks_[a].test(b);
  }
  // Sum of degrees, i.e. twice the number of undirected edges.
  int directed_edge_count() const noexcept;

 private:
  BoardSpec board_;
  std::array<std::vector<Square>, kMaxSquares> lists_{};
  std::array<OccupancyMask, kMaxSquares> masks_{};
};

AdjacencyTable build_adjacency(const BoardSpec& board);

}  // namespace ktour
