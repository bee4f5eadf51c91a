#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "ktour/bigcount.hpp"
#include "ktour/board.hpp"

namespace ktour {

enum class TransformKind {
  identity,
  rot90,
  rot180,
  rot270,
  flip_horizontal,  // mirror columns: (r, c) -> (r, cols-1-c)
  flip_vertical,    // mirror rows: (r, c) -> (rows-1-r, c)
  flip_main_diagonal,
  flip_anti_diagonal,
};

std::string_view to_string(TransformKind kind);

// Whether the kind maps a board onto itself (quarter turns and diagonal
// flips need rows == cols).
bool valid_on(TransformKind kind, const BoardSpec& board);

struct Transform {
  TransformKind kind = TransformKind::identity;
  BoardSpec board;
  std::vector<Square> mapping;  // mapping[sq] = image of sq

  Square operator()(Square sq) const { return mapping[sq]; }
};

// Throws InvalidTransformError when !valid_on(kind, board).
Transform make_transform(TransformKind kind, const BoardSpec& board);

// Eight elements on square boards; identity, rot180 and the two axis flips
// otherwise. Identity is always first.
struct TransformGroup {
  std::vector<Transform> elements;

  int size() const { return static_cast<int>(elements.size()); }
};

TransformGroup board_transform_group(const BoardSpec& board);

// An ordered sequence of distinct, pairwise knight-adjacent squares.
struct Tour {
  BoardSpec board;
  std::vector<Square> path;

  bool is_full() const {
    return static_cast<int>(path.size()) == board.squares();
  }
  bool is_closed() const {
    return is_full() && path.size() >= 2 &&
           knight_adjacent(board, path.back(), path.front());
  }

  friend bool operator==(const Tour&, const Tour&) = default;
  friend bool operator<(const Tour& a, const Tour& b) { return a.path < b.path; }
};

// Validates the Tour invariants; throws InvalidTourError.
Tour make_tour(const BoardSpec& board, std::vector<Square> path);

Tour reversed(const Tour& tour);

// Throws InvalidTransformError if the transform belongs to another board.
Tour apply_transform(const Transform& t, const Tour& tour);

// Distinct numberings reachable by a group element, optionally followed by
// reversal. Sorted ascending. Requires a full tour.
std::vector<Tour> numbering_orbit(const Tour& tour);

// Lexicographic minimum of numbering_orbit(tour).
Tour canonical_numbering(const Tour& tour);

bool is_canonical(const Tour& tour);

// Number of group elements mapping the tour's undirected edge set to itself.
int diagram_stabilizer_size(const Tour& tour);

// Streaming canonical-form test used inside the enumerator. Compares the
// path against every (transform, direction) image without materializing the
// orbit.
class CanonicalFilter {
 public:
  explicit CanonicalFilter(const BoardSpec& board);

  const TransformGroup& group() const noexcept { return group_; }

  // Requires a full path on the filter's board.
  bool is_canonical(std::span<const Square> path) const;
  int stabilizer_size(std::span<const Square> path) const;

 private:
  TransformGroup group_;
};

// Exact tallies for one board.
//   numberings          N: directed Hamiltonian paths
//   diagrams            T: undirected Hamiltonian paths, N / 2
//   geometric_classes   G: orbits of diagrams under the board group
//   symmetric_diagrams  classes whose diagram has a nontrivial stabilizer
//   closed_diagrams     D: undirected Hamiltonian cycles
struct TourCounts {
  BigCount numberings;
  BigCount diagrams;
  BigCount geometric_classes;
  BigCount symmetric_diagrams;
  BigCount closed_diagrams;
  BigCount closed_directed;  // directed cycles through the anchor square, 2D
  int group_size = 1;

  // G * |group| == T, i.e. no diagram has a nontrivial stabilizer.
  bool division_relation_exact() const {
    return geometric_classes * group_size == diagrams;
  }

  friend bool operator==(const TourCounts&, const TourCounts&) = default;
};

// T = N / 2, G = canonical_count. Throws ConsistencyError when N is odd or
// when G falls outside [T / group_size, T], or when symmetric_count == 0
// disagrees with G * group_size == T.
TourCounts counts_from_enumeration(const BigCount& numberings,
                                   const BigCount& canonical_count,
                                   const BigCount& symmetric_count,
                                   int group_size);

// D = directed / 2; throws ConsistencyError when directed is odd.
BigCount closed_diagrams_from_directed(const BigCount& directed);

}  // namespace ktour
