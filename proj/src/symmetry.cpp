#include "ktour/symmetry.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "ktour/error.hpp"

namespace ktour {

namespace {

constexpr TransformKind kSquareGroup[] = {
    TransformKind::identity,           TransformKind::rot90,
    TransformKind::rot180,             TransformKind::rot270,
    TransformKind::flip_horizontal,    TransformKind::flip_vertical,
    TransformKind::flip_main_diagonal, TransformKind::flip_anti_diagonal,
};

constexpr TransformKind kRectangleGroup[] = {
    TransformKind::identity,
    TransformKind::rot180,
    TransformKind::flip_horizontal,
    TransformKind::flip_vertical,
};

std::pair<int, int> image(TransformKind kind, const BoardSpec& b, int r, int c) {
  const int last_row = b.rows - 1;
  const int last_col = b.cols - 1;
  switch (kind) {
    case TransformKind::identity: return {r, c};
    case TransformKind::rot90: return {c, last_row - r};
    case TransformKind::rot180: return {last_row - r, last_col - c};
    case TransformKind::rot270: return {last_col - c, r};
    case TransformKind::flip_horizontal: return {r, last_col - c};
    case TransformKind::flip_vertical: return {last_row - r, c};
    case TransformKind::flip_main_diagonal: return {c, r};
    case TransformKind::flip_anti_diagonal: return {last_col - c, last_row - r};
  }
  return {r, c};
}

void require_full(const Tour& tour, const char* op) {
  if (!tour.is_full()) {
    throw InvalidTourError(std::string(op) + " requires a full tour");
  }
}

using EdgeSet = std::vector<std::pair<Square, Square>>;

EdgeSet edge_set(std::span<const Square> path) {
  EdgeSet edges;
  edges.reserve(path.size());
  for (std::size_t i = 1; i < path.size(); ++i) {
    edges.emplace_back(std::min(path[i - 1], path[i]),
                       std::max(path[i - 1], path[i]));
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::identity: return "identity";
    case TransformKind::rot90: return "rot90";
    case TransformKind::rot180: return "rot180";
    case TransformKind::rot270: return "rot270";
    case TransformKind::flip_horizontal: return "flip-horizontal";
    case TransformKind::flip_vertical: return "flip-vertical";
    case TransformKind::flip_main_diagonal: return "flip-main-diagonal";
    case TransformKind::flip_anti_diagonal: return "flip-anti-diagonal";
  }
  return "unknown";
}

bool valid_on(TransformKind kind, const BoardSpec& board) {
  switch (kind) {
    case TransformKind::rot90:
    case TransformKind::rot270:
    case TransformKind::flip_main_diagonal:
    case TransformKind::flip_anti_diagonal:
      return board.is_square();
    default:
      return true;
  }
}

Transform make_transform(TransformKind kind, const BoardSpec& board) {
  if (!valid_on(kind, board)) {
    throw InvalidTransformError(std::string(to_string(kind)) +
                                " does not map a " + std::to_string(board.rows) +
                                "x" + std::to_string(board.cols) +
                                " board onto itself");
  }
  Transform t{kind, board, std::vector<Square>(board.squares())};
  for (int r = 0; r < board.rows; ++r) {
    for (int c = 0; c < board.cols; ++c) {
      auto [ir, ic] = image(kind, board, r, c);
      t.mapping[board.square_at(r, c)] = board.square_at(ir, ic);
    }
  }
  return t;
}

TransformGroup board_transform_group(const BoardSpec& board) {
  TransformGroup group;
  std::span<const TransformKind> kinds =
      board.is_square() ? std::span<const TransformKind>(kSquareGroup)
                        : std::span<const TransformKind>(kRectangleGroup);
  for (TransformKind kind : kinds) {
    group.elements.push_back(make_transform(kind, board));
  }
  return group;
}

Tour make_tour(const BoardSpec& board, std::vector<Square> path) {
  if (static_cast<int>(path.size()) > board.squares()) {
    throw InvalidTourError("path longer than the board");
  }
  OccupancyMask seen;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= board.squares()) {
      throw InvalidTourError("square " + std::to_string(path[i]) +
                             " is off the board");
    }
    if (seen.test(path[i])) {
      throw InvalidTourError("square " + std::to_string(path[i]) +
                             " repeats at position " + std::to_string(i));
    }
    seen.insert(path[i]);
    if (i > 0 && !knight_adjacent(board, path[i - 1], path[i])) {
      throw InvalidTourError("no knight move between positions " +
                             std::to_string(i - 1) + " and " + std::to_string(i));
    }
  }
  return Tour{board, std::move(path)};
}

Tour reversed(const Tour& tour) {
  return Tour{tour.board, {tour.path.rbegin(), tour.path.rend()}};
}

Tour apply_transform(const Transform& t, const Tour& tour) {
  if (t.board != tour.board ||
      static_cast<int>(t.mapping.size()) != tour.board.squares()) {
    throw InvalidTransformError(std::string(to_string(t.kind)) +
                                " was built for a different board");
  }
  Tour out{tour.board, {}};
  out.path.reserve(tour.path.size());
  for (Square sq : tour.path) out.path.push_back(t(sq));
  return out;
}

std::vector<Tour> numbering_orbit(const Tour& tour) {
  require_full(tour, "numbering_orbit");
  std::vector<Tour> orbit;
  for (const Transform& t : board_transform_group(tour.board).elements) {
    Tour image = apply_transform(t, tour);
    orbit.push_back(reversed(image));
    orbit.push_back(std::move(image));
  }
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  return orbit;
}

Tour canonical_numbering(const Tour& tour) {
  return numbering_orbit(tour).front();
}

bool is_canonical(const Tour& tour) {
  require_full(tour, "is_canonical");
  return CanonicalFilter(tour.board).is_canonical(tour.path);
}

int diagram_stabilizer_size(const Tour& tour) {
  require_full(tour, "diagram_stabilizer_size");
  const EdgeSet diagram = edge_set(tour.path);
  int fixed = 0;
  for (const Transform& t : board_transform_group(tour.board).elements) {
    if (edge_set(apply_transform(t, tour).path) == diagram) ++fixed;
  }
  return fixed;
}

CanonicalFilter::CanonicalFilter(const BoardSpec& board)
    : group_(board_transform_group(board)) {}

bool CanonicalFilter::is_canonical(std::span<const Square> path) const {
  const std::size_t n = path.size();
  for (const Transform& t : group_.elements) {
    const bool identity = t.kind == TransformKind::identity;
    for (int reverse = 0; reverse < 2; ++reverse) {
      if (identity && !reverse) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const Square img = t(reverse ? path[n - 1 - i] : path[i]);
        if (img < path[i]) return false;
        if (img > path[i]) break;
      }
    }
  }
  return true;
}

int CanonicalFilter::stabilizer_size(std::span<const Square> path) const {
  const std::size_t n = path.size();
  int fixed = 0;
  for (const Transform& t : group_.elements) {
    bool forward = true;
    bool backward = true;
    for (std::size_t i = 0; i < n && (forward || backward); ++i) {
      const Square img = t(path[i]);
      forward = forward && img == path[i];
      backward = backward && img == path[n - 1 - i];
    }
    if (forward || backward) ++fixed;
  }
  return fixed;
}

TourCounts counts_from_enumeration(const BigCount& numberings,
                                   const BigCount& canonical_count,
                                   const BigCount& symmetric_count,
                                   int group_size) {
  if (numberings % 2 != 0) {
    throw ConsistencyError("odd numbering count " + to_decimal(numberings) +
                           "; every diagram yields exactly two numberings");
  }
  TourCounts counts;
  counts.numberings = numberings;
  counts.diagrams = numberings / 2;
  counts.geometric_classes = canonical_count;
  counts.symmetric_diagrams = symmetric_count;
  counts.group_size = group_size;

  const BigCount& t = counts.diagrams;
  const BigCount& g = counts.geometric_classes;
  if (g > t || g * group_size < t) {
    throw ConsistencyError("geometric class count " + to_decimal(g) +
                           " outside [T/" + std::to_string(group_size) +
                           ", T] for T = " + to_decimal(t));
  }
  if (symmetric_count > g) {
    throw ConsistencyError("more symmetric diagrams than classes");
  }
  if ((symmetric_count == 0) != counts.division_relation_exact()) {
    throw ConsistencyError(
        "symmetric diagram count disagrees with G * |group| == T");
  }
  return counts;
}

BigCount closed_diagrams_from_directed(const BigCount& directed) {
  if (directed % 2 != 0) {
    throw ConsistencyError("odd directed cycle count " + to_decimal(directed));
  }
  return directed / 2;
}

}  // namespace ktour
