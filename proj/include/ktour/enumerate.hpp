#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ktour/bigcount.hpp"
#include "ktour/board.hpp"
#include "ktour/symmetry.hpp"

namespace ktour {

enum class TourKind { open, closed };

std::string_view to_string(TourKind kind);
TourKind parse_tour_kind(std::string_view text);

// Exactness-preserving cuts. A branch is abandoned only when no completion
// of the current path can exist.
struct PruneRules {
  // An unvisited square with no unvisited neighbour, while more than one
  // square remains, can only be the final square and is unreachable.
  bool dead_square = true;
  // Closed search: the anchor must keep an unvisited neighbour to close on.
  bool anchor_degree = true;
  // Unvisited squares not adjacent to the current square with at most one
  // unvisited neighbour can only end the path; two of them cannot coexist.
  bool forced_endpoint = true;

  static PruneRules none() { return {false, false, false}; }
  static PruneRules all() { return {}; }

  friend bool operator==(const PruneRules&, const PruneRules&) = default;
};

struct EnumOptions {
  TourKind kind = TourKind::open;
  PruneRules prune;
  int split_depth = 1;
  // Count only start squares that are the minimum of their symmetry orbit
  // and weight by orbit size. Per-start tallies are unavailable when set.
  bool symmetry_reduce_starts = false;

  friend bool operator==(const EnumOptions&, const EnumOptions&) = default;
};

// Canonical text form of every option that affects results, e.g.
// "kind=open;prune=dead-square,forced-endpoint;depth=2;symreduce=0".
std::string options_fingerprint(const EnumOptions& options);
std::uint64_t options_hash(const EnumOptions& options);

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);

// The lowest-index square, at which closed tours are anchored.
inline constexpr Square kClosedAnchor = 0;

// Boards above this size must be counted through explicit work units.
inline constexpr int kDirectSquareLimit = 36;

struct WorkUnit {
  std::uint64_t id = 0;
  BoardSpec board;
  std::vector<Square> prefix;

  friend bool operator==(const WorkUnit&, const WorkUnit&) = default;
};

struct UnitResult {
  std::uint64_t unit_id = 0;
  BigCount numberings;            // weighted by start-orbit size under reduction
  BigCount canonical_numberings;  // one per geometric class
  BigCount symmetric_canonical;   // canonical ones with a nontrivial stabilizer
  BigCount closed_directed;       // directed cycles through kClosedAnchor
  BigCount nodes_expanded;

  friend bool operator==(const UnitResult&, const UnitResult&) = default;
};

// All simple knight paths with `depth` squares, lexicographic order, ids
// 0..n-1. Throws ParameterError unless 1 <= depth < squares.
std::vector<WorkUnit> split_work(const BoardSpec& board, int depth);

// Backtracking counter for one board. Immutable; count() may be called
// concurrently from any number of threads.
class Enumerator {
 public:
  Enumerator(const BoardSpec& board, const EnumOptions& options);

  const BoardSpec& board() const noexcept { return board_; }
  const EnumOptions& options() const noexcept { return options_; }
  int group_size() const noexcept { return filter_.group().size(); }

  // Whether the unit contributes anything under the current options.
  bool is_active(const WorkUnit& unit) const;
  UnitResult count(const WorkUnit& unit) const;

  // Minimum image of sq under the board group.
  Square orbit_representative(Square sq) const { return representative_[sq]; }
  int orbit_size(Square sq) const { return orbit_size_[sq]; }

 private:
  BoardSpec board_;
  EnumOptions options_;
  AdjacencyTable adjacency_;
  CanonicalFilter filter_;
  std::vector<Square> representative_;
  std::vector<int> orbit_size_;
};

UnitResult count_unit(const WorkUnit& unit, const EnumOptions& options);

// Component-wise sums followed by counts_from_enumeration. Requires exactly
// one result for each id in [0, unit_count); throws MergeError otherwise.
TourCounts merge_results(std::span<const UnitResult> results,
                         std::uint64_t unit_count, const BoardSpec& board);

// Numberings per start square; empty under symmetry reduction.
std::vector<BigCount> per_start_counts(std::span<const WorkUnit> units,
                                       std::span<const UnitResult> results,
                                       const BoardSpec& board);

using ResultSink = std::function<void(const UnitResult&)>;

// Counts `pending` units (indices into `units`) on `jobs` worker threads.
// Results reach `sink` one at a time on the calling thread, in completion
// order. At most `max_units` units are processed when it is nonzero.
void run_units(const Enumerator& enumerator, std::span<const WorkUnit> units,
               std::span<const std::uint64_t> pending, int jobs,
               const ResultSink& sink, std::uint64_t max_units = 0);

struct EnumerationSummary {
  TourCounts counts;
  std::vector<BigCount> per_start;
  BigCount nodes_expanded;
  std::uint64_t unit_count = 0;
};

// Direct exhaustive run. Throws NeedsPartitioningError above
// kDirectSquareLimit squares and InvalidBoardError below two squares.
EnumerationSummary enumerate_board(const BoardSpec& board,
                                   const EnumOptions& options, int jobs = 1);

struct OpenNumberings {
  BigCount total;
  std::vector<BigCount> per_start;
};

struct GeometricClasses {
  BigCount classes;
  BigCount symmetric_diagrams;
};

OpenNumberings count_open_numberings(const BoardSpec& board,
                                     const EnumOptions& options = {});
BigCount count_open_diagrams(const BoardSpec& board,
                             const EnumOptions& options = {});
GeometricClasses count_geometric_classes(const BoardSpec& board,
                                         const EnumOptions& options = {});
BigCount count_closed_diagrams(const BoardSpec& board,
                               EnumOptions options = {});

}  // namespace ktour
