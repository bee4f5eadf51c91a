#include "ktour/enumerate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

#include "ktour/error.hpp"

namespace ktour {

std::string_view to_string(TourKind kind) {
  return kind == TourKind::open ? "open" : "closed";
}

TourKind parse_tour_kind(std::string_view text) {
  if (text == "open") return TourKind::open;
  if (text == "closed") return TourKind::closed;
  throw ParameterError("unknown tour kind '" + std::string(text) + "'");
}

std::string options_fingerprint(const EnumOptions& options) {
  std::string rules;
  auto add = [&rules](bool on, const char* name) {
    if (!on) return;
    if (!rules.empty()) rules += ',';
    rules += name;
  };
  add(options.prune.dead_square, "dead-square");
  add(options.prune.anchor_degree, "anchor-degree");
  add(options.prune.forced_endpoint, "forced-endpoint");
  if (rules.empty()) rules = "none";
  return "kind=" + std::string(to_string(options.kind)) + ";prune=" + rules +
         ";depth=" + std::to_string(options.split_depth) +
         ";symreduce=" + (options.symmetry_reduce_starts ? "1" : "0");
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t options_hash(const EnumOptions& options) {
  return fnv1a64(options_fingerprint(options));
}

std::vector<WorkUnit> split_work(const BoardSpec& board, int depth) {
  if (depth < 1 || depth >= board.squares()) {
    throw ParameterError("split depth must lie in [1, " +
                         std::to_string(board.squares() - 1) + "], got " +
                         std::to_string(depth));
  }
  const AdjacencyTable adj(board);
  std::vector<WorkUnit> units;
  std::vector<Square> prefix;
  OccupancyMask visited;

  auto extend = [&](auto& self) -> void {
    if (static_cast<int>(prefix.size()) == depth) {
      units.push_back(WorkUnit{units.size(), board, prefix});
      return;
    }
    for (Square next : adj.neighbors(prefix.back())) {
      if (visited.test(next)) continue;
      visited.insert(next);
      prefix.push_back(next);
      self(self);
      prefix.pop_back();
      visited.remove(next);
    }
  };
  for (int start = 0; start < board.squares(); ++start) {
    const auto sq = static_cast<Square>(start);
    prefix.assign(1, sq);
    visited = OccupancyMask::single(sq);
    extend(extend);
  }
  return units;
}

namespace {

// Per-call mutable search state.
class Search {
 public:
  Search(const AdjacencyTable& adj, const CanonicalFilter& filter,
         const EnumOptions& options, std::span<const Square> prefix)
      : adj_(adj),
        filter_(filter),
        squares_(adj.squares()),
        open_(options.kind == TourKind::open),
        rules_(options.prune),
        all_(OccupancyMask::all(adj.squares())) {
    for (Square sq : prefix) {
      path_[depth_++] = sq;
      visited_.insert(sq);
    }
    from_anchor_ = prefix.front() == kClosedAnchor;
  }

  void run() { visit(path_[depth_ - 1]); }

  std::uint64_t numberings = 0;
  std::uint64_t canonical = 0;
  std::uint64_t symmetric = 0;
  std::uint64_t closed_directed = 0;
  std::uint64_t nodes = 0;

 private:
  void visit(Square current) {
    ++nodes;
    if (depth_ == squares_) {
      record_leaf(current);
      return;
    }
    const OccupancyMask unvisited = all_ & ~visited_;
    if (!open_ && rules_.anchor_degree &&
        (adj_.neighbor_mask(kClosedAnchor) & unvisited).empty()) {
      return;
    }
    if (squares_ - depth_ > 1 && (rules_.dead_square || rules_.forced_endpoint) &&
        !completion_possible(current, unvisited)) {
      return;
    }
    OccupancyMask moves = adj_.neighbor_mask(current) & unvisited;
    while (!moves.empty()) {
      const Square next = moves.pop_lowest();
      visited_.insert(next);
      path_[depth_++] = next;
      visit(next);
      --depth_;
      visited_.remove(next);
    }
  }

  bool completion_possible(Square current, OccupancyMask unvisited) const {
    const OccupancyMask reachable_now = adj_.neighbor_mask(current);
    int endpoints = 0;
    OccupancyMask scan = unvisited;
    while (!scan.empty()) {
      const Square sq = scan.pop_lowest();
      const int free = (adj_.neighbor_mask(sq) & unvisited).count();
      if (rules_.dead_square && free == 0) return false;
      if (rules_.forced_endpoint && free <= 1 && !reachable_now.test(sq) &&
          ++endpoints > 1) {
        return false;
      }
    }
    return true;
  }

  void record_leaf(Square current) {
    const bool closes = from_anchor_ && adj_.adjacent(current, kClosedAnchor);
    if (closes) ++closed_directed;
    if (!open_) return;
    ++numberings;
    const std::span<const Square> path(path_.data(), squares_);
    if (filter_.is_canonical(path)) {
      ++canonical;
      if (filter_.stabilizer_size(path) > 1) ++symmetric;
    }
  }

  const AdjacencyTable& adj_;
  const CanonicalFilter& filter_;
  const int squares_;
  const bool open_;
  const PruneRules rules_;
  const OccupancyMask all_;
  std::array<Square, kMaxSquares> path_{};
  int depth_ = 0;
  OccupancyMask visited_;
  bool from_anchor_ = false;
};

}  // namespace

Enumerator::Enumerator(const BoardSpec& board, const EnumOptions& options)
    : board_(board),
      options_(options),
      adjacency_(board),
      filter_(board),
      representative_(board.squares()),
      orbit_size_(board.squares()) {
  for (int sq = 0; sq < board.squares(); ++sq) {
    std::vector<Square> images;
    for (const Transform& t : filter_.group().elements) {
      images.push_back(t(static_cast<Square>(sq)));
    }
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    representative_[sq] = images.front();
    orbit_size_[sq] = static_cast<int>(images.size());
  }
}

bool Enumerator::is_active(const WorkUnit& unit) const {
  const Square start = unit.prefix.front();
  if (options_.kind == TourKind::closed) return start == kClosedAnchor;
  return !options_.symmetry_reduce_starts || representative_[start] == start;
}

UnitResult Enumerator::count(const WorkUnit& unit) const {
  if (unit.board != board_) {
    throw ParameterError("work unit " + std::to_string(unit.id) +
                         " belongs to a different board");
  }
  if (unit.prefix.empty()) {
    throw InvalidTourError("work unit " + std::to_string(unit.id) +
                           " has an empty prefix");
  }
  make_tour(board_, unit.prefix);

  UnitResult result;
  result.unit_id = unit.id;
  if (!is_active(unit)) return result;

  Search search(adjacency_, filter_, options_, unit.prefix);
  search.run();

  std::uint64_t weighted = search.numberings;
  if (options_.symmetry_reduce_starts &&
      __builtin_mul_overflow(search.numberings,
                             static_cast<std::uint64_t>(
                                 orbit_size_[unit.prefix.front()]),
                             &weighted)) {
    throw ConsistencyError("64-bit tour counter overflow");
  }
  result.numberings = weighted;
  result.canonical_numberings = search.canonical;
  result.symmetric_canonical = search.symmetric;
  result.closed_directed = search.closed_directed;
  result.nodes_expanded = search.nodes;
  return result;
}

UnitResult count_unit(const WorkUnit& unit, const EnumOptions& options) {
  return Enumerator(unit.board, options).count(unit);
}

TourCounts merge_results(std::span<const UnitResult> results,
                         std::uint64_t unit_count, const BoardSpec& board) {
  std::vector<bool> seen(unit_count, false);
  BigCount numberings;
  BigCount canonical;
  BigCount symmetric;
  BigCount closed_directed;
  for (const UnitResult& r : results) {
    if (r.unit_id >= unit_count) {
      throw MergeError("unit id " + std::to_string(r.unit_id) +
                       " out of range for " + std::to_string(unit_count) +
                       " units");
    }
    if (seen[r.unit_id]) {
      throw MergeError("duplicate result for unit " + std::to_string(r.unit_id));
    }
    seen[r.unit_id] = true;
    numberings += r.numberings;
    canonical += r.canonical_numberings;
    symmetric += r.symmetric_canonical;
    closed_directed += r.closed_directed;
  }
  if (auto missing = std::find(seen.begin(), seen.end(), false);
      missing != seen.end()) {
    throw MergeError("missing result for unit " +
                     std::to_string(missing - seen.begin()));
  }
  TourCounts counts = counts_from_enumeration(
      numberings, canonical, symmetric, board_transform_group(board).size());
  counts.closed_directed = closed_directed;
  counts.closed_diagrams = closed_diagrams_from_directed(closed_directed);
  return counts;
}

std::vector<BigCount> per_start_counts(std::span<const WorkUnit> units,
                                       std::span<const UnitResult> results,
                                       const BoardSpec& board) {
  std::vector<BigCount> per_start(board.squares());
  for (const UnitResult& r : results) {
    if (r.unit_id >= units.size()) {
      throw MergeError("unit id " + std::to_string(r.unit_id) + " out of range");
    }
    per_start[units[r.unit_id].prefix.front()] += r.numberings;
  }
  return per_start;
}

void run_units(const Enumerator& enumerator, std::span<const WorkUnit> units,
               std::span<const std::uint64_t> pending, int jobs,
               const ResultSink& sink, std::uint64_t max_units) {
  std::uint64_t total = pending.size();
  if (max_units != 0) total = std::min(total, max_units);
  if (total == 0) return;
  const auto workers = static_cast<std::size_t>(
      std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(jobs, 1)), 1, total));

  std::atomic<std::uint64_t> next{0};
  std::mutex mutex;
  std::condition_variable ready;
  std::deque<UnitResult> queue;
  std::exception_ptr failure;
  std::atomic<bool> abort{false};

  auto work = [&] {
    while (!abort.load()) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        UnitResult r = enumerator.count(units[pending[i]]);
        std::lock_guard lock(mutex);
        queue.push_back(std::move(r));
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        abort = true;
      }
      ready.notify_one();
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);

  std::uint64_t delivered = 0;
  while (delivered < total) {
    std::unique_lock lock(mutex);
    ready.wait(lock, [&] { return !queue.empty() || failure; });
    if (failure) break;
    UnitResult r = std::move(queue.front());
    queue.pop_front();
    lock.unlock();
    try {
      sink(r);
    } catch (...) {
      abort = true;
      throw;
    }
    ++delivered;
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

EnumerationSummary enumerate_board(const BoardSpec& board,
                                   const EnumOptions& options, int jobs) {
  require_countable(board);
  if (board.squares() > kDirectSquareLimit) {
    throw NeedsPartitioningError(
        "board has " + std::to_string(board.squares()) +
        " squares; direct enumeration is limited to " +
        std::to_string(kDirectSquareLimit) +
        ", split into work units and run through a checkpoint");
  }
  const Enumerator enumerator(board, options);
  const std::vector<WorkUnit> units = split_work(board, options.split_depth);
  std::vector<std::uint64_t> pending(units.size());
  for (std::uint64_t i = 0; i < pending.size(); ++i) pending[i] = i;

  std::vector<UnitResult> results;
  results.reserve(units.size());
  run_units(enumerator, units, pending, jobs,
            [&results](const UnitResult& r) { results.push_back(r); });
  std::sort(results.begin(), results.end(),
            [](const UnitResult& a, const UnitResult& b) {
              return a.unit_id < b.unit_id;
            });

  EnumerationSummary summary;
  summary.counts = merge_results(results, units.size(), board);
  if (options.kind == TourKind::open && !options.symmetry_reduce_starts) {
    summary.per_start = per_start_counts(units, results, board);
  }
  for (const UnitResult& r : results) summary.nodes_expanded += r.nodes_expanded;
  summary.unit_count = units.size();
  return summary;
}

OpenNumberings count_open_numberings(const BoardSpec& board,
                                     const EnumOptions& options) {
  EnumOptions open = options;
  open.kind = TourKind::open;
  EnumerationSummary s = enumerate_board(board, open);
  return {s.counts.numberings, std::move(s.per_start)};
}

BigCount count_open_diagrams(const BoardSpec& board, const EnumOptions& options) {
  EnumOptions open = options;
  open.kind = TourKind::open;
  return enumerate_board(board, open).counts.diagrams;
}

GeometricClasses count_geometric_classes(const BoardSpec& board,
                                         const EnumOptions& options) {
  EnumOptions open = options;
  open.kind = TourKind::open;
  const TourCounts c = enumerate_board(board, open).counts;
  return {c.geometric_classes, c.symmetric_diagrams};
}

BigCount count_closed_diagrams(const BoardSpec& board, EnumOptions options) {
  options.kind = TourKind::closed;
  return enumerate_board(board, options).counts.closed_diagrams;
}

}  // namespace ktour
