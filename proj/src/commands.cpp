#include "ktour/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ktour/checkpoint.hpp"
#include "ktour/error.hpp"

namespace ktour {

using nlohmann::json;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string prune_label(const PruneRules& rules) {
  const std::string fp = options_fingerprint(EnumOptions{TourKind::open, rules});
  const auto begin = fp.find("prune=") + 6;
  return fp.substr(begin, fp.find(';', begin) - begin);
}

json enum_options_json(const EnumOptions& o) {
  return {{"kind", to_string(o.kind)},
          {"split_depth", o.split_depth},
          {"prune", prune_label(o.prune)},
          {"symmetry_reduce", o.symmetry_reduce_starts}};
}

json policy_json(const SamplePolicy& p) {
  return {{"alpha", p.alpha},
          {"epsilon", p.epsilon},
          {"start_mode", to_string(p.start_mode)}};
}

std::string format_real(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

RunReport cmd_count(const CountArgs& args) {
  const Stopwatch clock;
  if (!args.checkpoint.empty() && !args.resume.empty()) {
    throw ParameterError("--checkpoint and --resume are mutually exclusive");
  }

  std::optional<Checkpoint> cp;
  std::filesystem::path cp_path;
  if (!args.resume.empty()) {
    cp_path = args.resume;
    cp = checkpoint_read_file(cp_path);
  }

  const BoardSpec board = make_board(args.rows.value_or(cp ? cp->board.rows : 0),
                                     args.cols.value_or(cp ? cp->board.cols : 0));
  require_countable(board);

  EnumOptions options;
  options.kind = args.kind.value_or(cp ? cp->options.kind : TourKind::open);
  options.split_depth = args.split_depth.value_or(cp ? cp->options.split_depth : 1);
  options.prune = args.prune.value_or(cp ? cp->options.prune : PruneRules::all());
  options.symmetry_reduce_starts = args.symmetry_reduce.value_or(
      cp ? cp->options.symmetry_reduce_starts : false);

  if (!cp && args.checkpoint.empty() && board.squares() > kDirectSquareLimit) {
    throw NeedsPartitioningError(
        "a " + std::to_string(board.squares()) +
        "-square board must be counted through a checkpoint (--checkpoint or "
        "split + --resume)");
  }

  const std::vector<WorkUnit> units = split_work(board, options.split_depth);
  if (cp) {
    require_compatible(*cp, board, options);
    if (cp->unit_count != units.size()) {
      throw CheckpointMismatchError("checkpoint lists " +
                                    std::to_string(cp->unit_count) +
                                    " units, the board splits into " +
                                    std::to_string(units.size()));
    }
  } else {
    cp = Checkpoint{};
    cp->board = board;
    cp->options = options;
    cp->unit_count = units.size();
    if (!args.checkpoint.empty()) {
      cp_path = args.checkpoint;
      checkpoint_write_file(*cp, cp_path);
    }
  }

  std::optional<CheckpointAppender> appender;
  if (!cp_path.empty()) appender.emplace(cp_path);

  const Enumerator enumerator(board, options);
  const std::vector<std::uint64_t> pending = cp->pending();
  std::vector<UnitResult> results = cp->completed;
  run_units(
      enumerator, units, pending, args.jobs,
      [&](const UnitResult& r) {
        if (appender) appender->append(r);
        results.push_back(r);
      },
      args.stop_after);

  CountSection section;
  section.kind = options.kind;
  section.units_total = units.size();
  section.units_completed = results.size();
  section.complete = results.size() == units.size();
  for (const UnitResult& r : results) section.nodes_expanded += r.nodes_expanded;
  if (section.complete) {
    section.counts = merge_results(results, units.size(), board);
    if (options.kind == TourKind::open && !options.symmetry_reduce_starts) {
      section.per_start = per_start_counts(units, results, board);
    }
  }

  RunReport report;
  report.command = "count";
  report.board = board;
  report.options = enum_options_json(options);
  report.results = std::move(section);
  report.wall_time_seconds = clock.seconds();
  return report;
}

RunReport cmd_estimate(const EstimateArgs& args) {
  const Stopwatch clock;
  const BoardSpec board = make_board(args.rows, args.cols);
  require_countable(board);
  if (args.target == EstimateTarget::geometric_classes && !board.is_square()) {
    throw ParameterError("--target G needs a square board");
  }

  std::ofstream log_file;
  EstimateRunOptions run;
  run.jobs = args.jobs;
  if (!args.sample_log.empty()) {
    log_file.open(args.sample_log, std::ios::trunc);
    if (!log_file) throw IoError("cannot open sample log " + args.sample_log);
    run.sample_log = &log_file;
  }

  EstimateReport estimate = estimate_numberings(board, args.samples, args.policy,
                                                args.confidence, args.seed, run);
  if (args.target == EstimateTarget::geometric_classes) {
    estimate = derive_geometric_estimate(estimate, board);
  }
  if (log_file.is_open() && !log_file.flush()) {
    throw IoError("failed writing sample log " + args.sample_log);
  }

  RunReport report;
  report.command = "estimate";
  report.board = board;
  report.options = {{"samples", args.samples},
                    {"policy", policy_json(args.policy)},
                    {"confidence", args.confidence},
                    {"seed", args.seed},
                    {"target", to_string(args.target)}};
  report.generator = estimate.generator;
  report.results = std::move(estimate);
  report.wall_time_seconds = clock.seconds();
  return report;
}

RunReport cmd_verify(const VerifyArgs& args, const ReferenceTable& table) {
  const Stopwatch clock;
  if (args.level != "quick" && args.level != "full") {
    throw ParameterError("--level must be quick or full");
  }

  VerifySection section;
  section.level = args.level;
  section.passed = true;

  std::map<std::pair<int, int>, TourCounts> computed;
  auto counts_for = [&computed](int rows, int cols) -> const TourCounts& {
    auto key = std::make_pair(rows, cols);
    auto it = computed.find(key);
    if (it == computed.end()) {
      it = computed.emplace(key, enumerate_board(make_board(rows, cols), {}).counts)
               .first;
    }
    return it->second;
  };
  auto quantity = [](const TourCounts& c, const std::string& q) -> BigCount {
    if (q == "N") return c.numberings;
    if (q == "T") return c.diagrams;
    if (q == "G") return c.geometric_classes;
    if (q == "D") return c.closed_diagrams;
    if (q == "symmetric") return c.symmetric_diagrams;
    throw ParameterError("unknown reference quantity '" + q + "'");
  };

  for (const ReferenceEntry& ref : table.entries()) {
    VerifyEntry entry{ref.board_label(), ref.quantity, to_decimal(ref.value),
                      "", "reference-only", ref.provenance};
    if (ref.desk_runnable) {
      const BigCount value = quantity(counts_for(ref.rows, ref.cols), ref.quantity);
      entry.computed = to_decimal(value);
      entry.status = value == ref.value ? "match" : "mismatch";
    } else if (ref.quantity == "N") {
      // Every diagram gives exactly two numberings.
      if (const ReferenceEntry* t = table.find(ref.rows, ref.cols, "T")) {
        entry.computed = to_decimal(t->value * 2);
        entry.status = t->value * 2 == ref.value ? "reference-only" : "mismatch";
      }
    }
    if (entry.status == "mismatch") section.passed = false;
    section.entries.push_back(std::move(entry));
  }

  if (args.level == "full") {
    const BoardSpec board = make_board(8, 8);
    const ReferenceEntry* g = table.find(8, 8, "G");
    if (!g) throw ParameterError("reference table has no 8x8 G entry");
    EstimateRunOptions run;
    run.jobs = args.jobs;
    const EstimateReport estimate = derive_geometric_estimate(
        estimate_numberings(board, args.samples, args.policy, 0.99, args.seed, run),
        board);
    const double published = g->value.convert_to<double>();
    const bool inside = estimate.ci_low <= published && published <= estimate.ci_high;
    section.entries.push_back(
        {"8x8", "G", to_decimal(g->value),
         "[" + format_real(estimate.ci_low) + ", " + format_real(estimate.ci_high) +
             "]",
         inside ? "inside-ci" : "outside-ci",
         "99% interval from importance sampling"});
    section.passed = section.passed && inside;
    section.estimate = estimate;
  }

  RunReport report;
  report.command = "verify";
  report.board = make_board(8, 8);
  report.options = {{"level", args.level}};
  if (args.level == "full") {
    report.options["seed"] = args.seed;
    report.options["samples"] = args.samples;
    report.options["policy"] = policy_json(args.policy);
    report.generator = std::string(CounterStream::kName);
  }
  report.results = std::move(section);
  report.wall_time_seconds = clock.seconds();
  return report;
}

RunReport cmd_split(const SplitArgs& args) {
  const Stopwatch clock;
  const BoardSpec board = make_board(args.rows, args.cols);
  require_countable(board);
  if (args.out.empty()) throw ParameterError("split needs --out");
  EnumOptions options;
  options.kind = args.kind;
  options.prune = args.prune;
  options.split_depth = args.depth;
  options.symmetry_reduce_starts = args.symmetry_reduce;
  const Checkpoint cp = make_checkpoint(board, options);
  checkpoint_write_file(cp, args.out);

  RunReport report;
  report.command = "split";
  report.board = board;
  report.options = enum_options_json(options);
  report.results = SplitSection{cp.unit_count, args.out};
  report.wall_time_seconds = clock.seconds();
  return report;
}

ExitCode report_exit_code(const RunReport& report) {
  if (const auto* v = std::get_if<VerifySection>(&report.results)) {
    return v->passed ? ExitCode::ok : ExitCode::verification_mismatch;
  }
  return ExitCode::ok;
}

}  // namespace ktour
