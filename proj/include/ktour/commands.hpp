#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ktour/enumerate.hpp"
#include "ktour/error.hpp"
#include "ktour/estimate.hpp"
#include "ktour/report.hpp"

namespace ktour {

// Unset fields fall back to the checkpoint's values on resume and to the
// defaults otherwise.
struct CountArgs {
  std::optional<int> rows;
  std::optional<int> cols;
  std::optional<TourKind> kind;
  std::optional<int> split_depth;
  std::optional<PruneRules> prune;
  std::optional<bool> symmetry_reduce;
  std::string checkpoint;  // start a new checkpoint at this path
  std::string resume;      // continue the checkpoint at this path
  int jobs = 1;
  std::uint64_t stop_after = 0;  // process at most this many units (0 = all)
};

struct EstimateArgs {
  int rows = 8;
  int cols = 8;
  std::uint64_t samples = 1'000'000;
  SamplePolicy policy;
  double confidence = 0.99;
  std::uint64_t seed = 42;
  int jobs = 1;
  EstimateTarget target = EstimateTarget::numberings;
  std::string sample_log;
};

struct VerifyArgs {
  std::string level = "quick";
  std::uint64_t seed = 2006;
  std::uint64_t samples = 1'000'000;
  SamplePolicy policy;
  int jobs = 1;
};

struct SplitArgs {
  int rows = 8;
  int cols = 8;
  int depth = 1;
  std::string out;
  TourKind kind = TourKind::open;
  PruneRules prune;
  bool symmetry_reduce = false;
};

RunReport cmd_count(const CountArgs& args);
RunReport cmd_estimate(const EstimateArgs& args);
RunReport cmd_verify(const VerifyArgs& args, const ReferenceTable& table);
RunReport cmd_split(const SplitArgs& args);

// Exit status a finished report maps to (verification mismatch -> 1).
ExitCode report_exit_code(const RunReport& report);

// Full command-line entry point. The report goes to `out` (or --report
// file), diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ktour
