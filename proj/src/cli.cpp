#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ktour/commands.hpp"
#include "ktour/error.hpp"

#ifndef KTOUR_DEFAULT_REFERENCES
#define KTOUR_DEFAULT_REFERENCES ""
#endif

namespace ktour {

namespace {

int default_jobs() {
  if (const char* env = std::getenv("KTOUR_JOBS")) {
    try {
      const int jobs = std::stoi(env);
      if (jobs >= 1) return jobs;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::string default_references() {
  if (const char* env = std::getenv("KTOUR_REFERENCES")) return env;
  return KTOUR_DEFAULT_REFERENCES;
}

PruneRules parse_prune(const std::string& mode,
                       const std::vector<std::string>& disabled) {
  PruneRules rules = PruneRules::all();
  if (mode == "off") {
    rules = PruneRules::none();
  } else if (mode != "on") {
    throw ParameterError("--prune must be on or off");
  }
  for (const std::string& name : disabled) {
    if (name == "dead-square") rules.dead_square = false;
    else if (name == "anchor-degree") rules.anchor_degree = false;
    else if (name == "forced-endpoint") rules.forced_endpoint = false;
    else throw ParameterError("unknown pruning rule '" + name + "'");
  }
  return rules;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Exact counting and importance-sampling estimation of knight's tours"};
  app.require_subcommand(1);
  std::string report_path;
  app.add_option("--report", report_path, "Write the report here instead of stdout");

  // count
  CountArgs count;
  int count_rows = 0;
  int count_cols = 0;
  int count_depth = 1;
  bool closed = false;
  bool open = false;
  std::string prune_mode = "on";
  std::vector<std::string> disabled_rules;
  bool symmetry_reduce = false;
  count.jobs = default_jobs();
  auto* count_cmd = app.add_subcommand("count", "Exact enumeration");
  auto* rows_opt = count_cmd->add_option("--rows", count_rows)->check(CLI::PositiveNumber);
  auto* cols_opt = count_cmd->add_option("--cols", count_cols)->check(CLI::PositiveNumber);
  auto* closed_flag = count_cmd->add_flag("--closed", closed, "Count closed tours (D)");
  auto* open_flag = count_cmd->add_flag("--open", open, "Count open tours (N, T, G)");
  closed_flag->excludes(open_flag);
  auto* depth_opt = count_cmd->add_option("--split-depth", count_depth, "Work unit prefix length");
  count_cmd->add_option("--checkpoint", count.checkpoint, "Start a checkpoint file");
  count_cmd->add_option("--resume", count.resume, "Resume a checkpoint file");
  auto* prune_opt = count_cmd->add_option("--prune", prune_mode, "on or off");
  auto* disable_opt =
      count_cmd->add_option("--disable-rule", disabled_rules,
                            "dead-square, anchor-degree or forced-endpoint");
  auto* symreduce_flag = count_cmd->add_flag("--symmetry-reduce", symmetry_reduce);
  count_cmd->add_option("--jobs", count.jobs)->check(CLI::PositiveNumber);
  count_cmd->add_option("--stop-after", count.stop_after,
                        "Stop after this many units (checkpointed runs)");

  // estimate
  EstimateArgs estimate;
  estimate.jobs = default_jobs();
  std::string target = "N";
  std::string start_mode = "uniform";
  auto* estimate_cmd = app.add_subcommand("estimate", "Importance-sampling estimate");
  estimate_cmd->add_option("--rows", estimate.rows)->required()->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--cols", estimate.cols)->required()->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--samples", estimate.samples);
  estimate_cmd->add_option("--alpha", estimate.policy.alpha);
  estimate_cmd->add_option("--epsilon", estimate.policy.epsilon);
  estimate_cmd->add_option("--confidence", estimate.confidence);
  estimate_cmd->add_option("--seed", estimate.seed);
  estimate_cmd->add_option("--jobs", estimate.jobs)->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--target", target, "N or G");
  estimate_cmd->add_option("--start-mode", start_mode, "uniform or stratified");
  estimate_cmd->add_option("--sample-log", estimate.sample_log);

  // verify
  VerifyArgs verify;
  verify.jobs = default_jobs();
  std::string references = default_references();
  auto* verify_cmd = app.add_subcommand("verify", "Check reference counts");
  verify_cmd->add_option("--level", verify.level, "quick or full");
  verify_cmd->add_option("--references", references, "Small-board reference table");
  verify_cmd->add_option("--seed", verify.seed);
  verify_cmd->add_option("--samples", verify.samples);
  verify_cmd->add_option("--alpha", verify.policy.alpha);
  verify_cmd->add_option("--epsilon", verify.policy.epsilon);
  verify_cmd->add_option("--jobs", verify.jobs)->check(CLI::PositiveNumber);

  // split
  SplitArgs split;
  bool split_closed = false;
  std::string split_prune = "on";
  std::vector<std::string> split_disabled;
  auto* split_cmd = app.add_subcommand("split", "Write a checkpoint with all units pending");
  split_cmd->add_option("--rows", split.rows)->required()->check(CLI::PositiveNumber);
  split_cmd->add_option("--cols", split.cols)->required()->check(CLI::PositiveNumber);
  split_cmd->add_option("--depth", split.depth)->required();
  split_cmd->add_option("--out", split.out)->required();
  split_cmd->add_flag("--closed", split_closed);
  split_cmd->add_option("--prune", split_prune);
  split_cmd->add_option("--disable-rule", split_disabled);
  split_cmd->add_flag("--symmetry-reduce", split.symmetry_reduce);

  std::vector<std::string> argv_store;
  argv_store.emplace_back("ktour");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return static_cast<int>(ExitCode::ok);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::argument_error);
  }

  try {
    RunReport report;
    if (count_cmd->parsed()) {
      if (count.resume.empty() && (!*rows_opt || !*cols_opt)) {
        throw ParameterError("count needs --rows and --cols unless resuming");
      }
      if (*rows_opt) count.rows = count_rows;
      if (*cols_opt) count.cols = count_cols;
      if (closed) count.kind = TourKind::closed;
      if (open) count.kind = TourKind::open;
      if (*depth_opt) count.split_depth = count_depth;
      if (*prune_opt || *disable_opt) count.prune = parse_prune(prune_mode, disabled_rules);
      if (*symreduce_flag) count.symmetry_reduce = true;
      report = cmd_count(count);
    } else if (estimate_cmd->parsed()) {
      estimate.target = parse_estimate_target(target);
      estimate.policy.start_mode = parse_start_mode(start_mode);
      report = cmd_estimate(estimate);
    } else if (verify_cmd->parsed()) {
      ReferenceTable table = ReferenceTable::published();
      if (!references.empty()) table.load(references);
      report = cmd_verify(verify, table);
    } else {
      split.kind = split_closed ? TourKind::closed : TourKind::open;
      split.prune = parse_prune(split_prune, split_disabled);
      report = cmd_split(split);
    }

    const std::string text = render_report(report);
    if (report_path.empty()) {
      out << text;
    } else {
      std::ofstream file(report_path, std::ios::trunc);
      if (!file || !(file << text)) {
        throw IoError("cannot write report " + report_path);
      }
    }
    if (const auto* v = std::get_if<VerifySection>(&report.results)) {
      for (const VerifyEntry& e : v->entries) {
        if (e.status == "mismatch" || e.status == "outside-ci") {
          err << "verify: " << e.board << ' ' << e.quantity << ": expected "
              << e.expected << ", computed " << e.computed << " (" << e.status
              << ")\n";
        }
      }
    }
    return static_cast<int>(report_exit_code(report));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::internal_error);
  }
}

}  // namespace ktour
