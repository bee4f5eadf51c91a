#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ktour/bigcount.hpp"
#include "ktour/board.hpp"
#include "ktour/enumerate.hpp"
#include "ktour/estimate.hpp"
#include "ktour/symmetry.hpp"

namespace ktour {

inline constexpr int kReportFormatVersion = 1;

struct CountSection {
  TourKind kind = TourKind::open;
  bool complete = false;
  std::uint64_t units_total = 0;
  std::uint64_t units_completed = 0;
  std::optional<TourCounts> counts;  // present once every unit is done
  std::vector<BigCount> per_start;   // open runs without start reduction
  BigCount nodes_expanded;

  friend bool operator==(const CountSection&, const CountSection&) = default;
};

struct VerifyEntry {
  std::string board;     // "RxC"
  std::string quantity;  // N, T, G, D or symmetric
  std::string expected;
  std::string computed;  // empty when not recomputed
  std::string status;    // match, mismatch, reference-only, inside-ci, outside-ci
  std::string provenance;

  friend bool operator==(const VerifyEntry&, const VerifyEntry&) = default;
};

struct VerifySection {
  std::string level;  // quick or full
  bool passed = false;
  std::vector<VerifyEntry> entries;
  std::optional<EstimateReport> estimate;

  friend bool operator==(const VerifySection&, const VerifySection&) = default;
};

struct SplitSection {
  std::uint64_t units = 0;
  std::string checkpoint;

  friend bool operator==(const SplitSection&, const SplitSection&) = default;
};

using ReportResults =
    std::variant<std::monostate, CountSection, EstimateReport, VerifySection,
                 SplitSection>;

// One document per CLI run. Counts are decimal strings; reals are JSON
// numbers printed with round-trip precision.
struct RunReport {
  int format_version = kReportFormatVersion;
  std::string command;
  BoardSpec board;
  nlohmann::json options = nlohmann::json::object();
  ReportResults results;
  double wall_time_seconds = 0.0;
  std::string generator;  // random stream name for sampling runs

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

nlohmann::json to_json(const RunReport& report);
// Throws ParameterError on schema violations.
RunReport report_from_json(const nlohmann::json& doc);

std::string render_report(const RunReport& report);
// Rendering with wall_time_seconds zeroed; equal for reproducible runs.
std::string render_report_without_timing(const RunReport& report);

nlohmann::json to_json(const EstimateReport& estimate);
EstimateReport estimate_from_json(const nlohmann::json& doc);

struct ReferenceEntry {
  int rows = 0;
  int cols = 0;
  std::string quantity;  // N, T, G, D or symmetric
  BigCount value;
  std::string provenance;
  bool desk_runnable = false;

  std::string board_label() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
  }

  friend bool operator==(const ReferenceEntry&, const ReferenceEntry&) = default;
};

class ReferenceTable {
 public:
  // The published 8x8 counts: D, T, G and N = 2T. None are desk runnable.
  static ReferenceTable published();

  // Adds the entries of a small-board table file (JSON, as written by the
  // oracle generator). Throws IoError or ParameterError.
  void load(const std::filesystem::path& path);
  void add(ReferenceEntry entry);

  const std::vector<ReferenceEntry>& entries() const { return entries_; }
  const ReferenceEntry* find(int rows, int cols,
                             std::string_view quantity) const;

 private:
  std::vector<ReferenceEntry> entries_;
};

}  // namespace ktour
