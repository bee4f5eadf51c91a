#include "ktour/report.hpp"

#include <fstream>

#include "ktour/error.hpp"

namespace ktour {

using nlohmann::json;

namespace {

json counts_json(const TourCounts& c, TourKind kind) {
  json out;
  if (kind == TourKind::open) {
    out["numberings"] = to_decimal(c.numberings);
    out["diagrams"] = to_decimal(c.diagrams);
    out["geometric_classes"] = to_decimal(c.geometric_classes);
    out["symmetric_diagrams"] = to_decimal(c.symmetric_diagrams);
    out["group_size"] = c.group_size;
    out["division_relation_exact"] = c.division_relation_exact();
  }
  out["closed_directed_cycles"] = to_decimal(c.closed_directed);
  out["closed_diagrams"] = to_decimal(c.closed_diagrams);
  return out;
}

BigCount decimal_at(const json& doc, const char* key) {
  return parse_decimal(doc.at(key).get<std::string>());
}

TourCounts counts_from_json(const json& doc, TourKind kind) {
  TourCounts c;
  if (kind == TourKind::open) {
    c.numberings = decimal_at(doc, "numberings");
    c.diagrams = decimal_at(doc, "diagrams");
    c.geometric_classes = decimal_at(doc, "geometric_classes");
    c.symmetric_diagrams = decimal_at(doc, "symmetric_diagrams");
    c.group_size = doc.at("group_size").get<int>();
  }
  c.closed_directed = decimal_at(doc, "closed_directed_cycles");
  c.closed_diagrams = decimal_at(doc, "closed_diagrams");
  return c;
}

json section_json(const CountSection& s) {
  json out{{"type", "count"},
           {"kind", to_string(s.kind)},
           {"complete", s.complete},
           {"units_total", s.units_total},
           {"units_completed", s.units_completed},
           {"nodes_expanded", to_decimal(s.nodes_expanded)}};
  out["counts"] = s.counts ? counts_json(*s.counts, s.kind) : json(nullptr);
  json starts = json::array();
  for (const BigCount& v : s.per_start) starts.push_back(to_decimal(v));
  out["per_start"] = std::move(starts);
  return out;
}

CountSection count_section_from_json(const json& doc) {
  CountSection s;
  s.kind = parse_tour_kind(doc.at("kind").get<std::string>());
  s.complete = doc.at("complete").get<bool>();
  s.units_total = doc.at("units_total").get<std::uint64_t>();
  s.units_completed = doc.at("units_completed").get<std::uint64_t>();
  s.nodes_expanded = decimal_at(doc, "nodes_expanded");
  if (!doc.at("counts").is_null()) {
    s.counts = counts_from_json(doc.at("counts"), s.kind);
  }
  for (const json& v : doc.at("per_start")) {
    s.per_start.push_back(parse_decimal(v.get<std::string>()));
  }
  return s;
}

json section_json(const VerifySection& s) {
  json entries = json::array();
  for (const VerifyEntry& e : s.entries) {
    entries.push_back({{"board", e.board},
                       {"quantity", e.quantity},
                       {"expected", e.expected},
                       {"computed", e.computed},
                       {"status", e.status},
                       {"provenance", e.provenance}});
  }
  return {{"type", "verify"},
          {"level", s.level},
          {"passed", s.passed},
          {"entries", entries},
          {"estimate", s.estimate ? to_json(*s.estimate) : json(nullptr)}};
}

VerifySection verify_section_from_json(const json& doc) {
  VerifySection s;
  s.level = doc.at("level").get<std::string>();
  s.passed = doc.at("passed").get<bool>();
  for (const json& e : doc.at("entries")) {
    s.entries.push_back({e.at("board").get<std::string>(),
                         e.at("quantity").get<std::string>(),
                         e.at("expected").get<std::string>(),
                         e.at("computed").get<std::string>(),
                         e.at("status").get<std::string>(),
                         e.at("provenance").get<std::string>()});
  }
  if (!doc.at("estimate").is_null()) {
    s.estimate = estimate_from_json(doc.at("estimate"));
  }
  return s;
}

json results_json(const ReportResults& results) {
  struct Visitor {
    json operator()(std::monostate) const { return {{"type", "none"}}; }
    json operator()(const CountSection& s) const { return section_json(s); }
    json operator()(const EstimateReport& e) const {
      json out = to_json(e);
      out["type"] = "estimate";
      return out;
    }
    json operator()(const VerifySection& s) const { return section_json(s); }
    json operator()(const SplitSection& s) const {
      return {{"type", "split"}, {"units", s.units}, {"checkpoint", s.checkpoint}};
    }
  };
  return std::visit(Visitor{}, results);
}

ReportResults results_from_json(const json& doc) {
  const std::string type = doc.at("type").get<std::string>();
  if (type == "none") return std::monostate{};
  if (type == "count") return count_section_from_json(doc);
  if (type == "estimate") return estimate_from_json(doc);
  if (type == "verify") return verify_section_from_json(doc);
  if (type == "split") {
    return SplitSection{doc.at("units").get<std::uint64_t>(),
                        doc.at("checkpoint").get<std::string>()};
  }
  throw ParameterError("unknown results type '" + type + "'");
}

}  // namespace

json to_json(const EstimateReport& e) {
  return {{"target", to_string(e.target)},
          {"point_estimate", e.point_estimate},
          {"sample_count", e.sample_count},
          {"successes", e.successes},
          {"sample_variance", e.sample_variance},
          {"standard_error", e.standard_error},
          {"confidence_level", e.confidence_level},
          {"z", e.z},
          {"ci_low", e.ci_low},
          {"ci_high", e.ci_high},
          {"seed", e.seed},
          {"policy",
           {{"alpha", e.policy.alpha},
            {"epsilon", e.policy.epsilon},
            {"start_mode", to_string(e.policy.start_mode)}}},
          {"generator", e.generator},
          {"stream_size", e.stream_size},
          {"assumes_trivial_stabilizers", e.assumes_trivial_stabilizers}};
}

EstimateReport estimate_from_json(const json& doc) {
  try {
    EstimateReport e;
    e.target = parse_estimate_target(doc.at("target").get<std::string>());
    e.point_estimate = doc.at("point_estimate").get<double>();
    e.sample_count = doc.at("sample_count").get<std::uint64_t>();
    e.successes = doc.at("successes").get<std::uint64_t>();
    e.sample_variance = doc.at("sample_variance").get<double>();
    e.standard_error = doc.at("standard_error").get<double>();
    e.confidence_level = doc.at("confidence_level").get<double>();
    e.z = doc.at("z").get<double>();
    e.ci_low = doc.at("ci_low").get<double>();
    e.ci_high = doc.at("ci_high").get<double>();
    e.seed = doc.at("seed").get<std::uint64_t>();
    const json& p = doc.at("policy");
    e.policy.alpha = p.at("alpha").get<double>();
    e.policy.epsilon = p.at("epsilon").get<double>();
    e.policy.start_mode = parse_start_mode(p.at("start_mode").get<std::string>());
    e.generator = doc.at("generator").get<std::string>();
    e.stream_size = doc.at("stream_size").get<std::uint64_t>();
    e.assumes_trivial_stabilizers =
        doc.at("assumes_trivial_stabilizers").get<bool>();
    return e;
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("malformed estimate: ") + ex.what());
  }
}

json to_json(const RunReport& r) {
  return {{"format_version", r.format_version},
          {"command", r.command},
          {"board", {{"rows", r.board.rows}, {"cols", r.board.cols}}},
          {"options", r.options},
          {"results", results_json(r.results)},
          {"wall_time_seconds", r.wall_time_seconds},
          {"generator", r.generator}};
}

RunReport report_from_json(const json& doc) {
  try {
    RunReport r;
    r.format_version = doc.at("format_version").get<int>();
    if (r.format_version != kReportFormatVersion) {
      throw ParameterError("unsupported report format version " +
                           std::to_string(r.format_version));
    }
    r.command = doc.at("command").get<std::string>();
    r.board.rows = doc.at("board").at("rows").get<int>();
    r.board.cols = doc.at("board").at("cols").get<int>();
    r.options = doc.at("options");
    r.results = results_from_json(doc.at("results"));
    r.wall_time_seconds = doc.at("wall_time_seconds").get<double>();
    r.generator = doc.at("generator").get<std::string>();
    return r;
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("malformed report: ") + ex.what());
  }
}

std::string render_report(const RunReport& report) {
  return to_json(report).dump(2) + "\n";
}

std::string render_report_without_timing(const RunReport& report) {
  RunReport copy = report;
  copy.wall_time_seconds = 0.0;
  return render_report(copy);
}

ReferenceTable ReferenceTable::published() {
  ReferenceTable t;
  const char* closed = "published closed-tour diagram count (B. McKay; I. Wegener)";
  const char* open = "published open-tour diagram count (A. Chernov)";
  t.add({8, 8, "D", parse_decimal("13267364410532"), closed, false});
  t.add({8, 8, "T", parse_decimal("9795914085489952"), open, false});
  t.add({8, 8, "G", parse_decimal("1224489260686244"),
         "published geometric class count, T / 8", false});
  t.add({8, 8, "N", parse_decimal("19591828170979904"),
         "published numbering count, 2T", false});
  return t;
}

void ReferenceTable::add(ReferenceEntry entry) {
  for (ReferenceEntry& e : entries_) {
    if (e.rows == entry.rows && e.cols == entry.cols &&
        e.quantity == entry.quantity) {
      e = std::move(entry);
      return;
    }
  }
  entries_.push_back(std::move(entry));
}

void ReferenceTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference table " + path.string());
  try {
    const json doc = json::parse(in);
    if (doc.at("format_version").get<int>() != 1) {
      throw ParameterError("unsupported reference table version");
    }
    for (const json& e : doc.at("entries")) {
      add({e.at("rows").get<int>(), e.at("cols").get<int>(),
           e.at("quantity").get<std::string>(),
           parse_decimal(e.at("value").get<std::string>()),
           e.at("provenance").get<std::string>(),
           e.at("desk_runnable").get<bool>()});
    }
  } catch (const json::exception& ex) {
    throw ParameterError("malformed reference table " + path.string() + ": " +
                         ex.what());
  }
}

const ReferenceEntry* ReferenceTable::find(int rows, int cols,
                                           std::string_view quantity) const {
  for (const ReferenceEntry& e : entries_) {
    if (e.rows == rows && e.cols == cols && e.quantity == quantity) return &e;
  }
  return nullptr;
}

}  // namespace ktour
