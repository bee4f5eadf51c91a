#include "ktour/checkpoint.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "ktour/error.hpp"

namespace ktour {

namespace {

constexpr std::string_view kMagic = "ktour-checkpoint";

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_record(std::ostream& out, const std::string& record) {
  out << record << '\n'
      << "~ " << record.size() << ' ' << hex16(fnv1a64(record)) << '\n';
}

std::string header_record(const Checkpoint& cp) {
  std::string prune = options_fingerprint(cp.options);
  // Reuse the fingerprint's rule list verbatim.
  const auto begin = prune.find("prune=") + 6;
  const auto end = prune.find(';', begin);
  prune = prune.substr(begin, end - begin);

  std::ostringstream s;
  s << "H format_version=" << cp.format_version << " rows=" << cp.board.rows
    << " cols=" << cp.board.cols << " depth=" << cp.options.split_depth
    << " units=" << cp.unit_count << " kind=" << to_string(cp.options.kind)
    << " prune=" << prune
    << " symreduce=" << (cp.options.symmetry_reduce_starts ? 1 : 0)
    << " options_hash=" << hex16(options_hash(cp.options));
  return s.str();
}

std::string unit_record(const UnitResult& r) {
  return "U id=" + std::to_string(r.unit_id) +
         " numberings=" + to_decimal(r.numberings) +
         " canonical=" + to_decimal(r.canonical_numberings) +
         " symmetric=" + to_decimal(r.symmetric_canonical) +
         " closed=" + to_decimal(r.closed_directed) +
         " nodes=" + to_decimal(r.nodes_expanded);
}

class RecordReader {
 public:
  explicit RecordReader(std::istream& in) : in_(in) {}

  // Next line without its newline; false at clean end of input.
  bool next_line(std::string& line, std::uint64_t& offset) {
    offset = offset_;
    if (!std::getline(in_, line)) return false;
    if (in_.eof()) fail(offset, "record is not newline-terminated (truncated)");
    offset_ += line.size() + 1;
    return true;
  }

  // Reads a record plus its integrity line.
  bool next_record(std::string& record, std::uint64_t& offset) {
    if (!next_line(record, offset)) return false;
    std::string check;
    std::uint64_t check_offset = 0;
    if (!next_line(check, check_offset)) {
      fail(offset, "record has no integrity line (truncated)");
    }
    std::istringstream s(check);
    std::string tilde, hex;
    std::uint64_t length = 0;
    if (!(s >> tilde >> length >> hex) || tilde != "~") {
      fail(check_offset, "malformed integrity line");
    }
    if (length != record.size() || hex != hex16(fnv1a64(record))) {
      fail(offset, "integrity check failed");
    }
    return true;
  }

  [[noreturn]] static void fail(std::uint64_t offset, const std::string& why) {
    throw CheckpointFormatError("checkpoint record at byte offset " +
                                std::to_string(offset) + ": " + why);
  }

 private:
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

std::map<std::string, std::string> fields(const std::string& record,
                                          std::uint64_t offset) {
  std::map<std::string, std::string> out;
  std::istringstream s(record);
  std::string token;
  s >> token;  // record tag
  while (s >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      RecordReader::fail(offset, "malformed field '" + token + "'");
    }
    out[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return out;
}

const std::string& field(const std::map<std::string, std::string>& f,
                         const char* key, std::uint64_t offset) {
  auto it = f.find(key);
  if (it == f.end()) {
    RecordReader::fail(offset, std::string("missing field '") + key + "'");
  }
  return it->second;
}

BigCount count_field(const std::map<std::string, std::string>& f,
                     const char* key, std::uint64_t offset) {
  try {
    return parse_decimal(field(f, key, offset));
  } catch (const ParameterError& e) {
    RecordReader::fail(offset, std::string(key) + ": " + e.what());
  }
}

std::uint64_t u64_field(const std::map<std::string, std::string>& f,
                        const char* key, std::uint64_t offset) {
  const BigCount v = count_field(f, key, offset);
  if (v > std::numeric_limits<std::uint64_t>::max()) {
    RecordReader::fail(offset, std::string(key) + " out of range");
  }
  return v.convert_to<std::uint64_t>();
}

PruneRules parse_rules(const std::string& text, std::uint64_t offset) {
  PruneRules rules = PruneRules::none();
  if (text == "none") return rules;
  std::istringstream s(text);
  std::string name;
  while (std::getline(s, name, ',')) {
    if (name == "dead-square") rules.dead_square = true;
    else if (name == "anchor-degree") rules.anchor_degree = true;
    else if (name == "forced-endpoint") rules.forced_endpoint = true;
    else RecordReader::fail(offset, "unknown pruning rule '" + name + "'");
  }
  return rules;
}

}  // namespace

std::vector<std::uint64_t> Checkpoint::pending() const {
  std::vector<bool> done(unit_count, false);
  for (const UnitResult& r : completed) {
    if (r.unit_id < unit_count) done[r.unit_id] = true;
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t id = 0; id < unit_count; ++id) {
    if (!done[id]) out.push_back(id);
  }
  return out;
}

Checkpoint make_checkpoint(const BoardSpec& board, const EnumOptions& options) {
  Checkpoint cp;
  cp.board = board;
  cp.options = options;
  cp.unit_count = split_work(board, options.split_depth).size();
  return cp;
}

void checkpoint_write(const Checkpoint& cp, std::ostream& out) {
  out << kMagic << '\n';
  write_record(out, header_record(cp));
  for (const UnitResult& r : cp.completed) write_record(out, unit_record(r));
}

Checkpoint checkpoint_read(std::istream& in) {
  RecordReader reader(in);
  std::string line;
  std::uint64_t offset = 0;
  if (!reader.next_line(line, offset) || line != kMagic) {
    RecordReader::fail(0, "not a ktour checkpoint");
  }
  if (!reader.next_record(line, offset) || line.rfind("H ", 0) != 0) {
    RecordReader::fail(offset, "missing header record");
  }
  Checkpoint cp;
  {
    const auto h = fields(line, offset);
    const std::uint64_t version = u64_field(h, "format_version", offset);
    if (version != Checkpoint::kFormatVersion) {
      RecordReader::fail(offset, "unsupported format version " +
                                     std::to_string(version) + " (expected " +
                                     std::to_string(Checkpoint::kFormatVersion) +
                                     ")");
    }
    cp.format_version = static_cast<int>(version);
    cp.board.rows = static_cast<int>(u64_field(h, "rows", offset));
    cp.board.cols = static_cast<int>(u64_field(h, "cols", offset));
    cp.options.split_depth = static_cast<int>(u64_field(h, "depth", offset));
    cp.unit_count = u64_field(h, "units", offset);
    try {
      make_board(cp.board.rows, cp.board.cols);
    } catch (const Error& e) {
      RecordReader::fail(offset, e.what());
    }
    if (cp.options.split_depth < 1 ||
        cp.options.split_depth >= cp.board.squares()) {
      RecordReader::fail(offset, "split depth out of range for the board");
    }
    try {
      cp.options.kind = parse_tour_kind(field(h, "kind", offset));
    } catch (const ParameterError& e) {
      RecordReader::fail(offset, e.what());
    }
    cp.options.prune = parse_rules(field(h, "prune", offset), offset);
    cp.options.symmetry_reduce_starts = field(h, "symreduce", offset) == "1";
    if (field(h, "options_hash", offset) != hex16(options_hash(cp.options))) {
      RecordReader::fail(offset, "options hash does not match header fields");
    }
  }

  std::vector<bool> seen(cp.unit_count, false);
  while (reader.next_record(line, offset)) {
    if (line.rfind("U ", 0) != 0) {
      RecordReader::fail(offset, "unexpected record type");
    }
    const auto u = fields(line, offset);
    UnitResult r;
    r.unit_id = u64_field(u, "id", offset);
    if (r.unit_id >= cp.unit_count) {
      RecordReader::fail(offset, "unit id " + std::to_string(r.unit_id) +
                                     " out of range");
    }
    if (seen[r.unit_id]) {
      RecordReader::fail(offset, "duplicate unit id " + std::to_string(r.unit_id));
    }
    seen[r.unit_id] = true;
    r.numberings = count_field(u, "numberings", offset);
    r.canonical_numberings = count_field(u, "canonical", offset);
    r.symmetric_canonical = count_field(u, "symmetric", offset);
    r.closed_directed = count_field(u, "closed", offset);
    r.nodes_expanded = count_field(u, "nodes", offset);
    cp.completed.push_back(std::move(r));
  }
  return cp;
}

void checkpoint_write_file(const Checkpoint& cp,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint " + path.string() + " for writing");
  checkpoint_write(cp, out);
  out.flush();
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint checkpoint_read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  return checkpoint_read(in);
}

void require_compatible(const Checkpoint& cp, const BoardSpec& board,
                        const EnumOptions& options) {
  if (cp.board != board) {
    throw CheckpointMismatchError(
        "checkpoint is for a " + std::to_string(cp.board.rows) + "x" +
        std::to_string(cp.board.cols) + " board, run requested " +
        std::to_string(board.rows) + "x" + std::to_string(board.cols));
  }
  if (!(cp.options == options)) {
    throw CheckpointMismatchError("checkpoint options '" +
                                  options_fingerprint(cp.options) +
                                  "' differ from requested '" +
                                  options_fingerprint(options) + "'");
  }
}

CheckpointAppender::CheckpointAppender(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::app) {
  if (!out_) throw IoError("cannot append to checkpoint " + path.string());
}

void CheckpointAppender::append(const UnitResult& result) {
  write_record(out_, unit_record(result));
  out_.flush();
  if (!out_) throw IoError("failed appending to checkpoint " + path_.string());
}

}  // namespace ktour
