#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <vector>

#include "ktour/board.hpp"
#include "ktour/enumerate.hpp"

namespace ktour {

// Resumable state of a partitioned enumeration.
//
// On disk the checkpoint is a line-oriented record stream:
//
//   ktour-checkpoint
//   H format_version=1 rows=5 cols=5 depth=2 units=96 kind=open
//     prune=dead-square,anchor-degree,forced-endpoint symreduce=0
//     options_hash=<16 hex digits>
//   ~ <byte length of previous line> <fnv1a64 of previous line, 16 hex>
//   U id=17 numberings=24 canonical=3 symmetric=0 closed=0 nodes=5120
//   ~ ...
//
// (The H record is a single line.) Every H/U record is followed by its
// integrity line. All integers are unbounded decimal strings. Completed
// units are appended as they finish; pending ids are those without a U
// record.
struct Checkpoint {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  BoardSpec board;
  EnumOptions options;  // options.split_depth is the unit depth
  std::uint64_t unit_count = 0;
  std::vector<UnitResult> completed;

  std::vector<std::uint64_t> pending() const;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// Fresh checkpoint with every unit pending.
Checkpoint make_checkpoint(const BoardSpec& board, const EnumOptions& options);

void checkpoint_write(const Checkpoint& cp, std::ostream& out);

// Throws CheckpointFormatError naming the byte offset of the first bad
// record (bad integrity line, truncation, unknown version, duplicate id).
Checkpoint checkpoint_read(std::istream& in);

void checkpoint_write_file(const Checkpoint& cp,
                           const std::filesystem::path& path);
Checkpoint checkpoint_read_file(const std::filesystem::path& path);

// Throws CheckpointMismatchError when the checkpoint was produced for a
// different board or option set.
void require_compatible(const Checkpoint& cp, const BoardSpec& board,
                        const EnumOptions& options);

// Single writer that appends one U record per completed unit and flushes.
class CheckpointAppender {
 public:
  explicit CheckpointAppender(const std::filesystem::path& path);

  void append(const UnitResult& result);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace ktour
