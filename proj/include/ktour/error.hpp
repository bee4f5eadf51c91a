#pragma once

#include <stdexcept>
#include <string>

namespace ktour {

// Process exit codes shared by the command-line front end.
enum class ExitCode : int {
  ok = 0,
  verification_mismatch = 1,
  argument_error = 2,
  checkpoint_mismatch = 3,
  io_error = 4,
  internal_error = 5,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what,
                 ExitCode code = ExitCode::internal_error)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class InvalidBoardError : public Error {
 public:
  explicit InvalidBoardError(const std::string& what)
      : Error(what, ExitCode::argument_error) {}
};

class UnsupportedSizeError : public Error {
 public:
  explicit UnsupportedSizeError(const std::string& what)
      : Error(what, ExitCode::argument_error) {}
};

class InvalidTransformError : public Error {
 public:
  explicit InvalidTransformError(const std::string& what)
      : Error(what, ExitCode::argument_error) {}
};

class InvalidTourError : public Error {
 public:
  explicit InvalidTourError(const std::string& what)
      : Error(what, ExitCode::argument_error) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what)
      : Error(what, ExitCode::argument_error) {}
};

// The search space is too large for a single direct run; split it into
// work units and drive those through a checkpoint instead.
class NeedsPartitioningError : public Error {
 public:
  explicit NeedsPartitioningError(const std::string& what)
      : Error(what, ExitCode::argument_error) {}
};

// An arithmetic identity that must hold exactly did not (odd N, odd
// directed cycle count, G outside [T/|group|, T], counter overflow).
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what)
      : Error(what, ExitCode::internal_error) {}
};

class MergeError : public Error {
 public:
  explicit MergeError(const std::string& what)
      : Error(what, ExitCode::internal_error) {}
};

// Malformed or truncated checkpoint data.
class CheckpointFormatError : public Error {
 public:
  explicit CheckpointFormatError(const std::string& what)
      : Error(what, ExitCode::checkpoint_mismatch) {}
};

// A well-formed checkpoint that belongs to a different run configuration.
class CheckpointMismatchError : public Error {
 public:
  explicit CheckpointMismatchError(const std::string& what)
      : Error(what, ExitCode::checkpoint_mismatch) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what, ExitCode::io_error) {}
};

}  // namespace ktour
