#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ktour/board.hpp"
#include "ktour/random.hpp"

namespace ktour {

enum class StartMode {
  uniform,     // start drawn uniformly, weight factor = squares
  stratified,  // sample i starts on square i mod squares
};

std::string_view to_string(StartMode mode);
StartMode parse_start_mode(std::string_view text);

// Move m is chosen with probability proportional to
// (onward_degree(m) + epsilon)^(-alpha). alpha = 0 is uniform over the
// admissible moves; larger alpha approaches Warnsdorff's greedy rule while
// keeping every move strictly positive.
struct SamplePolicy {
  double alpha = 2.0;
  double epsilon = 1.0;
  StartMode start_mode = StartMode::uniform;

  friend bool operator==(const SamplePolicy&, const SamplePolicy&) = default;
};

// Throws ParameterError unless alpha is finite and >= 0 and epsilon is
// finite and > 0.
void validate(const SamplePolicy& policy);

struct SampleOutcome {
  bool success = false;
  // -sum of log selection probabilities, including the start choice.
  double log_weight = 0.0;
  int steps_reached = 0;
  std::vector<Square> path;
};

class PathSampler {
 public:
  PathSampler(const BoardSpec& board, const SamplePolicy& policy);

  const AdjacencyTable& adjacency() const noexcept { return adjacency_; }
  const SamplePolicy& policy() const noexcept { return policy_; }

  // Uniform start.
  SampleOutcome sample(CounterStream& stream) const;
  // Fixed start; the log-weight still carries the log(squares) start factor.
  SampleOutcome sample_from(Square start, CounterStream& stream) const;

  // Selection weight for a move whose destination has `onward` unvisited
  // neighbours.
  double move_weight(int onward) const { return weights_[onward]; }

 private:
  AdjacencyTable adjacency_;
  SamplePolicy policy_;
  double weights_[9];
};

SampleOutcome sample_path(const BoardSpec& board, const SamplePolicy& policy,
                          CounterStream& stream);

enum class EstimateTarget { numberings, geometric_classes };

std::string_view to_string(EstimateTarget target);  // "N" / "G"
EstimateTarget parse_estimate_target(std::string_view text);

struct EstimateReport {
  EstimateTarget target = EstimateTarget::numberings;
  double point_estimate = 0.0;
  std::uint64_t sample_count = 0;
  std::uint64_t successes = 0;
  double sample_variance = 0.0;  // of the per-sample weight
  double standard_error = 0.0;
  double confidence_level = 0.0;
  double z = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;
  SamplePolicy policy;
  std::string generator = std::string(CounterStream::kName);
  std::uint64_t stream_size = 0;
  // Set on G estimates derived as N / 16, which presumes every diagram
  // has a trivial stabilizer.
  bool assumes_trivial_stabilizers = false;

  friend bool operator==(const EstimateReport&, const EstimateReport&) = default;
};

struct EstimateRunOptions {
  int jobs = 1;
  // When set, one "stream sample success log_weight" line per sample, in
  // (stream, sample) order regardless of jobs.
  std::ostream* sample_log = nullptr;
};

// Samples per random stream. Fixed so that results are independent of the
// number of worker threads.
inline constexpr std::uint64_t kStreamSamples = 8192;

// Mean of W_i (W = exp(log_weight) on success, 0 otherwise) with a
// normal-approximation interval. Throws ParameterError for samples < 2,
// confidence outside (0, 1), an invalid policy, or stratified sampling with
// samples not a multiple of the square count.
EstimateReport estimate_numberings(const BoardSpec& board,
                                   std::uint64_t samples,
                                   const SamplePolicy& policy,
                                   double confidence, std::uint64_t seed,
                                   const EstimateRunOptions& run = {});

// Divides estimate, interval and standard error by 16 (variance by 256).
// Requires target N on a square board; throws ParameterError otherwise.
EstimateReport derive_geometric_estimate(const EstimateReport& report,
                                         const BoardSpec& board);

// Two-sided standard normal quantile z with P(|Z| <= z) = confidence,
// computed by boost::math::quantile.
double normal_quantile(double confidence);

// mean +- z * sqrt(variance / n).
std::pair<double, double> confidence_interval(double mean, double variance,
                                              std::uint64_t n,
                                              double confidence);

}  // namespace ktour
