#include "ktour/estimate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "ktour/error.hpp"

namespace ktour {

namespace {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct StreamTotals {
  CompensatedSum weight;
  CompensatedSum weight_sq;
  std::uint64_t count = 0;
  std::uint64_t successes = 0;
  std::string log;
};

}  // namespace

std::string_view to_string(StartMode mode) {
  return mode == StartMode::uniform ? "uniform" : "stratified";
}

StartMode parse_start_mode(std::string_view text) {
  if (text == "uniform") return StartMode::uniform;
  if (text == "stratified") return StartMode::stratified;
  throw ParameterError("unknown start mode '" + std::string(text) + "'");
}

std::string_view to_string(EstimateTarget target) {
  return target == EstimateTarget::numberings ? "N" : "G";
}

EstimateTarget parse_estimate_target(std::string_view text) {
  if (text == "N") return EstimateTarget::numberings;
  if (text == "G") return EstimateTarget::geometric_classes;
  throw ParameterError("estimate target must be N or G, got '" +
                       std::string(text) + "'");
}

void validate(const SamplePolicy& policy) {
  if (!std::isfinite(policy.alpha) || policy.alpha < 0.0) {
    throw ParameterError("alpha must be finite and nonnegative");
  }
  if (!std::isfinite(policy.epsilon) || policy.epsilon <= 0.0) {
    throw ParameterError("epsilon must be finite and positive");
  }
}

PathSampler::PathSampler(const BoardSpec& board, const SamplePolicy& policy)
    : adjacency_(board), policy_(policy) {
  require_countable(board);
  validate(policy);
  for (int d = 0; d <= 8; ++d) {
    weights_[d] = std::pow(d + policy.epsilon, -policy.alpha);
  }
}

SampleOutcome PathSampler::sample(CounterStream& stream) const {
  const int squares = adjacency_.squares();
  const auto start = static_cast<Square>(
      std::min<double>(stream.next_unit() * squares, squares - 1));
  return sample_from(start, stream);
}

SampleOutcome PathSampler::sample_from(Square start,
                                       CounterStream& stream) const {
  const int squares = adjacency_.squares();
  SampleOutcome out;
  out.path.reserve(squares);
  out.path.push_back(start);
  out.log_weight = std::log(static_cast<double>(squares));

  OccupancyMask unvisited = OccupancyMask::all(squares);
  unvisited.remove(start);
  Square current = start;

  std::array<Square, 8> moves{};
  std::array<double, 8> weight{};
  while (static_cast<int>(out.path.size()) < squares) {
    OccupancyMask options = adjacency_.neighbor_mask(current) & unvisited;
    int n = 0;
    double total = 0.0;
    while (!options.empty()) {
      const Square m = options.pop_lowest();
      moves[n] = m;
      weight[n] = weights_[(adjacency_.neighbor_mask(m) & unvisited).count()];
      total += weight[n];
      ++n;
    }
    if (n == 0) break;

    double u = stream.next_unit() * total;
    int pick = 0;
    while (pick + 1 < n && u >= weight[pick]) {
      u -= weight[pick];
      ++pick;
    }
    out.log_weight += std::log(total / weight[pick]);
    current = moves[pick];
    unvisited.remove(current);
    out.path.push_back(current);
  }
  out.steps_reached = static_cast<int>(out.path.size());
  out.success = out.steps_reached == squares;
  return out;
}

SampleOutcome sample_path(const BoardSpec& board, const SamplePolicy& policy,
                          CounterStream& stream) {
  return PathSampler(board, policy).sample(stream);
}

double normal_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ParameterError("confidence must lie in (0, 1)");
  }
  const boost::math::normal standard;
  return boost::math::quantile(standard, 0.5 + confidence / 2.0);
}

std::pair<double, double> confidence_interval(double mean, double variance,
                                              std::uint64_t n,
                                              double confidence) {
  if (n < 2) throw ParameterError("confidence interval needs n >= 2");
  if (!(variance >= 0.0) || !std::isfinite(variance) || !std::isfinite(mean)) {
    throw ParameterError("variance must be finite and nonnegative");
  }
  const double half =
      normal_quantile(confidence) * std::sqrt(variance / static_cast<double>(n));
  return {mean - half, mean + half};
}

EstimateReport estimate_numberings(const BoardSpec& board,
                                   std::uint64_t samples,
                                   const SamplePolicy& policy,
                                   double confidence, std::uint64_t seed,
                                   const EstimateRunOptions& run) {
  if (samples < 2) throw ParameterError("at least two samples are required");
  const double z = normal_quantile(confidence);
  const PathSampler sampler(board, policy);
  const auto squares = static_cast<std::uint64_t>(board.squares());
  if (policy.start_mode == StartMode::stratified && samples % squares != 0) {
    throw ParameterError("stratified sampling needs a sample count divisible by " +
                         std::to_string(squares));
  }

  const std::uint64_t stream_count = (samples + kStreamSamples - 1) / kStreamSamples;
  std::vector<StreamTotals> totals(stream_count);

  auto run_stream = [&](std::uint64_t k) {
    CounterStream stream(seed, k);
    StreamTotals& t = totals[k];
    const std::uint64_t first = k * kStreamSamples;
    const std::uint64_t last = std::min(samples, first + kStreamSamples);
    std::ostringstream log;
    for (std::uint64_t i = first; i < last; ++i) {
      const SampleOutcome o =
          policy.start_mode == StartMode::uniform
              ? sampler.sample(stream)
              : sampler.sample_from(static_cast<Square>(i % squares), stream);
      const double w = o.success ? std::exp(o.log_weight) : 0.0;
      t.weight.add(w);
      t.weight_sq.add(w * w);
      ++t.count;
      if (o.success) ++t.successes;
      if (run.sample_log) {
        log << k << ' ' << i - first << ' ' << (o.success ? 1 : 0) << ' ';
        log.precision(17);
        log << o.log_weight << '\n';
      }
    }
    if (run.sample_log) t.log = log.str();
  };

  const auto workers = static_cast<std::uint64_t>(std::max(run.jobs, 1));
  if (workers == 1 || stream_count == 1) {
    for (std::uint64_t k = 0; k < stream_count; ++k) run_stream(k);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (std::uint64_t w = 0; w < std::min(workers, stream_count); ++w) {
        pool.emplace_back([&] {
          for (std::uint64_t k = next++; k < stream_count; k = next++) {
            try {
              run_stream(k);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
              return;
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  CompensatedSum sum;
  CompensatedSum sum_sq;
  std::uint64_t successes = 0;
  for (const StreamTotals& t : totals) {
    sum.add(t.weight.value());
    sum_sq.add(t.weight_sq.value());
    successes += t.successes;
    if (run.sample_log) *run.sample_log << t.log;
  }

  const double n = static_cast<double>(samples);
  const double mean = sum.value() / n;
  const double variance = std::max(
      0.0, (sum_sq.value() - sum.value() * mean) / (n - 1.0));

  EstimateReport report;
  report.target = EstimateTarget::numberings;
  report.point_estimate = mean;
  report.sample_count = samples;
  report.successes = successes;
  report.sample_variance = variance;
  report.standard_error = std::sqrt(variance / n);
  report.confidence_level = confidence;
  report.z = z;
  std::tie(report.ci_low, report.ci_high) =
      confidence_interval(mean, variance, samples, confidence);
  report.seed = seed;
  report.policy = policy;
  report.stream_size = kStreamSamples;
  return report;
}

EstimateReport derive_geometric_estimate(const EstimateReport& report,
                                         const BoardSpec& board) {
  if (report.target != EstimateTarget::numberings) {
    throw ParameterError("geometric estimate must be derived from an N estimate");
  }
  if (!board.is_square()) {
    throw ParameterError(
        "G = N / 16 uses the eight-element group of a square board");
  }
  constexpr double kOrbit = 16.0;
  EstimateReport g = report;
  g.target = EstimateTarget::geometric_classes;
  g.point_estimate /= kOrbit;
  g.ci_low /= kOrbit;
  g.ci_high /= kOrbit;
  g.standard_error /= kOrbit;
  g.sample_variance /= kOrbit * kOrbit;
  g.assumes_trivial_stabilizers = true;
  return g;
}

}  // namespace ktour
