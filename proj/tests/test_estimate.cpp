#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "ktour/error.hpp"
#include "ktour/estimate.hpp"
#include "oracle/brute_force.hpp"

using namespace ktour;

namespace {

// Probability of `path` under the degree-biased policy, recomputed from
// scratch with the oracle's adjacency.
double replay_probability(int rows, int cols, const std::vector<int>& path,
                          double alpha, double epsilon,
                          std::vector<double>* steps = nullptr) {
  const oracle::BruteForce brute(rows, cols);
  const int n = rows * cols;
  std::vector<bool> used(n, false);
  used[path[0]] = true;
  double p = 1.0 / n;
  for (std::size_t i = 1; i < path.size(); ++i) {
    double total = 0.0;
    double chosen = 0.0;
    for (int m = 0; m < n; ++m) {
      if (used[m] || !brute.adjacent(path[i - 1], m)) continue;
      int onward = 0;
      for (int k = 0; k < n; ++k) {
        if (!used[k] && k != m && brute.adjacent(m, k)) ++onward;
      }
      const double w = std::pow(onward + epsilon, -alpha);
      total += w;
      if (m == path[i]) chosen = w;
    }
    if (steps) steps->push_back(chosen / total);
    p *= chosen / total;
    used[path[i]] = true;
  }
  return p;
}

}  // namespace

TEST_CASE("counter stream is deterministic and stream-separated") {
  CounterStream a(42, 0);
  CounterStream b(42, 0);
  CounterStream c(42, 1);
  CounterStream d(43, 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    seen.insert(x);
    seen.insert(c());
    seen.insert(d());
  }
  CHECK(seen.size() == 3000);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("3x3 sampling never succeeds") {
  CounterStream s(1, 0);
  const PathSampler sampler(make_board(3, 3), {});
  for (int i = 0; i < 1000; ++i) {
    const SampleOutcome o = sampler.sample(s);
    CHECK_FALSE(o.success);
    CHECK(o.steps_reached < 9);
  }
}

TEST_CASE("alpha = 0 is uniform over admissible moves") {
  const SamplePolicy uniform{0.0, 1.0};
  const PathSampler sampler(make_board(5, 5), uniform);
  for (int d = 0; d <= 8; ++d) CHECK(sampler.move_weight(d) == 1.0);
}

TEST_CASE("log-weight equals the replayed inverse path probability") {
  for (double alpha : {0.0, 1.0, 2.0, 3.5}) {
    CAPTURE(alpha);
    const SamplePolicy policy{alpha, 1.0};
    const PathSampler sampler(make_board(5, 5), policy);
    CounterStream s(99, 0);
    int successes = 0;
    for (int i = 0; i < 200000 && successes < 25; ++i) {
      const SampleOutcome o = sampler.sample(s);
      if (!o.success) continue;
      ++successes;
      CHECK(o.steps_reached == 25);
      CHECK(std::isfinite(o.log_weight));
      const std::vector<int> path(o.path.begin(), o.path.end());
      const double p = replay_probability(5, 5, path, alpha, 1.0);
      CHECK(std::exp(o.log_weight) == doctest::Approx(1.0 / p).epsilon(1e-9));
    }
    CHECK(successes == 25);
  }
}

TEST_CASE("every 5x5 tour has positive probability at every step") {
  const auto tours = oracle::BruteForce(5, 5).all_numberings();
  REQUIRE(tours.size() == 1728);
  for (const auto& t : tours) {
    std::vector<double> steps;
    replay_probability(5, 5, t, 2.0, 1.0, &steps);
    for (double p : steps) CHECK(p > 0.0);
  }
}

TEST_CASE("no tours means a zero estimate") {
  const EstimateReport r =
      estimate_numberings(make_board(4, 4), 20000, {}, 0.99, 5);
  CHECK(r.point_estimate == 0.0);
  CHECK(r.sample_variance == 0.0);
  CHECK(r.successes == 0);
  CHECK(r.ci_low == 0.0);
  CHECK(r.ci_high == 0.0);
}

TEST_CASE("estimate report invariants and determinism across workers") {
  const BoardSpec board = make_board(5, 5);
  std::ostringstream log1;
  std::ostringstream log4;
  const EstimateReport one =
      estimate_numberings(board, 50000, {}, 0.99, 11, {1, &log1});
  const EstimateReport four =
      estimate_numberings(board, 50000, {}, 0.99, 11, {4, &log4});
  CHECK(one == four);
  CHECK(log1.str() == log4.str());
  const std::string text = log1.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 50000);
  CHECK(one.ci_low <= one.point_estimate);
  CHECK(one.point_estimate <= one.ci_high);
  CHECK(one.sample_variance >= 0.0);
  CHECK(one.generator == "splitmix64-counter/1");
  CHECK(one.stream_size == kStreamSamples);

  const EstimateReport other = estimate_numberings(board, 50000, {}, 0.99, 12);
  CHECK(other.point_estimate != one.point_estimate);
}

TEST_CASE("stratified starts") {
  const BoardSpec board = make_board(5, 5);
  SamplePolicy policy;
  policy.start_mode = StartMode::stratified;
  CHECK_THROWS_AS(estimate_numberings(board, 1001, policy, 0.99, 1), ParameterError);
  const EstimateReport r = estimate_numberings(board, 250000, policy, 0.99, 3);
  CHECK(r.ci_low <= 1728.0);
  CHECK(1728.0 <= r.ci_high);
}

TEST_CASE("parameter errors") {
  const BoardSpec board = make_board(5, 5);
  CHECK_THROWS_AS(estimate_numberings(board, 1, {}, 0.99, 1), ParameterError);
  CHECK_THROWS_AS(estimate_numberings(board, 100, {}, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(estimate_numberings(board, 100, {}, 1.0, 1), ParameterError);
  CHECK_THROWS_AS(estimate_numberings(board, 100, {-1.0, 1.0}, 0.9, 1), ParameterError);
  CHECK_THROWS_AS(estimate_numberings(board, 100, {2.0, 0.0}, 0.9, 1), ParameterError);
  CHECK_THROWS_AS(estimate_numberings(make_board(1, 1), 100, {}, 0.9, 1),
                  InvalidBoardError);
}

TEST_CASE("normal quantiles match the standard table") {
  CHECK(normal_quantile(0.90) == doctest::Approx(1.644854).epsilon(1e-6));
  CHECK(normal_quantile(0.95) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(normal_quantile(0.99) == doctest::Approx(2.575829).epsilon(1e-6));
}

TEST_CASE("confidence_interval") {
  auto [lo0, hi0] = confidence_interval(5.0, 0.0, 10, 0.99);
  CHECK(lo0 == 5.0);
  CHECK(hi0 == 5.0);

  auto [lo, hi] = confidence_interval(0.0, 1.0, 10000, 0.99);
  CHECK(hi == doctest::Approx(0.025758).epsilon(1e-4 / 2.5758));
  CHECK(lo == -hi);

  double last = 0.0;
  for (double c : {0.5, 0.8, 0.9, 0.95, 0.99, 0.999}) {
    const double width = confidence_interval(0.0, 1.0, 100, c).second;
    CHECK(width > last);
    last = width;
  }
  CHECK_THROWS_AS(confidence_interval(0.0, 1.0, 1, 0.99), ParameterError);
  CHECK_THROWS_AS(confidence_interval(0.0, -1.0, 10, 0.99), ParameterError);
  CHECK_THROWS_AS(confidence_interval(0.0, 1.0, 10, 1.5), ParameterError);
}

TEST_CASE("derive_geometric_estimate divides by sixteen") {
  EstimateReport n;
  n.point_estimate = 1.959e16;
  n.ci_low = 1.9e16;
  n.ci_high = 2.0e16;
  n.standard_error = 1.6e14;
  n.sample_variance = 4.0;
  const EstimateReport g = derive_geometric_estimate(n, make_board(8, 8));
  CHECK(g.target == EstimateTarget::geometric_classes);
  CHECK(g.point_estimate == doctest::Approx(1.224375e15));
  CHECK(g.ci_low == n.ci_low / 16);
  CHECK(g.ci_high == n.ci_high / 16);
  CHECK(g.sample_variance == 4.0 / 256);
  CHECK(g.assumes_trivial_stabilizers);

  EstimateReport zero;
  CHECK(derive_geometric_estimate(zero, make_board(5, 5)).point_estimate == 0.0);

  CHECK_THROWS_AS(derive_geometric_estimate(n, make_board(5, 6)), ParameterError);
  CHECK_THROWS_AS(derive_geometric_estimate(g, make_board(8, 8)), ParameterError);
}
