#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stochmatch/graph.hpp"
#include "stochmatch/matching.hpp"
#include "stochmatch/report.hpp"
#include "stochmatch/stochastic.hpp"

namespace stochmatch {

/// Parameters from the (1 - epsilon) analysis of the adaptive algorithm.
struct TheoryParams {
  double epsilon = 0;
  double p_min = 0;
  int path_length = 1;        // L, odd
  std::int64_t rounds = 1;    // R
  double alpha = 0;           // p^((L+1)/2)
  double gamma = 0;           // p^((L+1)/2) * (1 + 2/(L+1))

  /// (alpha/gamma) * (1 - (1 - gamma)^R), the guaranteed fraction.
  double guaranteed_fraction() const;
};

/// L = smallest odd integer >= 4/epsilon - 1, R = ceil(ln(2/epsilon) / p^((L+1)/2)).
/// Requires 0 < epsilon < 1 and 0 < p_min <= 1; throws std::domain_error.
TheoryParams derive_params(double epsilon, double p_min);

struct AdaptiveOptions {
  /// Only query augmenting paths with at most this many edges (ablation; off by default).
  std::optional<int> max_path_length;
};

/// Adaptive algorithm. Each round: O_r = maximum matching on edges not known
/// to be missing; query the unqueried edges of every augmenting path of
/// M_{r-1} in O_r (+) M_{r-1}; M_r = maximum matching on edges known to exist.
RunReport adaptive_match(const Graph& g, QueryOracle& oracle, int rounds, const AdaptiveOptions& options = {});

/// Picks, for round `round` (1-based), a matching of the residual graph
/// given by `residual` (per-edge mask). Must return a maximum matching.
using MatchingSelector =
    std::function<std::vector<EdgeId>(int round, const Graph& g, std::span<const std::uint8_t> residual)>;

/// Union W_R of R successively removed maximum matchings, per round.
struct Selection {
  std::vector<std::vector<EdgeId>> per_round;
  std::vector<EdgeId> edges;  // union, ascending
};

Selection nonadaptive_select(const Graph& g, int rounds);
/// As nonadaptive_select with caller-chosen maximum matchings. Throws
/// InputError if the selector returns anything but a maximum matching of the
/// residual graph.
Selection nonadaptive_select_strategic(const Graph& g, int rounds, const MatchingSelector& selector);

/// Queries every selected edge, returns a maximum matching of the existing ones.
RunReport nonadaptive_match(const Graph& g, QueryOracle& oracle, int rounds);
RunReport nonadaptive_match(const Graph& g, QueryOracle& oracle, const Selection& selection);

/// Each vertex (ascending) picks min(b, degree) random incident edges; the
/// union is queried.
RunReport naive_random(const Graph& g, QueryOracle& oracle, int per_vertex, std::uint64_t seed);

/// Scheduled naive algorithm: each vertex (ascending) schedules up to R
/// queries to uniformly random neighbours that still have fewer than R
/// scheduled queries; its own count is capped at R as well.
RunReport naive_scheduled(const Graph& g, QueryOracle& oracle, int rounds, std::uint64_t seed);

/// Queries a single maximum matching and keeps its existing edges.
RunReport single_matching_baseline(const Graph& g, QueryOracle& oracle);

/// Queries every edge: the omniscient reference.
RunReport query_everything(const Graph& g, QueryOracle& oracle);

}  // namespace stochmatch
