#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stochmatch/generators.hpp"
#include "stochmatch/kset.hpp"
#include "stochmatch/stochastic.hpp"

namespace stochmatch {

enum class OmniMode { Auto, Exact, MonteCarlo };

/// Expected optimum E[|M(E_p)|] (or E[opt(A_p)]).
struct OmniscientEstimate {
  double mean = 0;
  double se = 0;
  int trials = 0;
  OmniMode mode = OmniMode::Exact;  // Exact or MonteCarlo after resolution
};

/// Auto picks exact enumeration up to this many edges / sets.
inline constexpr int kAutoExactCap = 16;

/// Exact mode enumerates all realizations (at most 20 items, else
/// InstanceTooLarge). Monte Carlo uses realization seeds base_seed ^ t.
OmniscientEstimate omniscient_matching(const Graph& g, const ProbModel& model, OmniMode mode, int trials = 0,
                                       std::uint64_t base_seed = 0, int threads = 1);
/// As above for set packing; Monte Carlo solves each realization exactly with
/// packing_oracle while it has at most 24 surviving sets and by
/// local_search_packing(s = 4) beyond that.
OmniscientEstimate omniscient_kset(const KSetInstance& inst, const ProbModel& model, OmniMode mode, int trials = 0,
                                   std::uint64_t base_seed = 0, int threads = 1);

/// Exact-or-local-search optimum of the sets marked in `exists`.
std::vector<SetId> realized_optimum(const KSetInstance& inst, std::span<const std::uint8_t> exists);

struct AlgorithmSpec {
  /// adaptive | nonadaptive | nonadaptive-adversarial | naive-random |
  /// naive-scheduled | single-matching | query-all | adaptive-kset | nonadaptive-kset
  std::string id;
  int rounds = 1;     // R
  int budget = 0;     // b for naive-random
  int s = 3;          // structure size for the k-set algorithms
  std::optional<int> max_path_length{};
};

/// Throws InputError for unknown ids or invalid parameters.
void validate_algorithm(const AlgorithmSpec& spec);
bool is_kset_algorithm(const std::string& id);

struct EvalConfig {
  int trials = 1000;
  std::uint64_t base_seed = 1;
  int threads = 1;
  OmniMode omni = OmniMode::Auto;
};

/// Ratio of means with a 95% normal-approximation half-width.
struct RatioRecord {
  std::string family;
  std::string params;
  std::string algorithm;
  int rounds = 0;
  std::string p_or_f;
  int trials = 0;
  double alg_mean = 0;
  double alg_se = 0;
  double omni_mean = 0;
  double omni_se = 0;
  double ratio = 0;
  double ci = 0;
  OmniMode omni_mode = OmniMode::Exact;
  int max_load = 0;         // largest per-vertex (per-element) query count over all trials
  bool above_one = false;   // ratio > 1, only possible through sampling noise
};

/// Runs `trials` paired (realization, algorithm) executions; trial t uses
/// realization seed base_seed ^ t and compares against the omniscient optimum
/// of the same realization (Monte Carlo) or the exact expectation.
RatioRecord evaluate(const AlgorithmSpec& spec, const GeneratedGraph& gg, const ProbModel& model,
                     const EvalConfig& config);
RatioRecord evaluate_kset(const AlgorithmSpec& spec, const KSetInstance& inst, const ProbModel& model,
                          const EvalConfig& config, const std::string& family = "kset",
                          const std::string& params = "");

/// Runs one algorithm once against `oracle` (graph algorithms only).
RunReport run_matching_algorithm(const AlgorithmSpec& spec, const GeneratedGraph& gg, QueryOracle& oracle,
                                 std::uint64_t seed);

/// Sample statistics for paired per-trial values.
struct PairedStats {
  double mean_a = 0, se_a = 0, mean_o = 0, se_o = 0, ratio = 0, ci = 0;
};
/// Delta-method ratio CI for paired samples; with `exact_o` the second
/// sample is replaced by that constant.
PairedStats paired_ratio(std::span<const double> a, std::span<const double> o,
                         std::optional<double> exact_o = std::nullopt);

std::string csv_header();
std::string csv_row(const RatioRecord& r);
std::string mode_name(OmniMode mode);
std::string format_number(double x);

/// Calls fn(i) for i in [0, n) on `threads` workers; fn must only write to
/// per-index storage so that results do not depend on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace stochmatch
