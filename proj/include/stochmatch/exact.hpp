#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stochmatch/graph.hpp"

namespace stochmatch {

class KSetInstance;

/// Exhaustive enumeration works on bitmasks over at most this many items.
inline constexpr int kExactItemCap = 20;

/// conflicts[i] has bit j set iff items i and j cannot both be chosen (bit i included).
std::vector<std::uint32_t> conflict_masks(const Graph& g);
std::vector<std::uint32_t> conflict_masks(const KSetInstance& inst);

/// Optimum (largest conflict-free subset) of every item subset T, indexed by T.
std::vector<std::uint8_t> subset_optimum_table(std::span<const std::uint32_t> conflicts);

/// F[X] = E[opt(X intersected with the realization)] for every item subset X,
/// where item i exists independently with probs[i].
std::vector<double> expected_optimum_all_subsets(std::span<const std::uint32_t> conflicts,
                                                 std::span<const double> probs);

/// E[opt] over the full item set.
double expected_optimum(std::span<const std::uint32_t> conflicts, std::span<const double> probs);

}  // namespace stochmatch
