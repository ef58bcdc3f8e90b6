#include "stochmatch/exact.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "stochmatch/kset.hpp"

namespace stochmatch {

namespace {

void check_cap(std::size_t items) {
  if (items > static_cast<std::size_t>(kExactItemCap)) {
    throw InstanceTooLarge("exact enumeration supports at most " + std::to_string(kExactItemCap) + " items, got " +
                           std::to_string(items));
  }
}

}  // namespace

std::vector<std::uint32_t> conflict_masks(const Graph& g) {
  check_cap(g.num_edges());
  std::vector<std::uint32_t> out(g.num_edges(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    for (VertexId v : g.endpoints(e)) {
      for (const auto& inc : g.incident(v)) out[e] |= 1u << inc.edge;
    }
  }
  return out;
}

std::vector<std::uint32_t> conflict_masks(const KSetInstance& inst) {
  check_cap(inst.num_sets());
  std::vector<std::uint32_t> out(inst.num_sets(), 0);
  for (SetId a = 0; a < inst.num_sets(); ++a) {
    for (int x : inst.set(a)) {
      for (SetId b : inst.containing(x)) out[a] |= 1u << b;
    }
  }
  return out;
}

std::vector<std::uint8_t> subset_optimum_table(std::span<const std::uint32_t> conflicts) {
  check_cap(conflicts.size());
  const std::uint32_t full = conflicts.size() == 32 ? ~0u : (1u << conflicts.size());
  std::vector<std::uint8_t> best(full, 0);
  for (std::uint32_t t = 1; t < full; ++t) {
    const int i = std::countr_zero(t);
    const std::uint32_t without = t & (t - 1);
    best[t] = std::max<std::uint8_t>(best[without], 1 + best[t & ~conflicts[i]]);
  }
  return best;
}

std::vector<double> expected_optimum_all_subsets(std::span<const std::uint32_t> conflicts,
                                                 std::span<const double> probs) {
  if (conflicts.size() != probs.size()) throw InputError("expected_optimum: conflict/probability size mismatch");
  const auto table = subset_optimum_table(conflicts);
  std::vector<double> f(table.begin(), table.end());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const std::uint32_t bit = 1u << i;
    const double p = probs[i];
    for (std::uint32_t x = 0; x < f.size(); ++x) {
      if (x & bit) f[x] = p * f[x] + (1.0 - p) * f[x ^ bit];
    }
  }
  return f;
}

double expected_optimum(std::span<const std::uint32_t> conflicts, std::span<const double> probs) {
  return expected_optimum_all_subsets(conflicts, probs).back();
}

}  // namespace stochmatch
