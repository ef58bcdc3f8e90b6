#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stochmatch/graph.hpp"
#include "stochmatch/report.hpp"
#include "stochmatch/stochastic.hpp"

namespace stochmatch {

using SetId = int;

/// Universe {0..|U|-1} and a collection of sets, each with at most k elements.
class KSetInstance {
 public:
  KSetInstance() = default;
  /// Sets are sorted on construction. Throws InputError on empty sets,
  /// oversize sets, repeated or out-of-range elements, and repeated sets
  /// (unless `allow_parallel_sets`, used for distinct exchange cycles that
  /// cover the same pairs).
  KSetInstance(int universe_size, std::vector<std::vector<int>> sets, int k,
               bool allow_parallel_sets = false);

  /// Edges of `g` as 2-sets over its vertices (set index == edge index).
  static KSetInstance from_graph(const Graph& g);

  int universe_size() const { return universe_; }
  int num_sets() const { return static_cast<int>(sets_.size()); }
  int k() const { return k_; }
  std::span<const int> set(SetId s) const { return sets_[s]; }
  const std::vector<std::vector<int>>& sets() const { return sets_; }
  /// Sets containing `element`, ascending.
  std::span<const SetId> containing(int element) const {
    return {by_element_.data() + offsets_[element], by_element_.data() + offsets_[element + 1]};
  }
  bool intersects(SetId a, SetId b) const;

 private:
  int universe_ = 0;
  int k_ = 0;
  std::vector<std::vector<int>> sets_;
  std::vector<int> offsets_{0};
  std::vector<SetId> by_element_;
};

bool is_packing(const KSetInstance& inst, std::span<const SetId> sets);

/// (B u C) \ D is a larger packing than B.
struct AugStructure {
  std::vector<SetId> add;     // C
  std::vector<SetId> remove;  // D
};

/// Exhaustive maximum packing; at most 24 sets. Throws InstanceTooLarge.
std::vector<SetId> packing_oracle(const KSetInstance& inst);
inline constexpr int kPackingOracleSetCap = 24;

/// Greedy packing improved by augmenting structures with |C| <= s until none
/// exists. `active` restricts the usable sets; the overload without it uses all.
std::vector<SetId> local_search_packing(const KSetInstance& inst, int s);
std::vector<SetId> local_search_packing(const KSetInstance& inst, int s, std::span<const SetId> active);

/// Disjoint augmenting structures for packing `b` (each of size <= s), found
/// one at a time; every set of a found C and every non-B set meeting it is
/// withdrawn before the next search.
std::vector<AugStructure> find_aug_structures(const KSetInstance& inst, std::span<const SetId> b, int s);
std::vector<AugStructure> find_aug_structures(const KSetInstance& inst, std::span<const SetId> b, int s,
                                              std::span<const SetId> active);

/// Approximation ratio guaranteed by local optima w.r.t. structures of size
/// <= s for k-set packing: s/(s+1) for k = 2, and the Hurkens-Schrijver bound
/// for k >= 3. The matching eta is 2/k minus this value.
double local_search_guarantee(int k, int s);
double local_search_eta(int k, int s);

/// Adaptive query algorithm: per round, query the C-sets of disjoint
/// structures against the current packing and apply the ones whose sets all
/// exist. Sets found missing are dropped from later rounds.
RunReport adaptive_kset(const KSetInstance& inst, QueryOracle& oracle, int rounds, int s);

/// Non-adaptive selection: `rounds` successive local-search packings, each
/// computed after removing the previous ones.
std::vector<std::vector<SetId>> nonadaptive_kset_select(const KSetInstance& inst, int rounds, int s);

/// Queries the first selected packing, then for r = 2..R augments the
/// surviving packing with structures drawn from the r-th packing.
RunReport nonadaptive_kset(const KSetInstance& inst, QueryOracle& oracle, int rounds, int s);
RunReport nonadaptive_kset(const KSetInstance& inst, QueryOracle& oracle,
                           const std::vector<std::vector<SetId>>& selection, int s);

/// Checks E[opt(A)] <= E[opt(A1)] + E[opt(A2)] exactly, where A1 holds the
/// sets with in_first[i] set. At most 20 sets.
bool kset_subadditivity_check(const KSetInstance& inst, const ProbModel& model,
                              const std::vector<bool>& in_first);

/// Instance file: `|U| |A| k`, then one set per line; a trailing token
/// containing '.' is that set's existence probability.
struct KSetFile {
  KSetInstance instance;
  std::vector<double> probs;  // empty when no set carried a probability
};
KSetFile read_kset(std::istream& in);
KSetFile read_kset_file(const std::string& path);
void write_kset(std::ostream& out, const KSetInstance& inst, std::span<const double> probs = {});

}  // namespace stochmatch
