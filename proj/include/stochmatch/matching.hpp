#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stochmatch/graph.hpp"

namespace stochmatch {

/// A set of pairwise vertex-disjoint edges, stored as ascending edge indices.
class Matching {
 public:
  Matching() = default;
  /// Throws InputError if the edges are not a matching of `g`.
  Matching(const Graph& g, std::vector<EdgeId> edges);

  int size() const { return static_cast<int>(edges_.size()); }
  bool empty() const { return edges_.empty(); }
  const std::vector<EdgeId>& edges() const { return edges_; }
  bool contains(EdgeId e) const;

  /// Skips validation; `sorted_edges` must already be an ascending matching.
  static Matching from_sorted_unchecked(std::vector<EdgeId> sorted_edges) {
    Matching m;
    m.edges_ = std::move(sorted_edges);
    return m;
  }

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<EdgeId> edges_;
};

bool is_matching(const Graph& g, std::span<const EdgeId> edges);

/// Maximum-cardinality matching of `g` (Edmonds' blossom algorithm).
/// Deterministic: greedy start in edge-index order, then augmenting searches
/// from free vertices in ascending order, scanning edges in ascending order.
Matching max_matching(const Graph& g);

/// Maximum matching of the subgraph (V, edge_subset). `seed` must be a
/// matching contained in `edge_subset`; the search grows it instead of
/// starting from scratch, so the result keeps every vertex `seed` covers
/// matched.
Matching max_matching(const Graph& g, std::span<const EdgeId> edge_subset,
                      std::span<const EdgeId> seed = {});

/// As above, with the subgraph given as a per-edge mask.
Matching max_matching_masked(const Graph& g, std::span<const std::uint8_t> allowed,
                             std::span<const EdgeId> seed = {});

/// Exhaustive maximum matching for graphs with at most 24 edges. Test oracle,
/// independent of the blossom search. Throws InstanceTooLarge above the cap.
Matching max_matching_oracle(const Graph& g);
inline constexpr int kMatchingOracleEdgeCap = 24;

enum class AltKind { AugmentingPath, AlternatingPath, AlternatingCycle };

/// One connected component of a symmetric difference M1 (+) M2.
/// `AugmentingPath` means the component augments the first matching: odd
/// length with both end edges in the second matching.
struct AltPath {
  std::vector<VertexId> vertices;  // for cycles the first vertex is not repeated
  std::vector<EdgeId> edges;
  AltKind kind = AltKind::AlternatingPath;

  int length() const { return static_cast<int>(edges.size()); }
};

/// Components of (M1 u M2) \ (M1 n M2), ordered by their smallest vertex.
std::vector<AltPath> symmetric_difference(const Matching& m1, const Matching& m2, const Graph& g);

/// Every augmenting path of `m1` inside m1 (+) m2 with at most `max_length`
/// edges. `max_length` must be odd and >= 1.
std::vector<AltPath> short_augmenting_paths(const Matching& m1, const Matching& m2,
                                            const Graph& g, int max_length);

/// Flips `paths` (augmenting paths of `m`, vertex-disjoint) into `m`.
Matching apply_augmenting_paths(const Matching& m, std::span<const AltPath> paths, const Graph& g);

}  // namespace stochmatch
