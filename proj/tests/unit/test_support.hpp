#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "stochmatch/graph.hpp"
#include "stochmatch/kset.hpp"
#include "stochmatch/matching.hpp"
#include "stochmatch/rng.hpp"
#include "stochmatch/stochastic.hpp"

namespace testing {

using namespace stochmatch;

inline std::string data_path(const std::string& name) { return std::string(STOCHMATCH_DATA_DIR) + "/" + name; }

struct Bundled {
  std::string name;
  Graph graph;
  ProbModel model = ProbModel::uniform(0.5);
};

/// Graph followed by its model, as written by `stochmatch generate`.
inline Bundled load_bundled(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw InputError("missing bundled instance " + name);
  Bundled b;
  b.name = name;
  b.graph = read_graph(in);
  b.model = read_model(in, b.graph.num_edges(), b.graph.num_vertices());
  return b;
}

inline std::vector<std::string> bundled_names() {
  return {"k3.graph", "k22.graph", "p4.graph", "c4.graph", "k4.graph", "star5.graph", "petersen.graph", "er9.graph"};
}

inline Graph random_graph(Rng& rng, int n, double density, int max_edges = 1 << 30) {
  std::vector<std::array<VertexId, 2>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(density)) edges.push_back({u, v});
  std::shuffle(edges.begin(), edges.end(), rng.engine());
  if (static_cast<int>(edges.size()) > max_edges) edges.resize(max_edges);
  return Graph(n, std::move(edges));
}

/// Greedy matching over a random subset of the edges, in random order.
inline Matching random_matching(Rng& rng, const Graph& g, double keep) {
  std::vector<EdgeId> order(g.num_edges());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng.engine());
  std::vector<char> used(g.num_vertices(), 0);
  std::vector<EdgeId> chosen;
  for (EdgeId e : order) {
    if (!rng.bernoulli(keep)) continue;
    auto [u, v] = g.endpoints(e);
    if (used[u] || used[v]) continue;
    used[u] = used[v] = 1;
    chosen.push_back(e);
  }
  std::sort(chosen.begin(), chosen.end());
  return Matching(g, chosen);
}

inline KSetInstance random_kset(Rng& rng, int universe, int sets, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> elems(universe);
  std::iota(elems.begin(), elems.end(), 0);
  int guard = 0;
  while (static_cast<int>(out.size()) < sets && guard++ < 100 * sets) {
    std::shuffle(elems.begin(), elems.end(), rng.engine());
    int size = 1 + static_cast<int>(rng.below(std::min(k, universe)));
    std::vector<int> s(elems.begin(), elems.begin() + size);
    std::sort(s.begin(), s.end());
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  }
  return KSetInstance(universe, std::move(out), k);
}

/// Brute-force E[max matching] by listing every realization and solving it
/// with the exhaustive matching oracle.
inline double brute_expected_matching(const Graph& g, const ProbModel& model) {
  const int m = g.num_edges();
  double total = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double weight = 1;
    std::vector<std::array<VertexId, 2>> kept;
    for (int e = 0; e < m; ++e) {
      double p = edge_prob(model, g, e);
      if (mask >> e & 1) {
        weight *= p;
        kept.push_back(g.endpoints(e));
      } else {
        weight *= 1 - p;
      }
    }
    if (weight == 0) continue;
    total += weight * max_matching_oracle(Graph(g.num_vertices(), kept)).size();
  }
  return total;
}

/// Largest pairwise-disjoint subfamily of `sets`, by plain recursion.
inline int brute_packing(const KSetInstance& inst, std::vector<SetId> sets) {
  int best = 0;
  std::vector<int> used(inst.universe_size(), 0);
  auto rec = [&](auto&& self, std::size_t i, int count) -> void {
    best = std::max(best, count);
    if (count + static_cast<int>(sets.size() - i) <= best) return;
    for (std::size_t j = i; j < sets.size(); ++j) {
      auto s = inst.set(sets[j]);
      if (std::any_of(s.begin(), s.end(), [&](int x) { return used[x] != 0; })) continue;
      for (int x : s) used[x] = 1;
      self(self, j + 1, count + 1);
      for (int x : s) used[x] = 0;
    }
  };
  rec(rec, 0, 0);
  return best;
}

inline double brute_expected_packing(const KSetInstance& inst, const std::vector<double>& probs) {
  const int m = inst.num_sets();
  double total = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double weight = 1;
    std::vector<SetId> kept;
    for (int i = 0; i < m; ++i) {
      if (mask >> i & 1) {
        weight *= probs[i];
        kept.push_back(i);
      } else {
        weight *= 1 - probs[i];
      }
    }
    if (weight == 0) continue;
    total += weight * brute_packing(inst, kept);
  }
  return total;
}

}  // namespace testing
