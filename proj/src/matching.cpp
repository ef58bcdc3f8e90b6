#include "stochmatch/matching.hpp"

#include <algorithm>
#include <functional>

namespace stochmatch {

Matching::Matching(const Graph& g, std::vector<EdgeId> edges) : edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  if (!is_matching(g, edges_)) throw InputError("edge set is not a matching");
}

bool Matching::contains(EdgeId e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

bool is_matching(const Graph& g, std::span<const EdgeId> edges) {
  std::vector<std::uint8_t> covered(g.num_vertices(), 0);
  std::vector<EdgeId> sorted(edges.begin(), edges.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (EdgeId e : sorted) {
    if (e < 0 || e >= g.num_edges()) return false;
    for (VertexId v : g.endpoints(e)) {
      if (covered[v]) return false;
      covered[v] = 1;
    }
  }
  return true;
}

namespace {

// Edmonds' blossom search over a subgraph given as an ascending edge list.
// Bases are tracked per vertex; only vertices touched by the current search
// are reset. A failed search deletes its Hungarian tree: none of its vertices
// can lie on an augmenting path for any later matching of this run.
class BlossomSearch {
 public:
  BlossomSearch(const Graph& g, std::span<const EdgeId> edge_list)
      : n_(g.num_vertices()),
        offsets_(n_ + 1, 0),
        mate_(n_, -1),
        mate_edge_(n_, -1),
        parent_(n_, -1),
        parent_edge_(n_, -1),
        base_(n_),
        even_(n_, 0),
        in_tree_(n_, 0),
        dead_(n_, 0),
        lca_mark_(n_, 0),
        blossom_mark_(n_, 0) {
    for (EdgeId e : edge_list) {
      const auto [u, v] = g.endpoints(e);
      ++offsets_[u + 1];
      ++offsets_[v + 1];
    }
    for (int v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
    adj_.resize(offsets_[n_]);
    std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId e : edge_list) {
      const auto [u, v] = g.endpoints(e);
      adj_[cursor[u]++] = {v, e};
      adj_[cursor[v]++] = {u, e};
    }
    for (int v = 0; v < n_; ++v) base_[v] = v;
    queue_.reserve(n_);
  }

  void seed(const Graph& g, std::span<const EdgeId> edges) {
    for (EdgeId e : edges) {
      const auto [u, v] = g.endpoints(e);
      if (mate_[u] != -1 || mate_[v] != -1) throw InputError("max_matching: seed is not a matching");
      match(u, v, e);
    }
  }

  void greedy(const Graph& g, std::span<const EdgeId> edge_list) {
    for (EdgeId e : edge_list) {
      const auto [u, v] = g.endpoints(e);
      if (mate_[u] == -1 && mate_[v] == -1) match(u, v, e);
    }
  }

  void augment_all() {
    for (int root = 0; root < n_; ++root) {
      if (mate_[root] != -1 || dead_[root] || offsets_[root] == offsets_[root + 1]) continue;
      const int end = find_path(root);
      if (end != -1) {
        augment(end);
      } else {
        for (int v : touched_) dead_[v] = 1;
      }
      reset_tree();
    }
  }

  std::vector<EdgeId> result() const {
    std::vector<EdgeId> out;
    for (int v = 0; v < n_; ++v) {
      if (mate_[v] > v) out.push_back(mate_edge_[v]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void match(int u, int v, EdgeId e) {
    mate_[u] = v;
    mate_[v] = u;
    mate_edge_[u] = mate_edge_[v] = e;
  }

  void touch(int v) {
    if (!in_tree_[v]) {
      in_tree_[v] = 1;
      touched_.push_back(v);
    }
  }

  void reset_tree() {
    for (int v : touched_) {
      in_tree_[v] = 0;
      even_[v] = 0;
      parent_[v] = -1;
      parent_edge_[v] = -1;
      base_[v] = v;
    }
    touched_.clear();
    queue_.clear();
  }

  int lca(int a, int b) {
    ++lca_clock_;
    for (;;) {
      a = base_[a];
      lca_mark_[a] = lca_clock_;
      if (mate_[a] == -1) break;
      a = parent_[mate_[a]];
    }
    for (;;) {
      b = base_[b];
      if (lca_mark_[b] == lca_clock_) return b;
      b = parent_[mate_[b]];
    }
  }

  void mark_path(int v, int b, int child, EdgeId child_edge) {
    while (base_[v] != b) {
      blossom_mark_[base_[v]] = blossom_clock_;
      blossom_mark_[base_[mate_[v]]] = blossom_clock_;
      const int next_child = mate_[v];
      const EdgeId next_edge = parent_edge_[next_child];
      parent_[v] = child;
      parent_edge_[v] = child_edge;
      child = next_child;
      child_edge = next_edge;
      v = parent_[next_child];
    }
  }

  int find_path(int root) {
    touch(root);
    even_[root] = 1;
    queue_.push_back(root);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const int v = queue_[head];
      for (int i = offsets_[v]; i < offsets_[v + 1]; ++i) {
        const auto [to, e] = adj_[i];
        if (dead_[to] || base_[v] == base_[to] || mate_[v] == to) continue;
        if (to == root || (mate_[to] != -1 && parent_[mate_[to]] != -1)) {
          const int cur_base = lca(v, to);
          ++blossom_clock_;
          mark_path(v, cur_base, to, e);
          mark_path(to, cur_base, v, e);
          const std::size_t count = touched_.size();
          for (std::size_t k = 0; k < count; ++k) {
            const int u = touched_[k];
            if (blossom_mark_[base_[u]] == blossom_clock_) {
              base_[u] = cur_base;
              if (!even_[u]) {
                even_[u] = 1;
                queue_.push_back(u);
              }
            }
          }
        } else if (parent_[to] == -1) {
          parent_[to] = v;
          parent_edge_[to] = e;
          touch(to);
          if (mate_[to] == -1) return to;
          const int next = mate_[to];
          touch(next);
          even_[next] = 1;
          queue_.push_back(next);
        }
      }
    }
    return -1;
  }

  void augment(int v) {
    while (v != -1) {
      const int pv = parent_[v];
      const EdgeId e = parent_edge_[v];
      const int ppv = mate_[pv];
      match(v, pv, e);
      v = ppv;
    }
  }

  int n_;
  std::vector<int> offsets_;
  std::vector<Incidence> adj_;
  std::vector<int> mate_, mate_edge_, parent_, parent_edge_, base_;
  std::vector<std::uint8_t> even_, in_tree_, dead_;
  std::vector<unsigned> lca_mark_, blossom_mark_;
  unsigned lca_clock_ = 0, blossom_clock_ = 0;
  std::vector<int> touched_;
  std::vector<int> queue_;
};

Matching solve(const Graph& g, std::span<const EdgeId> edge_list, std::span<const EdgeId> seed) {
  BlossomSearch search(g, edge_list);
  search.seed(g, seed);
  search.greedy(g, edge_list);
  search.augment_all();
  return Matching::from_sorted_unchecked(search.result());
}

}  // namespace

Matching max_matching(const Graph& g) {
  std::vector<EdgeId> all(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) all[e] = e;
  return solve(g, all, {});
}

Matching max_matching(const Graph& g, std::span<const EdgeId> edge_subset, std::span<const EdgeId> seed) {
  if (std::is_sorted(edge_subset.begin(), edge_subset.end())) return solve(g, edge_subset, seed);
  std::vector<EdgeId> sorted(edge_subset.begin(), edge_subset.end());
  std::sort(sorted.begin(), sorted.end());
  return solve(g, sorted, seed);
}

Matching max_matching_masked(const Graph& g, std::span<const std::uint8_t> allowed,
                             std::span<const EdgeId> seed) {
  std::vector<EdgeId> subset;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (allowed[e]) subset.push_back(e);
  }
  return solve(g, subset, seed);
}

Matching max_matching_oracle(const Graph& g) {
  const int m = g.num_edges();
  if (m > kMatchingOracleEdgeCap) {
    throw InstanceTooLarge("max_matching_oracle: " + std::to_string(m) + " edges exceeds cap of " +
                           std::to_string(kMatchingOracleEdgeCap));
  }
  std::vector<std::uint8_t> used(g.num_vertices(), 0);
  std::vector<EdgeId> current, best;
  std::function<void(int)> branch = [&](int next) {
    if (current.size() > best.size()) best = current;
    if (static_cast<int>(current.size()) + (m - next) <= static_cast<int>(best.size())) return;
    for (EdgeId e = next; e < m; ++e) {
      const auto [u, v] = g.endpoints(e);
      if (used[u] || used[v]) continue;
      used[u] = used[v] = 1;
      current.push_back(e);
      branch(e + 1);
      current.pop_back();
      used[u] = used[v] = 0;
    }
  };
  branch(0);
  return Matching::from_sorted_unchecked(best);
}

std::vector<AltPath> symmetric_difference(const Matching& m1, const Matching& m2, const Graph& g) {
  const int m = g.num_edges();
  std::vector<std::uint8_t> side(m, 0);  // bit 0: in m1, bit 1: in m2
  for (EdgeId e : m1.edges()) side[e] |= 1;
  for (EdgeId e : m2.edges()) side[e] |= 2;

  // Each vertex has at most one incident edge from each matching.
  std::vector<std::array<EdgeId, 2>> inc(g.num_vertices(), {-1, -1});
  std::vector<EdgeId> diff;
  auto add = [&](const Matching& mm) {
    for (EdgeId e : mm.edges()) {
      if (side[e] == 3) continue;
      diff.push_back(e);
      for (VertexId v : g.endpoints(e)) {
        auto& slot = inc[v];
        (slot[0] == -1 ? slot[0] : slot[1]) = e;
      }
    }
  };
  add(m1);
  add(m2);

  std::vector<std::uint8_t> seen(m, 0);
  std::vector<AltPath> out;
  auto walk = [&](VertexId start, EdgeId first) {
    AltPath path;
    VertexId v = start;
    EdgeId e = first;
    path.vertices.push_back(v);
    while (e != -1 && !seen[e]) {
      seen[e] = 1;
      path.edges.push_back(e);
      v = g.other(e, v);
      const auto& slot = inc[v];
      const EdgeId next = slot[0] == e ? slot[1] : slot[0];
      if (next != -1 && seen[next]) break;  // closed a cycle
      path.vertices.push_back(v);
      e = next;
    }
    return path;
  };

  std::vector<VertexId> vertices;
  for (EdgeId e : diff) {
    for (VertexId v : g.endpoints(e)) vertices.push_back(v);
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

  // Paths first (start at their smaller endpoint), then cycles.
  for (VertexId v : vertices) {
    const auto& slot = inc[v];
    if (slot[1] != -1 || seen[slot[0]]) continue;
    AltPath path = walk(v, slot[0]);
    const bool odd = path.length() % 2 == 1;
    path.kind = (odd && (side[path.edges.front()] & 2)) ? AltKind::AugmentingPath : AltKind::AlternatingPath;
    out.push_back(std::move(path));
  }
  for (VertexId v : vertices) {
    const auto& slot = inc[v];
    if (slot[1] == -1 || seen[slot[0]]) continue;
    AltPath cycle = walk(v, std::min(slot[0], slot[1]));
    cycle.kind = AltKind::AlternatingCycle;
    out.push_back(std::move(cycle));
  }
  std::stable_sort(out.begin(), out.end(), [](const AltPath& a, const AltPath& b) {
    return *std::min_element(a.vertices.begin(), a.vertices.end()) <
           *std::min_element(b.vertices.begin(), b.vertices.end());
  });
  return out;
}

std::vector<AltPath> short_augmenting_paths(const Matching& m1, const Matching& m2, const Graph& g,
                                            int max_length) {
  if (max_length < 1 || max_length % 2 == 0) {
    throw InputError("short_augmenting_paths: length bound must be odd and >= 1, got " +
                     std::to_string(max_length));
  }
  std::vector<AltPath> out;
  for (auto& c : symmetric_difference(m1, m2, g)) {
    if (c.kind == AltKind::AugmentingPath && c.length() <= max_length) out.push_back(std::move(c));
  }
  return out;
}

Matching apply_augmenting_paths(const Matching& m, std::span<const AltPath> paths, const Graph& g) {
  std::vector<std::uint8_t> in(g.num_edges(), 0);
  for (EdgeId e : m.edges()) in[e] = 1;
  for (const AltPath& p : paths) {
    if (p.kind != AltKind::AugmentingPath) throw InputError("apply_augmenting_paths: not an augmenting path");
    for (EdgeId e : p.edges) in[e] ^= 1;
  }
  std::vector<EdgeId> edges;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (in[e]) edges.push_back(e);
  }
  return Matching(g, std::move(edges));
}

}  // namespace stochmatch
