#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stochmatch/graph.hpp"
#include "stochmatch/match_algorithms.hpp"

namespace stochmatch {

/// A generated graph with its labelled vertex classes and generator parameters.
struct GeneratedGraph {
  Graph graph;
  std::string family;
  std::map<std::string, std::vector<VertexId>> classes;
  std::map<std::string, std::string> params;

  /// `key=value;key=value` over params, for CSV and headers.
  std::string describe() const;
};

GeneratedGraph gen_single_edge();
/// n pairwise disjoint edges (2n vertices).
GeneratedGraph gen_disjoint_edges(int n);
GeneratedGraph gen_complete(int n);
GeneratedGraph gen_path(int n);   // n vertices
GeneratedGraph gen_cycle(int n);  // n >= 3
GeneratedGraph gen_star(int leaves);
GeneratedGraph gen_petersen();
/// K_{n,n} with classes U = 0..n-1, V = n..2n-1.
GeneratedGraph gen_complete_bipartite(int n);
/// G(n, d/(n-1)): expected degree d.
GeneratedGraph gen_erdos_renyi(int n, double d, std::uint64_t seed);

/// |A|=|B|=t/2, |C|=|D|=t. A-B and C-D are unions of `degree` random perfect
/// matchings (repeats skipped), B x C is complete. Vertex labels are randomly
/// permuted so that index order carries no structure.
GeneratedGraph gen_example31(int t, int degree, std::uint64_t seed);
/// min(ceil(2 ln(3t) / p), t/2).
int example31_default_degree(int t, double p);

/// |A|=|D|=t/2, |B|=|C|=t, perfect matching b_i - c_i, A x B and C x D complete.
/// Classes B1/B2 and C1/C2 are the halves, with B1[i] matched to C1[i].
GeneratedGraph gen_figure3(int t);
/// Adversarial maximum-matching schedule for gen_figure3 graphs.
MatchingSelector figure3_selector(const GeneratedGraph& fig3);

/// |A|=|D|=floor(t^beta), |B|=|C|=t, perfect B-C matching, A x B and C x D complete.
GeneratedGraph gen_appendix_a(int t, double beta);

/// Builds a named family from `key=value` parameters (t, n, d, beta, degree, seed).
/// Families: single-edge, disjoint, complete, k3, k4, k22, path, p4, cycle, c4,
/// star, petersen, knn, er, example31, figure3, appendixA.
GeneratedGraph make_family(const std::string& family, const std::map<std::string, std::string>& params);

/// Edge index joining u and v, or -1.
EdgeId find_edge(const Graph& g, VertexId u, VertexId v);

}  // namespace stochmatch
