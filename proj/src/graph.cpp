#include "stochmatch/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace stochmatch {

Graph::Graph(int num_vertices, std::vector<std::array<VertexId, 2>> edges)
    : n_(num_vertices), edges_(std::move(edges)) {
  if (n_ < 0) throw InputError("graph: negative vertex count");
  std::vector<int> degree(n_, 0);
  for (auto& e : edges_) {
    if (e[0] < 0 || e[1] < 0 || e[0] >= n_ || e[1] >= n_) {
      throw InputError("graph: edge endpoint out of range");
    }
    if (e[0] == e[1]) throw InputError("graph: self-loop at vertex " + std::to_string(e[0]));
    if (e[0] > e[1]) std::swap(e[0], e[1]);
    ++degree[e[0]];
    ++degree[e[1]];
  }

  std::vector<std::uint64_t> keys;
  keys.reserve(edges_.size());
  for (const auto& e : edges_) {
    keys.push_back((static_cast<std::uint64_t>(e[0]) << 32) | static_cast<std::uint32_t>(e[1]));
  }
  std::sort(keys.begin(), keys.end());
  if (auto it = std::adjacent_find(keys.begin(), keys.end()); it != keys.end()) {
    throw InputError("graph: duplicate edge " + std::to_string(*it >> 32) + "-" +
                     std::to_string(*it & 0xffffffffu));
  }

  offsets_.assign(n_ + 1, 0);
  for (int v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  incidences_.resize(offsets_[n_]);
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId e = 0; e < num_edges(); ++e) {
    const auto [u, v] = edges_[e];
    incidences_[cursor[u]++] = {v, e};
    incidences_[cursor[v]++] = {u, e};
  }
}

int Graph::max_degree() const {
  int best = 0;
  for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

Graph read_graph(std::istream& in) {
  std::string line;
  if (!next_data_line(in, line)) throw InputError("graph file: missing header `n m`");
  std::istringstream header(line);
  long long n = -1, m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) throw InputError("graph file: bad header `" + line + "`");
  std::vector<std::array<VertexId, 2>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_data_line(in, line)) throw InputError("graph file: expected " + std::to_string(m) + " edges");
    std::istringstream row(line);
    long long u = -1, v = -1;
    if (!(row >> u >> v)) throw InputError("graph file: bad edge line `" + line + "`");
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
  }
  return Graph(static_cast<int>(n), std::move(edges));
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e[0] << ' ' << e[1] << '\n';
}

}  // namespace stochmatch
