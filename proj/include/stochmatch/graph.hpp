#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stochmatch {

using VertexId = int;
using EdgeId = int;

/// Raised when an input (file, parameter, instance) violates a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by exhaustive routines when an instance exceeds their size cap.
class InstanceTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Incidence {
  VertexId neighbor;
  EdgeId edge;
};

/// Undirected simple graph. Edge indices are the canonical identity of edges:
/// probabilities, realizations and queries are all keyed by them.
/// Immutable after construction.
class Graph {
 public:
  Graph() = default;
  /// Endpoints are stored with the smaller vertex first. Throws InputError on
  /// loops, duplicates or out-of-range endpoints.
  Graph(int num_vertices, std::vector<std::array<VertexId, 2>> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::array<VertexId, 2>& endpoints(EdgeId e) const { return edges_[e]; }
  std::span<const VertexId> endpoint_span(EdgeId e) const { return edges_[e]; }
  VertexId other(EdgeId e, VertexId v) const {
    return edges_[e][0] == v ? edges_[e][1] : edges_[e][0];
  }

  /// Incident edges of `v` in ascending edge-index order.
  std::span<const Incidence> incident(VertexId v) const {
    return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
  }
  int degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  int max_degree() const;

  const std::vector<std::array<VertexId, 2>>& edges() const { return edges_; }

 private:
  int n_ = 0;
  std::vector<std::array<VertexId, 2>> edges_;
  std::vector<int> offsets_{0};
  std::vector<Incidence> incidences_;
};

/// Text format: first non-comment line `n m`, then m lines `u v` (0-based).
/// Lines starting with '#' are ignored.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);

/// Reads the next non-empty line that does not start with '#'. Returns false at EOF.
bool next_data_line(std::istream& in, std::string& line);

}  // namespace stochmatch
