#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stochmatch/graph.hpp"

namespace stochmatch {

class KSetInstance;

struct UniformProb {
  double p;
};
struct PerItemProb {
  std::vector<double> p;
};
/// Vertex parameters p_i; edge (i, j) exists with probability p_i * p_j.
struct VertexParamProb {
  std::vector<double> p;
};

/// Existence probability assignment for the items (edges or sets) of an instance.
class ProbModel {
 public:
  using Variant = std::variant<UniformProb, PerItemProb, VertexParamProb>;

  static ProbModel uniform(double p);
  static ProbModel per_item(std::vector<double> p);
  static ProbModel vertex_params(std::vector<double> p);

  const Variant& variant() const { return v_; }
  bool is_uniform() const { return std::holds_alternative<UniformProb>(v_); }
  bool is_vertex_params() const { return std::holds_alternative<VertexParamProb>(v_); }

  /// Throws InputError if vector lengths do not fit the graph.
  void check_compatible(const Graph& g) const;
  /// Item-level models only (VertexParams needs a graph); throws otherwise.
  void check_compatible(int item_count) const;
  double item_prob(int item) const;

  /// Human-readable summary used in CSV rows, e.g. `uniform:0.5`.
  std::string describe() const;

 private:
  explicit ProbModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Uniform -> p, PerItem -> p_e, VertexParams -> p_u * p_v.
double edge_prob(const ProbModel& model, const Graph& g, EdgeId e);
double min_edge_prob(const ProbModel& model, const Graph& g);

/// Bitset over item indices: which edges (sets) exist.
class Realization {
 public:
  Realization() = default;
  explicit Realization(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  int size() const { return static_cast<int>(bits_.size()); }
  bool exists(int item) const { return bits_[item] != 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  int count() const;
  std::vector<int> existing() const;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Each edge included independently with edge_prob; a pure function of
/// (model, g, seed).
Realization sample_realization(const ProbModel& model, const Graph& g, std::uint64_t seed);
Realization sample_realization(const ProbModel& model, int item_count, std::uint64_t seed);

/// Hides a realization and answers existence queries. Repeated queries of an
/// item are free; loads count distinct queried items per vertex (element).
class QueryOracle {
 public:
  enum class Knowledge : std::uint8_t { Unknown, Exists, Missing };

  QueryOracle(const Graph& g, Realization hidden);
  QueryOracle(const KSetInstance& inst, Realization hidden);

  bool query(int item);
  Knowledge known(int item) const { return state_[item]; }
  bool was_queried(int item) const { return state_[item] != Knowledge::Unknown; }

  int item_count() const { return static_cast<int>(state_.size()); }
  int distinct_queries() const { return static_cast<int>(log_.size()); }
  /// Items in the order they were first queried.
  const std::vector<int>& query_log() const { return log_; }

  int load(int member) const { return load_[member]; }
  int max_load() const;
  const std::vector<int>& loads() const { return load_; }

  /// Ground truth, for evaluation code only (never read by algorithms).
  const Realization& hidden() const { return hidden_; }

 private:
  std::span<const int> members(int item) const;

  const Graph* graph_ = nullptr;
  const KSetInstance* sets_ = nullptr;
  Realization hidden_;
  std::vector<Knowledge> state_;
  std::vector<int> log_;
  std::vector<int> load_;
};

// ---------------------------------------------------------------------------
// Vertex-parameter (correlated) model metrics.

struct Uniform01 {};
struct ConstantParam {
  double c;
};
struct TwoPointParam {
  double lo, hi, frac_lo;
};
using VertexParamDist = std::variant<Uniform01, ConstantParam, TwoPointParam>;

/// n independent draws from `dist`; deterministic per seed.
ProbModel sample_vertex_params(int n, const VertexParamDist& dist, std::uint64_t seed);

/// Number of vertices with p_i < delta. Throws InputError for other variants.
int f_delta(const ProbModel& model, double delta);
/// Pr[p_i < delta] for p_i drawn from `dist`.
double g_delta(const VertexParamDist& dist, double delta);

/// Parses `uniform:P`.
ProbModel parse_uniform_spec(const std::string& spec);
/// Parses `uniform01`, `const:C` or `twopoint:LO,HI,FRAC`.
VertexParamDist parse_vertex_dist(const std::string& spec);

/// Model file: `uniform p` | `peredge` + one probability per item |
/// `vertexparams` + one probability per vertex.
ProbModel read_model(std::istream& in, int item_count, int vertex_count);
void write_model(std::ostream& out, const ProbModel& model);

}  // namespace stochmatch
