#include "stochmatch/stochastic.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "stochmatch/kset.hpp"
#include "stochmatch/rng.hpp"

namespace stochmatch {

namespace {

void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError(std::string(what) + ": probability " + std::to_string(p) + " outside [0,1]");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double parse_double(const std::string& text, const char* what) {
  double value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw InputError(std::string(what) + ": not a number `" + text + "`");
  return value;
}

}  // namespace

ProbModel ProbModel::uniform(double p) {
  check_prob(p, "uniform model");
  return ProbModel(UniformProb{p});
}

ProbModel ProbModel::per_item(std::vector<double> p) {
  for (double x : p) check_prob(x, "per-item model");
  return ProbModel(PerItemProb{std::move(p)});
}

ProbModel ProbModel::vertex_params(std::vector<double> p) {
  for (double x : p) check_prob(x, "vertex-parameter model");
  return ProbModel(VertexParamProb{std::move(p)});
}

void ProbModel::check_compatible(const Graph& g) const {
  std::visit(Overloaded{
                 [](const UniformProb&) {},
                 [&](const PerItemProb& m) {
                   if (static_cast<int>(m.p.size()) != g.num_edges()) {
                     throw InputError("per-edge model has " + std::to_string(m.p.size()) +
                                      " probabilities for " + std::to_string(g.num_edges()) + " edges");
                   }
                 },
                 [&](const VertexParamProb& m) {
                   if (static_cast<int>(m.p.size()) != g.num_vertices()) {
                     throw InputError("vertex-parameter model has " + std::to_string(m.p.size()) +
                                      " parameters for " + std::to_string(g.num_vertices()) + " vertices");
                   }
                 },
             },
             v_);
}

void ProbModel::check_compatible(int item_count) const {
  if (const auto* m = std::get_if<PerItemProb>(&v_); m && static_cast<int>(m->p.size()) != item_count) {
    throw InputError("per-item model has " + std::to_string(m->p.size()) + " probabilities for " +
                     std::to_string(item_count) + " items");
  }
  if (is_vertex_params()) throw InputError("vertex-parameter model needs a graph");
}

double ProbModel::item_prob(int item) const {
  return std::visit(Overloaded{
                        [](const UniformProb& m) { return m.p; },
                        [&](const PerItemProb& m) { return m.p.at(item); },
                        [](const VertexParamProb&) -> double {
                          throw InputError("vertex-parameter model needs a graph");
                        },
                    },
                    v_);
}

std::string ProbModel::describe() const {
  return std::visit(Overloaded{
                        [](const UniformProb& m) {
                          std::ostringstream os;
                          os << "uniform:" << m.p;
                          return os.str();
                        },
                        [](const PerItemProb& m) { return "peritem:" + std::to_string(m.p.size()); },
                        [](const VertexParamProb& m) { return "vertexparams:" + std::to_string(m.p.size()); },
                    },
                    v_);
}

double edge_prob(const ProbModel& model, const Graph& g, EdgeId e) {
  if (e < 0 || e >= g.num_edges()) throw std::out_of_range("edge_prob: edge index " + std::to_string(e));
  if (const auto* m = std::get_if<VertexParamProb>(&model.variant())) {
    const auto [u, v] = g.endpoints(e);
    return m->p.at(u) * m->p.at(v);
  }
  return model.item_prob(e);
}

double min_edge_prob(const ProbModel& model, const Graph& g) {
  double best = 1.0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) best = std::min(best, edge_prob(model, g, e));
  return best;
}

int Realization::count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<int> Realization::existing() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

Realization sample_realization(const ProbModel& model, const Graph& g, std::uint64_t seed) {
  model.check_compatible(g);
  Rng rng(seed);
  std::vector<std::uint8_t> bits(g.num_edges());
  if (const auto* u = std::get_if<UniformProb>(&model.variant())) {
    for (auto& b : bits) b = rng.bernoulli(u->p);
  } else {
    for (EdgeId e = 0; e < g.num_edges(); ++e) bits[e] = rng.bernoulli(edge_prob(model, g, e));
  }
  return Realization(std::move(bits));
}

Realization sample_realization(const ProbModel& model, int item_count, std::uint64_t seed) {
  model.check_compatible(item_count);
  Rng rng(seed);
  std::vector<std::uint8_t> bits(item_count);
  for (int i = 0; i < item_count; ++i) bits[i] = rng.bernoulli(model.item_prob(i));
  return Realization(std::move(bits));
}

QueryOracle::QueryOracle(const Graph& g, Realization hidden)
    : graph_(&g), hidden_(std::move(hidden)), state_(g.num_edges(), Knowledge::Unknown), load_(g.num_vertices(), 0) {
  if (hidden_.size() != g.num_edges()) throw InputError("oracle: realization size does not match graph");
}

QueryOracle::QueryOracle(const KSetInstance& inst, Realization hidden)
    : sets_(&inst),
      hidden_(std::move(hidden)),
      state_(inst.num_sets(), Knowledge::Unknown),
      load_(inst.universe_size(), 0) {
  if (hidden_.size() != inst.num_sets()) throw InputError("oracle: realization size does not match instance");
}

std::span<const int> QueryOracle::members(int item) const {
  return graph_ ? graph_->endpoint_span(item) : sets_->set(item);
}

bool QueryOracle::query(int item) {
  if (state_[item] == Knowledge::Unknown) {
    const bool exists = hidden_.exists(item);
    state_[item] = exists ? Knowledge::Exists : Knowledge::Missing;
    log_.push_back(item);
    for (int m : members(item)) ++load_[m];
  }
  return state_[item] == Knowledge::Exists;
}

int QueryOracle::max_load() const {
  return load_.empty() ? 0 : *std::max_element(load_.begin(), load_.end());
}

ProbModel sample_vertex_params(int n, const VertexParamDist& dist, std::uint64_t seed) {
  if (n < 1) throw InputError("sample_vertex_params: n must be >= 1");
  std::visit(Overloaded{
                 [](const Uniform01&) {},
                 [](const ConstantParam& d) { check_prob(d.c, "constant parameter"); },
                 [](const TwoPointParam& d) {
                   check_prob(d.lo, "two-point low value");
                   check_prob(d.hi, "two-point high value");
                   check_prob(d.frac_lo, "two-point low fraction");
                 },
             },
             dist);
  Rng rng(seed);
  std::vector<double> p(n);
  for (auto& x : p) {
    x = std::visit(Overloaded{
                       [&](const Uniform01&) { return rng.uniform(); },
                       [](const ConstantParam& d) { return d.c; },
                       [&](const TwoPointParam& d) { return rng.bernoulli(d.frac_lo) ? d.lo : d.hi; },
                   },
                   dist);
  }
  return ProbModel::vertex_params(std::move(p));
}

int f_delta(const ProbModel& model, double delta) {
  const auto* m = std::get_if<VertexParamProb>(&model.variant());
  if (!m) throw InputError("f_delta: requires a vertex-parameter model");
  return static_cast<int>(std::count_if(m->p.begin(), m->p.end(), [&](double x) { return x < delta; }));
}

double g_delta(const VertexParamDist& dist, double delta) {
  return std::visit(Overloaded{
                        [&](const Uniform01&) { return std::clamp(delta, 0.0, 1.0); },
                        [&](const ConstantParam& d) { return d.c < delta ? 1.0 : 0.0; },
                        [&](const TwoPointParam& d) {
                          return (d.lo < delta ? d.frac_lo : 0.0) + (d.hi < delta ? 1.0 - d.frac_lo : 0.0);
                        },
                    },
                    dist);
}

ProbModel parse_uniform_spec(const std::string& spec) {
  const std::string prefix = "uniform:";
  if (spec.rfind(prefix, 0) != 0) throw InputError("model spec must look like uniform:P, got `" + spec + "`");
  return ProbModel::uniform(parse_double(spec.substr(prefix.size()), "model spec"));
}

VertexParamDist parse_vertex_dist(const std::string& spec) {
  if (spec == "uniform01") return Uniform01{};
  if (spec.rfind("const:", 0) == 0) return ConstantParam{parse_double(spec.substr(6), "const parameter")};
  if (spec.rfind("twopoint:", 0) == 0) {
    std::vector<double> parts;
    std::istringstream in(spec.substr(9));
    std::string tok;
    while (std::getline(in, tok, ',')) parts.push_back(parse_double(tok, "twopoint parameter"));
    if (parts.size() != 3) throw InputError("twopoint needs LO,HI,FRAC");
    return TwoPointParam{parts[0], parts[1], parts[2]};
  }
  throw InputError("unknown vertex-parameter distribution `" + spec + "`");
}

ProbModel read_model(std::istream& in, int item_count, int vertex_count) {
  std::string line;
  if (!next_data_line(in, line)) throw InputError("model file: missing header");
  std::istringstream header(line);
  std::string kind;
  header >> kind;
  auto read_values = [&](int count) {
    std::vector<double> values;
    values.reserve(count);
    for (int i = 0; i < count; ++i) {
      if (!next_data_line(in, line)) throw InputError("model file: expected " + std::to_string(count) + " values");
      std::istringstream row(line);
      double x;
      if (!(row >> x)) throw InputError("model file: bad value `" + line + "`");
      values.push_back(x);
    }
    return values;
  };
  if (kind == "uniform") {
    double p;
    if (!(header >> p)) throw InputError("model file: `uniform` needs a probability");
    return ProbModel::uniform(p);
  }
  if (kind == "peredge") return ProbModel::per_item(read_values(item_count));
  if (kind == "vertexparams") return ProbModel::vertex_params(read_values(vertex_count));
  throw InputError("model file: unknown model `" + kind + "`");
}

void write_model(std::ostream& out, const ProbModel& model) {
  std::visit(Overloaded{
                 [&](const UniformProb& m) { out << "uniform " << m.p << '\n'; },
                 [&](const PerItemProb& m) {
                   out << "peredge\n";
                   for (double x : m.p) out << x << '\n';
                 },
                 [&](const VertexParamProb& m) {
                   out << "vertexparams\n";
                   for (double x : m.p) out << x << '\n';
                 },
             },
             model.variant());
}

}  // namespace stochmatch
