#include "stochmatch/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stochmatch/rng.hpp"

namespace stochmatch {

namespace {

using EdgeList = std::vector<std::array<VertexId, 2>>;

std::vector<VertexId> range(VertexId first, int count) {
  std::vector<VertexId> out(count);
  std::iota(out.begin(), out.end(), first);
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InputError(message);
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Adds the union of `count` random perfect matchings between equal-size
// classes x and y, skipping pairs already present.
void add_random_regular(EdgeList& edges, const std::vector<VertexId>& x, const std::vector<VertexId>& y, int count,
                        Rng& rng) {
  std::vector<std::uint64_t> seen;
  std::vector<int> perm(y.size());
  for (int r = 0; r < count; ++r) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const std::uint64_t key = static_cast<std::uint64_t>(i) << 32 | static_cast<std::uint32_t>(perm[i]);
      seen.push_back(key);
    }
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (std::uint64_t key : seen) edges.push_back({x[key >> 32], y[key & 0xffffffffu]});
}

void add_complete(EdgeList& edges, const std::vector<VertexId>& x, const std::vector<VertexId>& y) {
  for (VertexId u : x) {
    for (VertexId v : y) edges.push_back({u, v});
  }
}

GeneratedGraph make(std::string family, int n, EdgeList edges) {
  GeneratedGraph out;
  out.graph = Graph(n, std::move(edges));
  out.family = std::move(family);
  return out;
}

}  // namespace

std::string GeneratedGraph::describe() const {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + '=' + v;
  }
  return out;
}

GeneratedGraph gen_single_edge() { return make("single-edge", 2, {{0, 1}}); }

GeneratedGraph gen_disjoint_edges(int n) {
  require(n >= 1, "disjoint: n must be >= 1");
  EdgeList edges;
  for (int i = 0; i < n; ++i) edges.push_back({2 * i, 2 * i + 1});
  auto out = make("disjoint", 2 * n, std::move(edges));
  out.params["n"] = std::to_string(n);
  return out;
}

GeneratedGraph gen_complete(int n) {
  require(n >= 1, "complete: n must be >= 1");
  EdgeList edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  auto out = make("complete", n, std::move(edges));
  out.params["n"] = std::to_string(n);
  return out;
}

GeneratedGraph gen_path(int n) {
  require(n >= 1, "path: n must be >= 1");
  EdgeList edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  auto out = make("path", n, std::move(edges));
  out.params["n"] = std::to_string(n);
  return out;
}

GeneratedGraph gen_cycle(int n) {
  require(n >= 3, "cycle: n must be >= 3");
  EdgeList edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  auto out = make("cycle", n, std::move(edges));
  out.params["n"] = std::to_string(n);
  return out;
}

GeneratedGraph gen_star(int leaves) {
  require(leaves >= 1, "star: needs at least one leaf");
  EdgeList edges;
  for (int i = 1; i <= leaves; ++i) edges.push_back({0, i});
  auto out = make("star", leaves + 1, std::move(edges));
  out.params["leaves"] = std::to_string(leaves);
  return out;
}

GeneratedGraph gen_petersen() {
  EdgeList edges;
  for (int i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5});          // outer cycle
    edges.push_back({i, i + 5});                // spokes
    edges.push_back({5 + i, 5 + (i + 2) % 5});  // inner pentagram
  }
  return make("petersen", 10, std::move(edges));
}

GeneratedGraph gen_complete_bipartite(int n) {
  require(n >= 1, "knn: n must be >= 1");
  EdgeList edges;
  const auto u = range(0, n), v = range(n, n);
  add_complete(edges, u, v);
  auto out = make("knn", 2 * n, std::move(edges));
  out.classes["U"] = u;
  out.classes["V"] = v;
  out.params["n"] = std::to_string(n);
  return out;
}

GeneratedGraph gen_erdos_renyi(int n, double d, std::uint64_t seed) {
  require(n >= 1, "er: n must be >= 1");
  require(d >= 0, "er: d must be >= 0");
  const double p = n > 1 ? std::min(1.0, d / (n - 1)) : 0.0;
  Rng rng(seed);
  EdgeList edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) edges.push_back({u, v});
    }
  }
  auto out = make("er", n, std::move(edges));
  out.params["n"] = std::to_string(n);
  out.params["d"] = fmt(d);
  out.params["seed"] = std::to_string(seed);
  return out;
}

int example31_default_degree(int t, double p) {
  require(t >= 2 && t % 2 == 0, "example31: t must be even and >= 2");
  require(p > 0 && p <= 1, "example31: p must lie in (0,1]");
  const int r = static_cast<int>(std::ceil(2.0 * std::log(3.0 * t) / p));
  return std::clamp(r, 1, t / 2);
}

GeneratedGraph gen_example31(int t, int degree, std::uint64_t seed) {
  require(t >= 2 && t % 2 == 0, "example31: t must be even and >= 2");
  require(degree >= 1, "example31: degree must be >= 1");
  const int n = 3 * t;
  std::vector<VertexId> label(n);
  std::iota(label.begin(), label.end(), 0);
  Rng rng = Rng::split(seed, 0);
  std::shuffle(label.begin(), label.end(), rng.engine());
  auto relabel = [&](VertexId first, int count) {
    std::vector<VertexId> out(count);
    for (int i = 0; i < count; ++i) out[i] = label[first + i];
    return out;
  };
  const auto a = relabel(0, t / 2), b = relabel(t / 2, t / 2), c = relabel(t, t), d = relabel(2 * t, t);
  EdgeList edges;
  Rng wiring = Rng::split(seed, 1);
  add_random_regular(edges, a, b, degree, wiring);
  add_complete(edges, b, c);
  add_random_regular(edges, c, d, degree, wiring);
  auto out = make("example31", n, std::move(edges));
  out.classes = {{"A", a}, {"B", b}, {"C", c}, {"D", d}};
  out.params["t"] = std::to_string(t);
  out.params["degree"] = std::to_string(degree);
  out.params["seed"] = std::to_string(seed);
  return out;
}

GeneratedGraph gen_figure3(int t) {
  require(t >= 2 && t % 2 == 0, "figure3: t must be even and >= 2");
  const auto a = range(0, t / 2), b = range(t / 2, t), c = range(3 * t / 2, t), d = range(5 * t / 2, t / 2);
  EdgeList edges;
  for (int i = 0; i < t; ++i) edges.push_back({b[i], c[i]});
  add_complete(edges, a, b);
  add_complete(edges, c, d);
  auto out = make("figure3", 3 * t, std::move(edges));
  out.classes = {{"A", a},
                 {"B", b},
                 {"C", c},
                 {"D", d},
                 {"B1", {b.begin(), b.begin() + t / 2}},
                 {"B2", {b.begin() + t / 2, b.end()}},
                 {"C1", {c.begin(), c.begin() + t / 2}},
                 {"C2", {c.begin() + t / 2, c.end()}}};
  out.params["t"] = std::to_string(t);
  return out;
}

MatchingSelector figure3_selector(const GeneratedGraph& fig3) {
  require(fig3.family == "figure3", "figure3_selector: needs a figure3 graph");
  const auto& cl = fig3.classes;
  const auto a = cl.at("A"), d = cl.at("D"), b1 = cl.at("B1"), b2 = cl.at("B2"), c1 = cl.at("C1"), c2 = cl.at("C2");
  const int h = static_cast<int>(a.size());
  // x[i] - y[(i + shift) % h] for a pair of half-size classes.
  auto shifted = [h](const Graph& g, const std::vector<VertexId>& x, const std::vector<VertexId>& y, int shift) {
    std::vector<EdgeId> out;
    for (int i = 0; i < h; ++i) out.push_back(find_edge(g, x[i], y[(i + shift) % h]));
    return out;
  };
  return [=](int round, const Graph& g, std::span<const std::uint8_t>) {
    std::vector<EdgeId> out;
    auto append = [&](std::vector<EdgeId> part) { out.insert(out.end(), part.begin(), part.end()); };
    if (round == 1) {
      for (int i = 0; i < h; ++i) out.push_back(find_edge(g, b1[i], c1[i]));
      append(shifted(g, a, b2, 0));
      append(shifted(g, c2, d, 0));
    } else if (round == 2) {
      for (int i = 0; i < h; ++i) out.push_back(find_edge(g, b2[i], c2[i]));
      append(shifted(g, a, b1, 0));
      append(shifted(g, c1, d, 0));
    } else if (round - 2 < h) {
      append(shifted(g, a, b1, round - 2));
      append(shifted(g, c1, d, round - 2));
    } else if (round - 2 - h + 1 < h) {
      append(shifted(g, a, b2, round - 2 - h + 1));
      append(shifted(g, c2, d, round - 2 - h + 1));
    }
    return out;
  };
}

GeneratedGraph gen_appendix_a(int t, double beta) {
  require(t >= 1, "appendixA: t must be >= 1");
  require(beta > 0 && beta < 1, "appendixA: beta must lie in (0,1)");
  const int side = std::max(1, static_cast<int>(std::floor(std::pow(static_cast<double>(t), beta) + 1e-9)));
  const auto a = range(0, side), b = range(side, t), c = range(side + t, t), d = range(side + 2 * t, side);
  EdgeList edges;
  for (int i = 0; i < t; ++i) edges.push_back({b[i], c[i]});
  add_complete(edges, a, b);
  add_complete(edges, c, d);
  auto out = make("appendixA", 2 * side + 2 * t, std::move(edges));
  out.classes = {{"A", a}, {"B", b}, {"C", c}, {"D", d}};
  out.params["t"] = std::to_string(t);
  out.params["beta"] = fmt(beta);
  return out;
}

EdgeId find_edge(const Graph& g, VertexId u, VertexId v) {
  if (g.degree(u) > g.degree(v)) std::swap(u, v);
  for (const auto& inc : g.incident(u)) {
    if (inc.neighbor == v) return inc.edge;
  }
  return -1;
}

namespace {

const std::string& need(const std::map<std::string, std::string>& params, const std::string& key,
                        const std::string& family) {
  const auto it = params.find(key);
  if (it == params.end()) throw InputError("family " + family + " needs parameter `" + key + "`");
  return it->second;
}

int int_param(const std::map<std::string, std::string>& params, const std::string& key, const std::string& family) {
  const auto& text = need(params, key, family);
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw InputError("parameter `" + key + "` is not an integer: " + text);
  return value;
}

double real_param(const std::map<std::string, std::string>& params, const std::string& key,
                  const std::string& family) {
  const auto& text = need(params, key, family);
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw InputError("parameter `" + key + "` is not a number: " + text);
  return value;
}

std::uint64_t seed_param(const std::map<std::string, std::string>& params) {
  const auto it = params.find("seed");
  return it == params.end() ? 0 : std::stoull(it->second);
}

}  // namespace

GeneratedGraph make_family(const std::string& family, const std::map<std::string, std::string>& params) {
  GeneratedGraph out;
  if (family == "single-edge") {
    out = gen_single_edge();
  } else if (family == "disjoint") {
    out = gen_disjoint_edges(int_param(params, "n", family));
  } else if (family == "complete") {
    out = gen_complete(int_param(params, "n", family));
  } else if (family == "k3" || family == "k4") {
    out = gen_complete(family == "k3" ? 3 : 4);
  } else if (family == "k22") {
    out = gen_complete_bipartite(2);
  } else if (family == "path") {
    out = gen_path(int_param(params, "n", family));
  } else if (family == "p4") {
    out = gen_path(4);
  } else if (family == "cycle") {
    out = gen_cycle(int_param(params, "n", family));
  } else if (family == "c4") {
    out = gen_cycle(4);
  } else if (family == "star") {
    out = gen_star(int_param(params, "n", family));
  } else if (family == "petersen") {
    out = gen_petersen();
  } else if (family == "knn") {
    out = gen_complete_bipartite(int_param(params, "n", family));
  } else if (family == "er") {
    out = gen_erdos_renyi(int_param(params, "n", family), real_param(params, "d", family), seed_param(params));
  } else if (family == "example31") {
    const int t = int_param(params, "t", family);
    const int degree = params.count("degree") ? int_param(params, "degree", family)
                                              : example31_default_degree(t, real_param(params, "p", family));
    out = gen_example31(t, degree, seed_param(params));
  } else if (family == "figure3") {
    out = gen_figure3(int_param(params, "t", family));
  } else if (family == "appendixA") {
    out = gen_appendix_a(int_param(params, "t", family), real_param(params, "beta", family));
  } else {
    throw InputError("unknown family `" + family + "`");
  }
  out.family = family;
  return out;
}

}  // namespace stochmatch
