#include "stochmatch/match_algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "stochmatch/rng.hpp"

namespace stochmatch {

void write_report(std::ostream& out, const RunReport& report) {
  out << "# round queries exists size\n";
  for (const auto& r : report.rounds) {
    out << r.round << ' ' << r.queried.size() << ' ' << r.exists << ' ' << r.solution_size << '\n';
  }
}

double TheoryParams::guaranteed_fraction() const {
  return (alpha / gamma) * (1.0 - std::pow(1.0 - gamma, static_cast<double>(rounds)));
}

TheoryParams derive_params(double epsilon, double p_min) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("derive_params: epsilon must lie in (0,1)");
  if (!(p_min > 0.0 && p_min <= 1.0)) throw std::domain_error("derive_params: p_min must lie in (0,1]");
  TheoryParams t;
  t.epsilon = epsilon;
  t.p_min = p_min;
  int length = static_cast<int>(std::ceil(4.0 / epsilon - 1.0 - 1e-9));
  length = std::max(length, 1);
  if (length % 2 == 0) ++length;
  t.path_length = length;
  t.alpha = std::pow(p_min, (length + 1) / 2);
  t.gamma = t.alpha * (1.0 + 2.0 / (length + 1));
  const double rounds = std::ceil(std::log(2.0 / epsilon) / t.alpha);
  if (!(rounds < 9.0e18)) throw std::domain_error("derive_params: round count overflows");
  t.rounds = std::max<std::int64_t>(1, static_cast<std::int64_t>(rounds));
  return t;
}

namespace {

// Queries `items` in order; returns the existing ones and fills `rec`.
std::vector<EdgeId> query_all(QueryOracle& oracle, std::span<const EdgeId> items, RoundRecord& rec) {
  std::vector<EdgeId> existing;
  for (EdgeId e : items) {
    const bool fresh = !oracle.was_queried(e);
    const bool exists = oracle.query(e);
    if (fresh) {
      rec.queried.push_back(e);
      if (exists) ++rec.exists;
    }
    if (exists) existing.push_back(e);
  }
  return existing;
}

RunReport single_round_report(const Graph& g, QueryOracle& oracle, std::span<const EdgeId> items) {
  RunReport report;
  RoundRecord rec;
  rec.round = 1;
  const auto existing = query_all(oracle, items, rec);
  report.solution = max_matching(g, existing).edges();
  rec.solution_size = report.size();
  report.total_queries = static_cast<int>(rec.queried.size());
  report.rounds.push_back(std::move(rec));
  report.rounds_executed = 1;
  report.max_load = oracle.max_load();
  return report;
}

std::vector<EdgeId> sorted_union(std::vector<EdgeId> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

RunReport adaptive_match(const Graph& g, QueryOracle& oracle, int rounds, const AdaptiveOptions& options) {
  if (rounds < 0) throw InputError("adaptive_match: rounds must be >= 0");
  RunReport report;
  std::vector<std::uint8_t> not_missing(g.num_edges(), 1);  // complement of W_r
  std::vector<EdgeId> known_exist;
  Matching current;
  bool converged = false;

  for (int r = 1; r <= rounds; ++r) {
    RoundRecord rec;
    rec.round = r;
    // Once a round issues no query the state is a fixed point: every later
    // round recomputes the same O_r and finds nothing new.
    if (!converged) {
      const Matching target = max_matching_masked(g, not_missing, current.edges());
      for (const AltPath& path : symmetric_difference(current, target, g)) {
        if (path.kind != AltKind::AugmentingPath) continue;
        if (options.max_path_length && path.length() > *options.max_path_length) continue;
        for (EdgeId e : path.edges) {
          if (oracle.was_queried(e)) continue;
          const bool exists = oracle.query(e);
          rec.queried.push_back(e);
          if (exists) {
            ++rec.exists;
            known_exist.push_back(e);
          } else {
            not_missing[e] = 0;
          }
        }
      }
      if (rec.queried.empty()) {
        converged = true;
      } else {
        std::sort(known_exist.begin(), known_exist.end());
        current = max_matching(g, known_exist, current.edges());
      }
    }
    rec.solution_size = current.size();
    report.total_queries += static_cast<int>(rec.queried.size());
    report.rounds.push_back(std::move(rec));
  }
  report.solution = current.edges();
  report.rounds_executed = rounds;
  report.max_load = oracle.max_load();
  return report;
}

Selection nonadaptive_select(const Graph& g, int rounds) {
  if (rounds < 1) throw InputError("nonadaptive_select: rounds must be >= 1");
  Selection sel;
  std::vector<std::uint8_t> residual(g.num_edges(), 1);
  for (int r = 1; r <= rounds; ++r) {
    auto chosen = max_matching_masked(g, residual).edges();
    for (EdgeId e : chosen) residual[e] = 0;
    sel.edges.insert(sel.edges.end(), chosen.begin(), chosen.end());
    sel.per_round.push_back(std::move(chosen));
  }
  sel.edges = sorted_union(std::move(sel.edges));
  return sel;
}

Selection nonadaptive_select_strategic(const Graph& g, int rounds, const MatchingSelector& selector) {
  if (rounds < 1) throw InputError("nonadaptive_select: rounds must be >= 1");
  Selection sel;
  std::vector<std::uint8_t> residual(g.num_edges(), 1);
  for (int r = 1; r <= rounds; ++r) {
    auto chosen = selector(r, g, residual);
    std::sort(chosen.begin(), chosen.end());
    for (EdgeId e : chosen) {
      if (e < 0 || e >= g.num_edges() || !residual[e]) {
        throw InputError("selector: round " + std::to_string(r) + " picked an edge outside the residual graph");
      }
    }
    if (!is_matching(g, chosen)) throw InputError("selector: round " + std::to_string(r) + " returned a non-matching");
    const int best = max_matching_masked(g, residual).size();
    if (static_cast<int>(chosen.size()) != best) {
      throw InputError("selector: round " + std::to_string(r) + " returned a matching of size " +
                       std::to_string(chosen.size()) + ", maximum is " + std::to_string(best));
    }
    for (EdgeId e : chosen) residual[e] = 0;
    sel.edges.insert(sel.edges.end(), chosen.begin(), chosen.end());
    sel.per_round.push_back(std::move(chosen));
  }
  sel.edges = sorted_union(std::move(sel.edges));
  return sel;
}

RunReport nonadaptive_match(const Graph& g, QueryOracle& oracle, int rounds) {
  return nonadaptive_match(g, oracle, nonadaptive_select(g, rounds));
}

RunReport nonadaptive_match(const Graph& g, QueryOracle& oracle, const Selection& selection) {
  return single_round_report(g, oracle, selection.edges);
}

RunReport naive_random(const Graph& g, QueryOracle& oracle, int per_vertex, std::uint64_t seed) {
  if (per_vertex < 0) throw InputError("naive_random: budget must be >= 0");
  Rng rng(seed);
  std::vector<EdgeId> picked;
  std::vector<EdgeId> pool;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    pool.clear();
    for (const auto& inc : g.incident(v)) pool.push_back(inc.edge);
    const std::size_t take = std::min<std::size_t>(per_vertex, pool.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
      picked.push_back(pool[i]);
    }
  }
  return single_round_report(g, oracle, sorted_union(std::move(picked)));
}

RunReport naive_scheduled(const Graph& g, QueryOracle& oracle, int rounds, std::uint64_t seed) {
  if (rounds < 1) throw InputError("naive_scheduled: R must be >= 1");
  Rng rng(seed);
  std::vector<int> scheduled_count(g.num_vertices(), 0);
  std::vector<std::uint8_t> scheduled(g.num_edges(), 0);
  std::vector<EdgeId> picked;
  std::vector<EdgeId> candidates;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const int room = rounds - scheduled_count[v];
    if (room <= 0) continue;
    candidates.clear();
    for (const auto& [u, e] : g.incident(v)) {
      if (!scheduled[e] && scheduled_count[u] < rounds) candidates.push_back(e);
    }
    const std::size_t take = std::min<std::size_t>(room, candidates.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(candidates[i], candidates[i + rng.below(candidates.size() - i)]);
      const EdgeId e = candidates[i];
      scheduled[e] = 1;
      ++scheduled_count[g.endpoints(e)[0]];
      ++scheduled_count[g.endpoints(e)[1]];
      picked.push_back(e);
    }
  }
  return single_round_report(g, oracle, sorted_union(std::move(picked)));
}

RunReport single_matching_baseline(const Graph& g, QueryOracle& oracle) {
  return single_round_report(g, oracle, max_matching(g).edges());
}

RunReport query_everything(const Graph& g, QueryOracle& oracle) {
  std::vector<EdgeId> all(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) all[e] = e;
  return single_round_report(g, oracle, all);
}

}  // namespace stochmatch
