#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stochmatch/generators.hpp"
#include "stochmatch/match_algorithms.hpp"
#include "test_support.hpp"

using namespace stochmatch;

namespace {

// Smallest odd L with L >= 4/eps - 1, found by counting up.
int odd_path_length(double eps) {
  int L = 1;
  while (L < 4.0 / eps - 1.0 - 1e-12) L += 2;
  return L;
}

void check_solution(const Graph& g, const QueryOracle& oracle, const RunReport& report) {
  CHECK(is_matching(g, report.solution));
  for (EdgeId e : report.solution) {
    CHECK(oracle.was_queried(e));
    CHECK(oracle.hidden().exists(e));
  }
  CHECK(report.total_queries == oracle.distinct_queries());
  CHECK(report.max_load == oracle.max_load());
}

Realization all_exist(const Graph& g) { return Realization(std::vector<std::uint8_t>(g.num_edges(), 1)); }

}  // namespace

TEST_CASE("theory parameters") {
  for (double eps : {0.3, 0.5, 0.8}) {
    for (double p : {0.3, 0.5, 0.9}) {
      auto tp = derive_params(eps, p);
      int L = odd_path_length(eps);
      CHECK(tp.path_length == L);
      double a = std::pow(p, (L + 1) / 2.0);
      CHECK(tp.rounds == static_cast<std::int64_t>(std::ceil(std::log(2.0 / eps) / a)));
      CHECK(tp.alpha == doctest::Approx(a));
      CHECK(tp.gamma == doctest::Approx(a * (1.0 + 2.0 / (L + 1))));
      CHECK(tp.guaranteed_fraction() >= 1.0 - eps);
    }
  }
  auto half = derive_params(0.5, 0.5);
  CHECK(half.path_length == odd_path_length(0.5));
  CHECK(half.rounds == static_cast<std::int64_t>(std::ceil(std::log(4.0) * 16.0)));
  CHECK(derive_params(0.5, 1.0).rounds == static_cast<std::int64_t>(std::ceil(std::log(4.0))));
  CHECK_THROWS_AS(derive_params(1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(derive_params(0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(derive_params(0.5, 0.0), std::domain_error);
}

TEST_CASE("adaptive: trivial instances") {
  Graph edge = gen_single_edge().graph;
  {
    QueryOracle o(edge, Realization({1}));
    auto r = adaptive_match(edge, o, 1);
    CHECK(r.size() == 1);
    CHECK(r.rounds.size() == 1);
  }
  {
    QueryOracle o(edge, Realization({1}));
    auto r = adaptive_match(edge, o, 0);
    CHECK(r.size() == 0);
    CHECK(o.distinct_queries() == 0);
  }
  {
    QueryOracle o(edge, Realization({0}));
    auto r = adaptive_match(edge, o, 5);
    CHECK(r.size() == 0);
    CHECK(o.distinct_queries() == 1);
    CHECK(r.rounds.size() == 5);
  }
  Graph p4 = gen_path(4).graph;
  QueryOracle o(p4, all_exist(p4));
  CHECK(adaptive_match(p4, o, 2).size() == 2);
  CHECK_THROWS_AS(adaptive_match(p4, o, -1), InputError);
}

TEST_CASE("adaptive on disjoint edges finds every existing edge in one round") {
  Graph g = gen_disjoint_edges(30).graph;
  auto real = sample_realization(ProbModel::uniform(0.4), g, 17);
  QueryOracle o(g, real);
  auto r = adaptive_match(g, o, 3);
  CHECK(r.size() == real.count());
  CHECK(r.rounds[0].queried.size() == 30);
  CHECK(r.rounds[1].queried.empty());
  CHECK(r.rounds[2].queried.empty());
}

TEST_CASE("adaptive invariants on random instances") {
  Rng rng(21);
  for (int i = 0; i < 150; ++i) {
    Graph g = testing::random_graph(rng, 14, 0.3);
    auto real = sample_realization(ProbModel::uniform(0.5), g, rng.next());
    QueryOracle o(g, real);
    const int R = 1 + static_cast<int>(rng.below(6));
    auto r = adaptive_match(g, o, R);
    check_solution(g, o, r);
    CHECK(o.max_load() <= R);
    REQUIRE(static_cast<int>(r.rounds.size()) == R);
    int prev = 0, queried = 0;
    for (const auto& rec : r.rounds) {
      CHECK(rec.solution_size >= prev);
      prev = rec.solution_size;
      queried += static_cast<int>(rec.queried.size());
    }
    CHECK(queried == r.total_queries);
    CHECK(r.size() == r.rounds.back().solution_size);

    // The result is a maximum matching of the edges known to exist.
    std::vector<EdgeId> known;
    for (EdgeId e : o.query_log())
      if (real.exists(e)) known.push_back(e);
    std::sort(known.begin(), known.end());
    CHECK(r.size() == max_matching(g, known).size());

    QueryOracle capped(g, real);
    AdaptiveOptions opt;
    opt.max_path_length = 1;
    auto rc = adaptive_match(g, capped, R, opt);
    check_solution(g, capped, rc);
    CHECK(capped.max_load() <= R);
  }
}

TEST_CASE("non-adaptive selection peels maximum matchings") {
  Graph k4 = gen_complete(4).graph;
  CHECK(nonadaptive_select(k4, 1).edges.size() == 2);
  auto three = nonadaptive_select(k4, 3);
  CHECK(three.edges.size() == 6);
  REQUIRE(three.per_round.size() == 3);
  for (const auto& m : three.per_round) CHECK(m.size() == 2);
  CHECK(nonadaptive_select(k4, 5).edges.size() == 6);
  CHECK_THROWS_AS(nonadaptive_select(k4, 0), InputError);

  QueryOracle o(k4, all_exist(k4));
  auto r = nonadaptive_match(k4, o, 1);
  CHECK(r.size() == 2);
  CHECK(o.distinct_queries() == 2);

  QueryOracle none(k4, Realization(std::vector<std::uint8_t>(6, 0)));
  CHECK(nonadaptive_match(k4, none, 3).size() == 0);
}

TEST_CASE("non-adaptive selection: per-vertex load is at most R") {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    Graph g = testing::random_graph(rng, 16, 0.4);
    int R = 1 + static_cast<int>(rng.below(4));
    auto sel = nonadaptive_select(g, R);
    QueryOracle o(g, all_exist(g));
    auto r = nonadaptive_match(g, o, sel);
    CHECK(o.max_load() <= R);
    CHECK(r.size() == max_matching(g).size());
  }
}

TEST_CASE("strategic selection is validated") {
  Graph k4 = gen_complete(4).graph;
  auto plain = nonadaptive_select(k4, 3);
  auto same = nonadaptive_select_strategic(k4, 3, [](int, const Graph& g, std::span<const std::uint8_t> residual) {
    return max_matching_masked(g, residual).edges();
  });
  CHECK(same.edges == plain.edges);
  CHECK(same.per_round == plain.per_round);

  auto too_small = [](int, const Graph&, std::span<const std::uint8_t>) { return std::vector<EdgeId>{0}; };
  CHECK_THROWS_AS(nonadaptive_select_strategic(k4, 1, too_small), InputError);
  auto not_matching = [](int, const Graph&, std::span<const std::uint8_t>) { return std::vector<EdgeId>{0, 1}; };
  CHECK_THROWS_AS(nonadaptive_select_strategic(k4, 1, not_matching), InputError);
  auto reused = [&](int r, const Graph& g, std::span<const std::uint8_t> residual) {
    return r == 1 ? max_matching_masked(g, residual).edges() : plain.per_round[0];
  };
  CHECK_THROWS_AS(nonadaptive_select_strategic(k4, 2, reused), InputError);
}

TEST_CASE("naive random budget") {
  Graph g = gen_complete(6).graph;
  {
    QueryOracle o(g, all_exist(g));
    naive_random(g, o, g.max_degree(), 3);
    CHECK(o.distinct_queries() == g.num_edges());
  }
  {
    QueryOracle o(g, all_exist(g));
    auto r = naive_random(g, o, 0, 3);
    CHECK(o.distinct_queries() == 0);
    CHECK(r.size() == 0);
  }
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    Graph h = testing::random_graph(rng, 15, 0.5);
    QueryOracle o(h, sample_realization(ProbModel::uniform(0.5), h, i));
    auto r = naive_random(h, o, 2, i);
    check_solution(h, o, r);
    CHECK(o.distinct_queries() <= 2 * h.num_vertices());
  }
  QueryOracle o(g, all_exist(g));
  CHECK_THROWS_AS(naive_random(g, o, -1, 3), InputError);
}

TEST_CASE("naive scheduled respects the per-vertex cap") {
  Graph star = gen_star(5).graph;
  {
    QueryOracle o(star, all_exist(star));
    auto r = naive_scheduled(star, o, 2, 7);
    CHECK(o.distinct_queries() == 2);
    CHECK(r.size() == 1);
  }
  {
    QueryOracle o(star, all_exist(star));
    naive_scheduled(star, o, 5, 7);
    CHECK(o.distinct_queries() == 5);
  }
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    Graph h = testing::random_graph(rng, 20, 0.4);
    int R = 1 + static_cast<int>(rng.below(4));
    QueryOracle o(h, sample_realization(ProbModel::uniform(0.5), h, i));
    auto r = naive_scheduled(h, o, R, i);
    check_solution(h, o, r);
    CHECK(o.max_load() <= R);
  }
  QueryOracle o(star, all_exist(star));
  CHECK_THROWS_AS(naive_scheduled(star, o, 0, 1), InputError);
}

TEST_CASE("single matching and query-everything baselines") {
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    Graph g = testing::random_graph(rng, 12, 0.4);
    auto real = sample_realization(ProbModel::uniform(0.6), g, i);
    QueryOracle all(g, real);
    auto full = query_everything(g, all);
    check_solution(g, all, full);
    std::vector<EdgeId> existing = real.existing();
    CHECK(full.size() == max_matching(g, existing).size());

    QueryOracle one(g, real);
    auto single = single_matching_baseline(g, one);
    check_solution(g, one, single);
    CHECK(one.max_load() <= 1);
    CHECK(single.size() <= full.size());
  }
}

TEST_CASE("round report text") {
  Graph p4 = gen_path(4).graph;
  QueryOracle o(p4, all_exist(p4));
  auto r = adaptive_match(p4, o, 3);
  std::ostringstream out;
  write_report(out, r);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("#", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}
