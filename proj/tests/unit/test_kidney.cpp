#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stochmatch/kidney.hpp"
#include "test_support.hpp"

using namespace stochmatch;

namespace {

CompatGraph digraph(int n, std::vector<std::pair<int, int>> arcs) {
  CompatGraph g;
  g.n = n;
  g.out.resize(n);
  std::sort(arcs.begin(), arcs.end());
  for (auto [u, v] : arcs) g.out[u].push_back(v);
  g.arcs = std::move(arcs);
  return g;
}

const KidneyRecord& find(const std::vector<KidneyRecord>& recs, double f, int r) {
  for (const auto& rec : recs)
    if (rec.f == f && rec.ratio.rounds == r) return rec;
  FAIL("missing record");
  return recs.front();
}

}  // namespace

TEST_CASE("ABO compatibility") {
  using B = BloodType;
  for (B p : {B::O, B::A, B::B, B::AB}) {
    CHECK(abo_compatible(B::O, p));
    CHECK(abo_compatible(p, B::AB));
    CHECK(abo_compatible(p, p));
  }
  CHECK_FALSE(abo_compatible(B::A, B::O));
  CHECK_FALSE(abo_compatible(B::A, B::B));
  CHECK_FALSE(abo_compatible(B::AB, B::A));
  CHECK(to_string(B::AB) == "AB");
}

TEST_CASE("generator parameters are validated") {
  KidneyParams p;
  CHECK_NOTHROW(p.validate());
  p.blood_freq = {0.5, 0.5, 0.5, 0.0};
  CHECK_THROWS_AS(p.validate(), InputError);
  KidneyParams q;
  q.pra_fail[1] = 1.5;
  CHECK_THROWS_AS(q.validate(), InputError);
  CHECK_THROWS_AS(gen_pool(0, 1), InputError);
}

TEST_CASE("pool: size, determinism and blood type frequencies") {
  auto pool = gen_pool(20000, 3);
  CHECK(pool.size() == 20000);
  CHECK(pool.drawn >= pool.size());
  KidneyParams defaults;
  for (int b = 0; b < 4; ++b) {
    CHECK(std::abs(static_cast<double>(pool.drawn_patient_blood[b]) / pool.drawn - defaults.blood_freq[b]) < 0.01);
    CHECK(std::abs(static_cast<double>(pool.drawn_donor_blood[b]) / pool.drawn - defaults.blood_freq[b]) < 0.01);
  }
  auto a = gen_pool(50, 9);
  auto b = gen_pool(50, 9);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.pairs[i].patient == b.pairs[i].patient);
    CHECK(a.pairs[i].donor == b.pairs[i].donor);
    CHECK(a.pairs[i].pra == b.pairs[i].pra);
  }
  std::ostringstream out;
  write_pool(out, a);
  CHECK(out.str().find("simplified") != std::string::npos);
}

TEST_CASE("compatibility arcs respect blood types") {
  auto pool = gen_pool(60, 4);
  auto g = build_compat(pool);
  CHECK(g.n == 60);
  for (auto [u, v] : g.arcs) {
    CHECK(u != v);
    CHECK(abo_compatible(pool.pairs[u].donor, pool.pairs[v].patient));
    CHECK(g.has_arc(u, v));
  }
  auto again = build_compat(pool);
  CHECK(again.arcs == g.arcs);

  KidneyParams never;
  never.pra_fail = {1.0, 1.0, 1.0};
  auto blocked = build_compat(gen_pool(30, 4, never));
  CHECK(blocked.arcs.empty());
}

TEST_CASE("cycle enumeration") {
  auto pair = digraph(2, {{0, 1}, {1, 0}});
  auto two = enumerate_cycles(pair, 2);
  CHECK(two.instance.num_sets() == 1);
  CHECK(two.lengths == std::vector<int>{2});

  auto triangle = digraph(3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(enumerate_cycles(triangle, 2).instance.num_sets() == 0);
  auto tri3 = enumerate_cycles(triangle, 3);
  REQUIRE(tri3.instance.num_sets() == 1);
  CHECK(tri3.cycles[0] == std::vector<int>{0, 1, 2});

  std::vector<std::pair<int, int>> all;
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v)
      if (u != v) all.push_back({u, v});
  auto complete = digraph(4, all);
  CHECK(enumerate_cycles(complete, 2).instance.num_sets() == 6);
  auto c3 = enumerate_cycles(complete, 3);
  CHECK(c3.instance.num_sets() == 6 + 4 * 2);
  CHECK(std::count(c3.lengths.begin(), c3.lengths.end(), 3) == 8);
  CHECK_THROWS_AS(enumerate_cycles(complete, 4), InputError);

  auto p = c3.probabilities(0.5);
  CHECK(p.front() == doctest::Approx(0.25));
  CHECK(p.back() == doctest::Approx(0.125));
  CHECK_THROWS_AS(c3.probabilities(1.5), InputError);
}

TEST_CASE("experiment: degenerate failure rates and monotonicity") {
  KidneyConfig cfg;
  cfg.n = 40;
  cfg.trials = 30;
  cfg.seed = 5;
  cfg.f_grid = {0.0, 0.5, 1.0};
  cfg.r_grid = {0, 1, 2, 3};
  auto recs = run_experiment(cfg);
  CHECK(recs.size() == 12);
  for (int r : cfg.r_grid) {
    CHECK(find(recs, 0.0, r).ratio.ratio == doctest::Approx(1.0));
    CHECK(find(recs, 1.0, r).used_trials == 0);
    CHECK(std::isnan(find(recs, 1.0, r).ratio.ratio));
    CHECK(find(recs, 0.5, r).ratio.max_load <= r + 1);
  }
  for (int r = 1; r <= 3; ++r) CHECK(find(recs, 0.5, r).ratio.ratio >= find(recs, 0.5, r - 1).ratio.ratio);
  CHECK(find(recs, 0.5, 0).ratio.family == "kidney-2cycle");

  cfg.include_empty = true;
  auto with_empty = run_experiment(cfg);
  CHECK(find(with_empty, 1.0, 2).ratio.ratio == doctest::Approx(1.0));
  CHECK(find(with_empty, 1.0, 2).used_trials == cfg.trials);

  cfg.include_empty = false;
  cfg.threads = 3;
  auto threaded = run_experiment(cfg);
  for (std::size_t i = 0; i < recs.size(); ++i) CHECK(kidney_csv_row(recs[i]) == kidney_csv_row(threaded[i]));
}

TEST_CASE("experiment with three-cycles") {
  KidneyConfig cfg;
  cfg.n = 20;
  cfg.k_max = 3;
  cfg.trials = 10;
  cfg.f_grid = {0.0, 0.5};
  cfg.r_grid = {0, 2};
  auto recs = run_experiment(cfg);
  CHECK(recs.size() == 4);
  for (const auto& rec : recs) {
    CHECK(rec.ratio.ratio <= 1.0 + 1e-12);
    CHECK(rec.ratio.family == "kidney-23cycle");
  }
  CHECK(find(recs, 0.5, 2).ratio.ratio >= find(recs, 0.5, 0).ratio.ratio);
}

TEST_CASE("experiment configuration is validated") {
  KidneyConfig cfg;
  cfg.k_max = 4;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  KidneyConfig bad_f;
  bad_f.f_grid = {1.5};
  CHECK_THROWS_AS(bad_f.validate(), InputError);
  KidneyConfig bad_r;
  bad_r.r_grid = {-1};
  CHECK_THROWS_AS(bad_r.validate(), InputError);
  CHECK(kidney_csv_header() == csv_header() + ",f,k_max,n");
}
