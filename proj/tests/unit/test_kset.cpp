#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stochmatch/bench.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/kset.hpp"
#include "test_support.hpp"

using namespace stochmatch;

namespace {

KSetInstance small_instance() { return KSetInstance(5, {{0, 1, 2}, {2, 3, 4}, {0, 3}, {1, 4}}, 3); }

// Hurkens-Schrijver bound written out directly.
double hs_bound(int k, int s) {
  if (k == 2) return static_cast<double>(s) / (s + 1);
  int r = (s + 1) / 2;
  double q = std::pow(k - 1, r);
  return s % 2 == 1 ? (2 * q - k) / (k * q - k) : (2 * q - 2) / (k * q - 2);
}

Realization every(int n) { return Realization(std::vector<std::uint8_t>(n, 1)); }

}  // namespace

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(KSetInstance(3, {{}}, 2), InputError);
  CHECK_THROWS_AS(KSetInstance(3, {{0, 1, 2}}, 2), InputError);
  CHECK_THROWS_AS(KSetInstance(3, {{0, 0}}, 2), InputError);
  CHECK_THROWS_AS(KSetInstance(3, {{0, 3}}, 2), InputError);
  CHECK_THROWS_AS(KSetInstance(3, {{0, 1}, {1, 0}}, 2), InputError);
  CHECK_NOTHROW(KSetInstance(3, {{0, 1}, {1, 0}}, 2, true));
  KSetInstance inst(4, {{3, 1}, {0, 2}}, 2);
  CHECK(inst.set(0)[0] == 1);
  CHECK(inst.containing(2).size() == 1);
  CHECK_FALSE(inst.intersects(0, 1));
  CHECK(is_packing(inst, std::vector<SetId>{0, 1}));
}

TEST_CASE("packing oracle") {
  CHECK(packing_oracle(small_instance()).size() == 2);
  KSetInstance empty(3, {}, 2);
  CHECK(packing_oracle(empty).empty());
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    auto inst = testing::random_kset(rng, 10, 1 + static_cast<int>(rng.below(14)), 3);
    auto p = packing_oracle(inst);
    CHECK(is_packing(inst, p));
    std::vector<SetId> all(inst.num_sets());
    std::iota(all.begin(), all.end(), 0);
    CHECK(static_cast<int>(p.size()) == testing::brute_packing(inst, all));
  }
  CHECK_THROWS_AS(packing_oracle(KSetInstance::from_graph(gen_complete(8).graph)), InstanceTooLarge);
}

TEST_CASE("for k = 2 packings are matchings") {
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    Graph g = testing::random_graph(rng, 9, 0.4, 20);
    auto inst = KSetInstance::from_graph(g);
    CHECK(inst.num_sets() == g.num_edges());
    CHECK(static_cast<int>(packing_oracle(inst).size()) == max_matching(g).size());
    // s large enough that local optima are global for graphs of this size
    CHECK(static_cast<int>(local_search_packing(inst, 9).size()) == max_matching(g).size());
  }
}

TEST_CASE("local search: greedy versus structures of size two") {
  auto inst = small_instance();
  CHECK(local_search_packing(inst, 1).size() == 1);
  auto two = local_search_packing(inst, 2);
  CHECK(two.size() == 2);
  CHECK(is_packing(inst, two));
  CHECK_THROWS_AS(local_search_packing(inst, 0), InputError);

  std::vector<SetId> active{1, 2};
  auto restricted = local_search_packing(inst, 3, active);
  for (SetId s : restricted) CHECK((s == 1 || s == 2));
}

TEST_CASE("a local optimum for s = 3 can stay below 0.9 of the optimum when k = 2") {
  KSetInstance inst(8, {{2, 6}, {1, 7}, {3}, {0}, {5, 7}, {4, 5}, {1}, {1, 2}, {6}, {0, 2}, {2, 4}, {1, 6}}, 2);
  std::vector<SetId> all(inst.num_sets());
  std::iota(all.begin(), all.end(), 0);
  const int opt = testing::brute_packing(inst, all);
  CHECK(opt == 6);
  auto ls = local_search_packing(inst, 3);
  CHECK(ls.size() == 5);
  CHECK(find_aug_structures(inst, ls, 3).empty());
  CHECK_FALSE(find_aug_structures(inst, ls, 4).empty());
  CHECK(ls.size() >= local_search_guarantee(2, 3) * opt);
  CHECK(ls.size() < (2.0 / 2 - 0.1) * opt);
}

TEST_CASE("augmenting structures") {
  auto inst = small_instance();
  std::vector<SetId> b{0};
  auto found = find_aug_structures(inst, b, 2);
  REQUIRE(found.size() == 1);
  CHECK(found[0].add == std::vector<SetId>{2, 3});
  CHECK(found[0].remove == std::vector<SetId>{0});
  CHECK(find_aug_structures(inst, b, 1).empty());
  CHECK_THROWS_AS(find_aug_structures(inst, std::vector<SetId>{0, 2}, 2), InputError);

  std::vector<SetId> none;
  auto singles = find_aug_structures(inst, none, 1);
  for (const auto& st : singles) {
    CHECK(st.add.size() == 1);
    CHECK(st.remove.empty());
  }
}

TEST_CASE("structures are disjoint and each augments the packing") {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    int k = 2 + static_cast<int>(rng.below(2));
    auto inst = testing::random_kset(rng, 12, 14, k);
    auto b = local_search_packing(inst, 1);
    int s = 1 + static_cast<int>(rng.below(3));
    auto found = find_aug_structures(inst, b, s);
    std::vector<int> used(inst.num_sets(), 0);
    for (const auto& st : found) {
      CHECK(st.add.size() > st.remove.size());
      CHECK(static_cast<int>(st.add.size()) <= s);
      for (SetId c : st.add) CHECK(used[c]++ == 0);
      std::vector<SetId> next;
      for (SetId x : b)
        if (std::find(st.remove.begin(), st.remove.end(), x) == st.remove.end()) next.push_back(x);
      next.insert(next.end(), st.add.begin(), st.add.end());
      CHECK(is_packing(inst, next));
    }
  }
}

TEST_CASE("local search guarantee") {
  for (int k : {2, 3, 4})
    for (int s = 1; s <= 6; ++s) {
      CHECK(local_search_guarantee(k, s) == doctest::Approx(hs_bound(k, s)));
      CHECK(local_search_eta(k, s) == doctest::Approx(2.0 / k - hs_bound(k, s)));
    }
  CHECK(hs_bound(3, 1) == doctest::Approx(1.0 / 3));
  CHECK(hs_bound(3, 2) == doctest::Approx(0.5));
  CHECK(hs_bound(3, 3) == doctest::Approx(5.0 / 9));
  CHECK(hs_bound(3, 4) == doctest::Approx(0.6));
  CHECK(local_search_guarantee(3, 12) < 2.0 / 3);
  CHECK(local_search_guarantee(3, 12) > 2.0 / 3 - 0.01);
  CHECK_THROWS_AS(local_search_guarantee(1, 2), InputError);
}

TEST_CASE("adaptive k-set algorithm") {
  auto inst = small_instance();
  {
    QueryOracle o(inst, every(4));
    CHECK(adaptive_kset(inst, o, 1, 3).size() == 1);
  }
  {
    QueryOracle o(inst, every(4));
    auto r = adaptive_kset(inst, o, 2, 3);
    CHECK(r.size() == 2);
    CHECK(o.max_load() <= 2);
  }
  {
    QueryOracle o(inst, every(4));
    CHECK(adaptive_kset(inst, o, 0, 3).size() == 0);
    CHECK(o.distinct_queries() == 0);
  }
  QueryOracle o(inst, every(4));
  CHECK_THROWS_AS(adaptive_kset(inst, o, -1, 3), InputError);
}

TEST_CASE("on edge sets, structures of size one cannot swap an edge out") {
  // 4-cycle 0-1-2-3 with edge (0,1) missing: the first round picks (0,1) and (2,3).
  Graph c4 = gen_cycle(4).graph;
  auto inst = KSetInstance::from_graph(c4);
  std::vector<std::uint8_t> bits(4, 1);
  bits[find_edge(c4, 0, 1)] = 0;
  QueryOracle om(c4, Realization(bits));
  CHECK(adaptive_match(c4, om, 2).size() == 2);
  QueryOracle o1(inst, Realization(bits));
  CHECK(adaptive_kset(inst, o1, 2, 1).size() == 1);
  QueryOracle o3(inst, Realization(bits));
  CHECK(adaptive_kset(inst, o3, 2, 3).size() == 2);
}

TEST_CASE("k-set algorithms: budget and solution invariants") {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    int k = 2 + static_cast<int>(rng.below(2));
    auto inst = testing::random_kset(rng, 15, 20, k);
    auto real = sample_realization(ProbModel::uniform(0.6), inst.num_sets(), rng.next());
    int R = 1 + static_cast<int>(rng.below(5));
    for (int alg = 0; alg < 2; ++alg) {
      QueryOracle o(inst, real);
      auto r = alg == 0 ? adaptive_kset(inst, o, R, 2) : nonadaptive_kset(inst, o, R, 2);
      CHECK(is_packing(inst, r.solution));
      for (SetId s : r.solution) {
        CHECK(o.was_queried(s));
        CHECK(real.exists(s));
      }
      CHECK(o.max_load() <= R);
      CHECK(r.max_load == o.max_load());
      CHECK(r.total_queries == o.distinct_queries());
    }
  }
}

TEST_CASE("non-adaptive k-set selection") {
  auto inst = small_instance();
  auto sel = nonadaptive_kset_select(inst, 3, 3);
  REQUIRE(sel.size() == 3);
  CHECK(sel[0].size() == 2);
  std::vector<int> seen(inst.num_sets(), 0);
  for (const auto& packing : sel) {
    CHECK(is_packing(inst, packing));
    for (SetId s : packing) CHECK(seen[s]++ == 0);
  }
  QueryOracle o(inst, every(4));
  CHECK(nonadaptive_kset(inst, o, 1, 3).size() == 2);
  CHECK_THROWS_AS(nonadaptive_kset(inst, o, 0, 3), InputError);
}

TEST_CASE("non-adaptive k-set on K4 edges keeps a constant fraction") {
  auto gg = gen_complete(4);
  auto inst = KSetInstance::from_graph(gg.graph);
  AlgorithmSpec spec;
  spec.id = "nonadaptive-kset";
  spec.rounds = 3;
  spec.s = 3;
  EvalConfig cfg;
  cfg.trials = 2000;
  cfg.base_seed = 3;
  auto rec = evaluate_kset(spec, inst, ProbModel::uniform(0.5), cfg);
  CHECK(rec.omni_mode == OmniMode::Exact);
  CHECK(rec.ratio >= 0.45);
  CHECK(rec.ratio <= 1.0 + 2 * rec.ci);
}

TEST_CASE("subadditivity over partitions") {
  Rng rng(44);
  for (int i = 0; i < 20; ++i) {
    auto inst = testing::random_kset(rng, 8, 8, 3);
    std::vector<double> probs;
    for (int j = 0; j < inst.num_sets(); ++j) probs.push_back(rng.uniform());
    auto model = ProbModel::per_item(probs);
    for (std::uint32_t mask = 0; mask < (1u << inst.num_sets()); mask += 7) {
      std::vector<bool> first(inst.num_sets());
      for (int j = 0; j < inst.num_sets(); ++j) first[j] = mask >> j & 1;
      CHECK(kset_subadditivity_check(inst, model, first));
    }
  }
  CHECK_THROWS_AS(kset_subadditivity_check(small_instance(), ProbModel::uniform(0.5), {true}), InputError);
}

TEST_CASE("k-set file round trip") {
  std::istringstream in("# comment\n5 2 3\n0 1 2 0.5\n3 4 0.25\n");
  auto f = read_kset(in);
  CHECK(f.instance.num_sets() == 2);
  CHECK(f.instance.k() == 3);
  REQUIRE(f.probs.size() == 2);
  CHECK(f.probs[1] == doctest::Approx(0.25));

  std::stringstream ss;
  write_kset(ss, f.instance, f.probs);
  auto back = read_kset(ss);
  CHECK(back.instance.sets() == f.instance.sets());
  CHECK(back.probs == f.probs);

  std::istringstream no_probs("4 2 2\n0 1\n2 3\n");
  CHECK(read_kset(no_probs).probs.empty());

  std::istringstream misplaced("5 1 3\n0 0.5 1\n");
  CHECK_THROWS_AS(read_kset(misplaced), InputError);
  std::istringstream mixed("5 2 3\n0 1 0.5\n3 4\n");
  CHECK_THROWS_AS(read_kset(mixed), InputError);
  std::istringstream missing("5 3 3\n0 1\n");
  CHECK_THROWS_AS(read_kset(missing), InputError);
  CHECK_THROWS_AS(read_kset_file("/nonexistent/kset"), InputError);
}
