#include "stochmatch/suites.hpp"

#include <cmath>

namespace stochmatch {

namespace {

EvalConfig eval_config(const SuiteOptions& opt) {
  EvalConfig c;
  c.trials = opt.trials;
  c.base_seed = opt.seed;
  c.threads = opt.threads;
  c.omni = OmniMode::Auto;
  return c;
}

}  // namespace

int example31_naive_rounds(int t, double p) {
  return static_cast<int>(std::ceil(2.0 * std::log(3.0 * t) / p));
}

int figure3_rounds(int t) { return static_cast<int>(std::ceil(std::log2(3.0 * t))); }

std::vector<RatioRecord> suite_example31(int t, double p, int adaptive_rounds, const SuiteOptions& opt) {
  const int degree = example31_default_degree(t, p);
  const auto gg = gen_example31(t, degree, opt.seed);
  const auto model = ProbModel::uniform(p);
  AlgorithmSpec naive{.id = "naive-scheduled", .rounds = example31_naive_rounds(t, p)};
  AlgorithmSpec adaptive{.id = "adaptive", .rounds = adaptive_rounds};
  return {evaluate(naive, gg, model, eval_config(opt)), evaluate(adaptive, gg, model, eval_config(opt))};
}

std::vector<RatioRecord> suite_figure3(int t, double p, const SuiteOptions& opt) {
  const auto gg = gen_figure3(t);
  const auto model = ProbModel::uniform(p);
  const int rounds = figure3_rounds(t);
  AlgorithmSpec adversarial{.id = "nonadaptive-adversarial", .rounds = rounds};
  AlgorithmSpec plain{.id = "nonadaptive", .rounds = rounds};
  return {evaluate(adversarial, gg, model, eval_config(opt)), evaluate(plain, gg, model, eval_config(opt))};
}

std::vector<RatioRecord> suite_appendix_a(const std::vector<int>& ts, double beta, double p, const SuiteOptions& opt) {
  std::vector<RatioRecord> out;
  const auto model = ProbModel::uniform(p);
  for (int t : ts) {
    const auto gg = gen_appendix_a(t, beta);
    AlgorithmSpec naive{.id = "naive-random", .budget = static_cast<int>(std::floor(std::sqrt(t) + 1e-9))};
    auto rec = evaluate(naive, gg, model, eval_config(opt));
    rec.params += ";b=" + std::to_string(naive.budget);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<LemmaB1Row> suite_lemma_b1(const std::vector<int>& ns, const std::vector<double>& ps,
                                       const SuiteOptions& opt) {
  std::vector<LemmaB1Row> out;
  for (int n : ns) {
    const Graph g = gen_complete_bipartite(n).graph;
    for (double p : ps) {
      LemmaB1Row row;
      row.n = n;
      row.p = p;
      row.estimate =
          omniscient_matching(g, ProbModel::uniform(p), OmniMode::MonteCarlo, opt.trials, opt.seed, opt.threads);
      row.bound = n - (10.0 / std::log(1.0 / (1.0 - p))) * std::log(static_cast<double>(n));
      out.push_back(row);
    }
  }
  return out;
}

RatioRecord lemma_b1_record(const LemmaB1Row& row) {
  RatioRecord r;
  r.family = "knn";
  r.params = "n=" + std::to_string(row.n) + ";bound=" + format_number(row.bound);
  r.algorithm = "omniscient";
  r.rounds = 0;
  r.p_or_f = format_number(row.p);
  r.trials = row.estimate.trials;
  r.alg_mean = row.estimate.mean;
  r.omni_mean = row.estimate.mean;
  r.omni_se = row.estimate.se;
  r.ratio = row.estimate.mean / row.n;
  r.ci = 1.96 * row.estimate.se / row.n;
  r.omni_mode = OmniMode::MonteCarlo;
  return r;
}

}  // namespace stochmatch
