#include "stochmatch/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "stochmatch/exact.hpp"
#include "stochmatch/rng.hpp"

namespace stochmatch {

namespace {

constexpr double kZ95 = 1.96;

double mean_of(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v;
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

double se_of(std::span<const double> x, double mean) {
  if (x.size() < 2) return 0.0;
  double ss = 0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

OmniMode resolve(OmniMode mode, int items) {
  if (mode != OmniMode::Auto) return mode;
  return items <= kAutoExactCap ? OmniMode::Exact : OmniMode::MonteCarlo;
}

std::vector<double> item_probs(const ProbModel& model, const Graph& g) {
  std::vector<double> p(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) p[e] = edge_prob(model, g, e);
  return p;
}

std::vector<double> item_probs(const ProbModel& model, int items) {
  model.check_compatible(items);
  std::vector<double> p(items);
  for (int i = 0; i < items; ++i) p[i] = model.item_prob(i);
  return p;
}

std::string p_or_f_of(const ProbModel& model) {
  if (const auto* u = std::get_if<UniformProb>(&model.variant())) return format_number(u->p);
  return model.describe();
}

OmniscientEstimate monte_carlo(int trials, int threads, const std::function<double(int)>& sample) {
  if (trials < 1) throw InputError("Monte Carlo estimate needs at least one trial");
  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](int t) { values[t] = sample(t); });
  OmniscientEstimate est;
  est.mean = mean_of(values);
  est.se = se_of(values, est.mean);
  est.trials = trials;
  est.mode = OmniMode::MonteCarlo;
  return est;
}

std::uint64_t algorithm_seed(std::uint64_t trial) { return Rng::split(trial, 1).next(); }

RatioRecord finish(const AlgorithmSpec& spec, std::string family, std::string params, std::string p_or_f,
                   const std::vector<double>& a, const std::vector<double>& o, std::optional<OmniscientEstimate> exact,
                   int max_load) {
  RatioRecord r;
  r.family = std::move(family);
  r.params = std::move(params);
  r.algorithm = spec.id;
  r.rounds = spec.rounds;
  r.p_or_f = std::move(p_or_f);
  r.trials = static_cast<int>(a.size());
  const auto st = exact ? paired_ratio(a, o, exact->mean) : paired_ratio(a, o);
  r.alg_mean = st.mean_a;
  r.alg_se = st.se_a;
  r.omni_mean = st.mean_o;
  r.omni_se = exact ? 0.0 : st.se_o;
  r.ratio = st.ratio;
  r.ci = st.ci;
  r.omni_mode = exact ? OmniMode::Exact : OmniMode::MonteCarlo;
  r.max_load = max_load;
  r.above_one = r.ratio > 1.0;
  return r;
}

}  // namespace

OmniscientEstimate omniscient_matching(const Graph& g, const ProbModel& model, OmniMode mode, int trials,
                                       std::uint64_t base_seed, int threads) {
  model.check_compatible(g);
  if (resolve(mode, g.num_edges()) == OmniMode::Exact) {
    OmniscientEstimate est;
    est.mean = expected_optimum(conflict_masks(g), item_probs(model, g));
    est.mode = OmniMode::Exact;
    return est;
  }
  return monte_carlo(trials, threads, [&](int t) {
    const auto real = sample_realization(model, g, trial_seed(base_seed, t));
    return static_cast<double>(max_matching(g, real.existing()).size());
  });
}

std::vector<SetId> realized_optimum(const KSetInstance& inst, std::span<const std::uint8_t> exists) {
  std::vector<SetId> alive;
  for (SetId a = 0; a < inst.num_sets(); ++a) {
    if (exists[a]) alive.push_back(a);
  }
  if (static_cast<int>(alive.size()) > kPackingOracleSetCap) return local_search_packing(inst, 4, alive);
  std::vector<std::vector<int>> sets;
  for (SetId a : alive) sets.emplace_back(inst.set(a).begin(), inst.set(a).end());
  const KSetInstance sub(inst.universe_size(), std::move(sets), inst.k(), true);
  std::vector<SetId> out;
  for (SetId a : packing_oracle(sub)) out.push_back(alive[a]);
  return out;
}

OmniscientEstimate omniscient_kset(const KSetInstance& inst, const ProbModel& model, OmniMode mode, int trials,
                                   std::uint64_t base_seed, int threads) {
  const auto probs = item_probs(model, inst.num_sets());
  if (resolve(mode, inst.num_sets()) == OmniMode::Exact) {
    OmniscientEstimate est;
    est.mean = expected_optimum(conflict_masks(inst), probs);
    est.mode = OmniMode::Exact;
    return est;
  }
  return monte_carlo(trials, threads, [&](int t) {
    const auto real = sample_realization(model, inst.num_sets(), trial_seed(base_seed, t));
    return static_cast<double>(realized_optimum(inst, real.bits()).size());
  });
}

bool is_kset_algorithm(const std::string& id) { return id == "adaptive-kset" || id == "nonadaptive-kset"; }

void validate_algorithm(const AlgorithmSpec& spec) {
  static const std::vector<std::string> known = {"adaptive",        "nonadaptive",  "nonadaptive-adversarial",
                                                 "naive-random",    "naive-scheduled", "single-matching",
                                                 "query-all",       "adaptive-kset", "nonadaptive-kset"};
  if (std::find(known.begin(), known.end(), spec.id) == known.end()) {
    throw InputError("unknown algorithm `" + spec.id + "`");
  }
  const bool needs_positive_r = spec.id == "nonadaptive" || spec.id == "nonadaptive-adversarial" ||
                                spec.id == "naive-scheduled" || spec.id == "nonadaptive-kset";
  if (spec.rounds < (needs_positive_r ? 1 : 0)) {
    throw InputError("algorithm " + spec.id + " needs R >= " + (needs_positive_r ? "1" : "0"));
  }
  if (spec.id == "naive-random" && spec.budget < 0) throw InputError("naive-random needs budget b >= 0");
  if (is_kset_algorithm(spec.id) && spec.s < 1) throw InputError("structure size s must be >= 1");
  if (spec.max_path_length && (*spec.max_path_length < 1 || *spec.max_path_length % 2 == 0)) {
    throw InputError("path-length cap must be odd and >= 1");
  }
}

RunReport run_matching_algorithm(const AlgorithmSpec& spec, const GeneratedGraph& gg, QueryOracle& oracle,
                                 std::uint64_t seed) {
  const Graph& g = gg.graph;
  if (spec.id == "adaptive") return adaptive_match(g, oracle, spec.rounds, {spec.max_path_length});
  if (spec.id == "nonadaptive") return nonadaptive_match(g, oracle, spec.rounds);
  if (spec.id == "nonadaptive-adversarial") {
    return nonadaptive_match(g, oracle, nonadaptive_select_strategic(g, spec.rounds, figure3_selector(gg)));
  }
  if (spec.id == "naive-random") return naive_random(g, oracle, spec.budget, seed);
  if (spec.id == "naive-scheduled") return naive_scheduled(g, oracle, spec.rounds, seed);
  if (spec.id == "single-matching") return single_matching_baseline(g, oracle);
  if (spec.id == "query-all") return query_everything(g, oracle);
  throw InputError("algorithm `" + spec.id + "` does not run on graphs directly");
}

RatioRecord evaluate(const AlgorithmSpec& spec, const GeneratedGraph& gg, const ProbModel& model,
                     const EvalConfig& config) {
  validate_algorithm(spec);
  const Graph& g = gg.graph;
  model.check_compatible(g);
  if (config.trials < 1) throw InputError("evaluate: trials must be >= 1");
  if (is_kset_algorithm(spec.id)) {
    const auto probs = item_probs(model, g);
    auto rec = evaluate_kset(spec, KSetInstance::from_graph(g), ProbModel::per_item(probs), config, gg.family,
                             gg.describe());
    rec.p_or_f = p_or_f_of(model);
    return rec;
  }

  // Selections of the non-adaptive algorithms do not depend on the realization.
  std::optional<Selection> selection;
  if (spec.id == "nonadaptive") selection = nonadaptive_select(g, spec.rounds);
  if (spec.id == "nonadaptive-adversarial") {
    selection = nonadaptive_select_strategic(g, spec.rounds, figure3_selector(gg));
  }

  std::optional<OmniscientEstimate> exact;
  if (resolve(config.omni, g.num_edges()) == OmniMode::Exact) exact = omniscient_matching(g, model, OmniMode::Exact);

  std::vector<double> a(config.trials), o(config.trials, 0.0);
  std::vector<int> loads(config.trials, 0);
  parallel_for(config.trials, config.threads, [&](int t) {
    const std::uint64_t seed = trial_seed(config.base_seed, t);
    auto real = sample_realization(model, g, seed);
    if (!exact) o[t] = max_matching(g, real.existing()).size();
    QueryOracle oracle(g, std::move(real));
    const RunReport rep = selection ? nonadaptive_match(g, oracle, *selection)
                                    : run_matching_algorithm(spec, gg, oracle, algorithm_seed(seed));
    a[t] = rep.size();
    loads[t] = rep.max_load;
  });
  return finish(spec, gg.family, gg.describe(), p_or_f_of(model), a, o, exact,
                *std::max_element(loads.begin(), loads.end()));
}

RatioRecord evaluate_kset(const AlgorithmSpec& spec, const KSetInstance& inst, const ProbModel& model,
                          const EvalConfig& config, const std::string& family, const std::string& params) {
  validate_algorithm(spec);
  if (!is_kset_algorithm(spec.id)) throw InputError("algorithm `" + spec.id + "` does not run on set systems");
  if (config.trials < 1) throw InputError("evaluate: trials must be >= 1");
  model.check_compatible(inst.num_sets());

  std::optional<std::vector<std::vector<SetId>>> selection;
  if (spec.id == "nonadaptive-kset") selection = nonadaptive_kset_select(inst, spec.rounds, spec.s);

  std::optional<OmniscientEstimate> exact;
  if (resolve(config.omni, inst.num_sets()) == OmniMode::Exact) {
    exact = omniscient_kset(inst, model, OmniMode::Exact);
  }

  std::vector<double> a(config.trials), o(config.trials, 0.0);
  std::vector<int> loads(config.trials, 0);
  parallel_for(config.trials, config.threads, [&](int t) {
    auto real = sample_realization(model, inst.num_sets(), trial_seed(config.base_seed, t));
    if (!exact) o[t] = realized_optimum(inst, real.bits()).size();
    QueryOracle oracle(inst, std::move(real));
    const RunReport rep = selection ? nonadaptive_kset(inst, oracle, *selection, spec.s)
                                    : adaptive_kset(inst, oracle, spec.rounds, spec.s);
    a[t] = rep.size();
    loads[t] = rep.max_load;
  });
  return finish(spec, family, params, p_or_f_of(model), a, o, exact, *std::max_element(loads.begin(), loads.end()));
}

PairedStats paired_ratio(std::span<const double> a, std::span<const double> o, std::optional<double> exact_o) {
  if (!exact_o && a.size() != o.size()) throw InputError("paired_ratio: sample sizes differ");
  PairedStats st;
  const std::size_t n = a.size();
  st.mean_a = mean_of(a);
  st.se_a = se_of(a, st.mean_a);
  if (exact_o) {
    st.mean_o = *exact_o;
  } else {
    st.mean_o = mean_of(o);
    st.se_o = se_of(o, st.mean_o);
  }
  if (!(st.mean_o > 0)) {
    st.ratio = std::numeric_limits<double>::quiet_NaN();
    st.ci = std::numeric_limits<double>::quiet_NaN();
    return st;
  }
  st.ratio = st.mean_a / st.mean_o;
  std::vector<double> d(n);
  for (std::size_t t = 0; t < n; ++t) d[t] = a[t] - st.ratio * (exact_o ? *exact_o : o[t]);
  st.ci = kZ95 * se_of(d, mean_of(d)) / st.mean_o;
  return st;
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(8);
  os << x;
  return os.str();
}

std::string mode_name(OmniMode mode) {
  switch (mode) {
    case OmniMode::Auto: return "auto";
    case OmniMode::Exact: return "exact";
    case OmniMode::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

std::string csv_header() { return "family,params,algorithm,R,p_or_f,trials,alg_mean,omni_mean,omni_se,ratio,ci"; }

std::string csv_row(const RatioRecord& r) {
  std::ostringstream os;
  os << r.family << ',' << r.params << ',' << r.algorithm << ',' << r.rounds << ',' << r.p_or_f << ',' << r.trials
     << ',' << format_number(r.alg_mean) << ',' << format_number(r.omni_mean) << ',' << format_number(r.omni_se)
     << ',' << format_number(r.ratio) << ',' << format_number(r.ci);
  return os.str();
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(threads, n); ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace stochmatch
