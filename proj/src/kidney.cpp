#include "stochmatch/kidney.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "stochmatch/rng.hpp"

namespace stochmatch {

namespace {

template <std::size_t N>
int draw_index(const std::array<double, N>& weights, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(N - 1);
}

template <std::size_t N>
void check_distribution(const std::array<double, N>& w, const char* what) {
  double sum = 0;
  for (double x : w) {
    if (!(x >= 0 && x <= 1)) throw InputError(std::string(what) + ": entries must lie in [0,1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw InputError(std::string(what) + ": entries must sum to 1");
}

// Per-trial outcome sizes, indexed [f][R].
struct TrialTable {
  std::vector<int> omni;               // per f
  std::vector<std::vector<int>> alg;   // per f, per R
  std::vector<int> max_load;           // per R: most queried sets sharing one pair
};

}  // namespace

std::string to_string(BloodType b) {
  static const char* names[] = {"O", "A", "B", "AB"};
  return names[static_cast<int>(b)];
}

std::string to_string(PraClass c) {
  static const char* names[] = {"low", "medium", "high"};
  return names[static_cast<int>(c)];
}

bool abo_compatible(BloodType donor, BloodType patient) {
  if (donor == BloodType::O || patient == BloodType::AB) return true;
  return donor == patient;
}

void KidneyParams::validate() const {
  check_distribution(blood_freq, "blood-type frequencies");
  check_distribution(pra_freq, "PRA class frequencies");
  for (double x : pra_fail) {
    if (!(x >= 0 && x <= 1)) throw InputError("PRA failure rates must lie in [0,1]");
  }
}

PairPool gen_pool(int n, std::uint64_t seed, const KidneyParams& params) {
  if (n < 1) throw InputError("gen_pool: n must be >= 1");
  params.validate();
  PairPool pool;
  pool.seed = seed;
  pool.params = params;
  Rng rng = Rng::split(seed, 11);
  const long long limit = 1000LL * n + 1000;
  while (pool.size() < n) {
    if (pool.drawn >= limit) throw InputError("gen_pool: parameters almost never produce incompatible pairs");
    PatientDonorPair pair;
    pair.patient = static_cast<BloodType>(draw_index(params.blood_freq, rng));
    pair.donor = static_cast<BloodType>(draw_index(params.blood_freq, rng));
    pair.pra = static_cast<PraClass>(draw_index(params.pra_freq, rng));
    const bool positive_crossmatch = rng.bernoulli(params.pra_fail[static_cast<int>(pair.pra)]);
    ++pool.drawn;
    ++pool.drawn_patient_blood[static_cast<int>(pair.patient)];
    ++pool.drawn_donor_blood[static_cast<int>(pair.donor)];
    if (!abo_compatible(pair.donor, pair.patient) || positive_crossmatch) pool.pairs.push_back(pair);
  }
  return pool;
}

bool CompatGraph::has_arc(int u, int v) const { return std::binary_search(out[u].begin(), out[u].end(), v); }

CompatGraph build_compat(const PairPool& pool) {
  CompatGraph g;
  g.n = pool.size();
  g.out.resize(g.n);
  Rng rng = Rng::split(pool.seed, 12);
  for (int u = 0; u < g.n; ++u) {
    for (int v = 0; v < g.n; ++v) {
      if (u == v) continue;
      const auto& donor = pool.pairs[u];
      const auto& patient = pool.pairs[v];
      if (!abo_compatible(donor.donor, patient.patient)) continue;
      if (!rng.bernoulli(1.0 - pool.params.pra_fail[static_cast<int>(patient.pra)])) continue;
      g.arcs.emplace_back(u, v);
      g.out[u].push_back(v);
    }
  }
  return g;
}

std::vector<double> CycleSets::probabilities(double f) const {
  if (!(f >= 0 && f <= 1)) throw InputError("failure rate f must lie in [0,1]");
  std::vector<double> p(lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) p[i] = std::pow(1.0 - f, lengths[i]);
  return p;
}

CycleSets enumerate_cycles(const CompatGraph& compat, int k_max) {
  if (k_max != 2 && k_max != 3) throw InputError("enumerate_cycles: k_max must be 2 or 3");
  CycleSets out;
  std::vector<std::vector<int>> sets;
  for (int u = 0; u < compat.n; ++u) {
    for (int v : compat.out[u]) {
      if (v > u && compat.has_arc(v, u)) {
        out.cycles.push_back({u, v});
        out.lengths.push_back(2);
      }
    }
  }
  if (k_max == 3) {
    for (int u = 0; u < compat.n; ++u) {
      for (int v : compat.out[u]) {
        if (v <= u) continue;
        for (int w : compat.out[v]) {
          if (w <= u || w == v) continue;
          if (compat.has_arc(w, u)) {
            out.cycles.push_back({u, v, w});
            out.lengths.push_back(3);
          }
        }
      }
    }
  }
  for (const auto& c : out.cycles) sets.push_back(c);
  out.instance = KSetInstance(compat.n, std::move(sets), k_max, true);
  return out;
}

void write_pool(std::ostream& out, const PairPool& pool) {
  out << "# generator=simplified-pool seed=" << pool.seed << " drawn=" << pool.drawn << '\n';
  out << "# blood_freq=" << pool.params.blood_freq[0] << ',' << pool.params.blood_freq[1] << ','
      << pool.params.blood_freq[2] << ',' << pool.params.blood_freq[3] << '\n';
  out << "# pra_freq=" << pool.params.pra_freq[0] << ',' << pool.params.pra_freq[1] << ',' << pool.params.pra_freq[2]
      << " pra_fail=" << pool.params.pra_fail[0] << ',' << pool.params.pra_fail[1] << ','
      << pool.params.pra_fail[2] << '\n';
  out << pool.size() << '\n';
  for (const auto& p : pool.pairs) out << to_string(p.patient) << ' ' << to_string(p.donor) << ' ' << to_string(p.pra) << '\n';
}

void KidneyConfig::validate() const {
  if (n < 1) throw InputError("kidney: n must be >= 1");
  if (k_max != 2 && k_max != 3) throw InputError("kidney: k_max must be 2 or 3");
  if (trials < 1) throw InputError("kidney: trials must be >= 1");
  if (s < 1) throw InputError("kidney: s must be >= 1");
  if (f_grid.empty() || r_grid.empty()) throw InputError("kidney: empty f or R grid");
  for (double f : f_grid) {
    if (!(f >= 0 && f <= 1)) throw InputError("kidney: f must lie in [0,1]");
  }
  for (int r : r_grid) {
    if (r < 0) throw InputError("kidney: R must be >= 0");
  }
  params.validate();
}

std::vector<KidneyRecord> run_experiment(const KidneyConfig& config) {
  config.validate();
  const int r_max = *std::max_element(config.r_grid.begin(), config.r_grid.end());
  const int nf = static_cast<int>(config.f_grid.size());
  std::vector<TrialTable> tables(config.trials);

  parallel_for(config.trials, config.threads, [&](int t) {
    const std::uint64_t seed = trial_seed(config.seed, t);
    const PairPool pool = gen_pool(config.n, seed, config.params);
    const CycleSets cycles = enumerate_cycles(build_compat(pool), config.k_max);
    const KSetInstance& inst = cycles.instance;

    // Planned before any realization is drawn: packing j is queried when R >= j.
    std::vector<std::vector<SetId>> packings;
    Graph two_cycles;
    if (config.k_max == 2) {
      std::vector<std::array<VertexId, 2>> edges;
      for (const auto& c : cycles.cycles) edges.push_back({c[0], c[1]});
      two_cycles = Graph(config.n, std::move(edges));
      packings = nonadaptive_select(two_cycles, r_max + 1).per_round;
    } else {
      packings = nonadaptive_kset_select(inst, r_max + 1, config.s);
    }
    std::vector<int> first_round(inst.num_sets(), r_max + 1);
    for (int j = 0; j <= r_max; ++j) {
      for (SetId a : packings[j]) first_round[a] = j;
    }
    auto best = [&](std::span<const std::uint8_t> usable) {
      if (config.k_max == 2) {
        std::vector<EdgeId> edges;
        for (EdgeId e = 0; e < two_cycles.num_edges(); ++e) {
          if (usable[e]) edges.push_back(e);
        }
        return max_matching(two_cycles, edges).size();
      }
      return static_cast<int>(realized_optimum(inst, usable).size());
    };

    TrialTable& table = tables[t];
    table.omni.resize(nf);
    table.alg.assign(nf, std::vector<int>(config.r_grid.size()));
    for (int fi = 0; fi < nf; ++fi) {
      const auto probs = cycles.probabilities(config.f_grid[fi]);
      Rng rng = Rng::split(seed, 100 + fi);
      std::vector<std::uint8_t> exists(inst.num_sets());
      for (SetId a = 0; a < inst.num_sets(); ++a) exists[a] = rng.bernoulli(probs[a]);
      table.omni[fi] = best(exists);
      for (std::size_t ri = 0; ri < config.r_grid.size(); ++ri) {
        std::vector<std::uint8_t> usable(inst.num_sets());
        for (SetId a = 0; a < inst.num_sets(); ++a) usable[a] = exists[a] && first_round[a] <= config.r_grid[ri];
        table.alg[fi][ri] = best(usable);
      }
    }
    for (int r : config.r_grid) {
      std::vector<int> load(config.n, 0);
      for (int j = 0; j <= r; ++j) {
        for (SetId a : packings[j]) {
          for (int x : inst.set(a)) ++load[x];
        }
      }
      table.max_load.push_back(*std::max_element(load.begin(), load.end()));
    }
  });

  const std::string family = config.k_max == 2 ? "kidney-2cycle" : "kidney-23cycle";
  std::string params = "n=" + std::to_string(config.n) + ";k_max=" + std::to_string(config.k_max);
  if (config.k_max == 3) params += ";s=" + std::to_string(config.s);
  if (config.include_empty) params += ";include_empty=1";

  std::vector<KidneyRecord> records;
  for (int fi = 0; fi < nf; ++fi) {
    for (std::size_t ri = 0; ri < config.r_grid.size(); ++ri) {
      std::vector<double> ratios, alg, omni;
      int max_load = 0;
      for (const auto& table : tables) {
        alg.push_back(table.alg[fi][ri]);
        omni.push_back(table.omni[fi]);
        max_load = std::max(max_load, table.max_load[ri]);
        if (table.omni[fi] > 0) {
          ratios.push_back(static_cast<double>(table.alg[fi][ri]) / table.omni[fi]);
        } else if (config.include_empty) {
          ratios.push_back(1.0);
        }
      }
      KidneyRecord rec;
      rec.f = config.f_grid[fi];
      rec.k_max = config.k_max;
      rec.n = config.n;
      rec.used_trials = static_cast<int>(ratios.size());
      RatioRecord& r = rec.ratio;
      r.family = family;
      r.params = params;
      r.algorithm = "nonadaptive";
      r.rounds = config.r_grid[ri];
      r.p_or_f = format_number(rec.f);
      r.trials = config.trials;
      const auto a_stats = paired_ratio(alg, omni);
      r.alg_mean = a_stats.mean_a;
      r.alg_se = a_stats.se_a;
      r.omni_mean = a_stats.mean_o;
      r.omni_se = a_stats.se_o;
      r.omni_mode = OmniMode::MonteCarlo;
      r.max_load = max_load;
      if (ratios.empty()) {
        r.ratio = std::nan("");
        r.ci = std::nan("");
      } else {
        const auto st = paired_ratio(ratios, {}, 1.0);
        r.ratio = st.mean_a;
        r.ci = 1.96 * st.se_a;
      }
      r.above_one = r.ratio > 1.0;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::string kidney_csv_header() { return csv_header() + ",f,k_max,n"; }

std::string kidney_csv_row(const KidneyRecord& r) {
  return csv_row(r.ratio) + ',' + format_number(r.f) + ',' + std::to_string(r.k_max) + ',' + std::to_string(r.n);
}

}  // namespace stochmatch
