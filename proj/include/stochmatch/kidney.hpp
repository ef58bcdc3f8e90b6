#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "stochmatch/bench.hpp"
#include "stochmatch/kset.hpp"

namespace stochmatch {

enum class BloodType { O = 0, A = 1, B = 2, AB = 3 };
enum class PraClass { Low = 0, Medium = 1, High = 2 };

std::string to_string(BloodType b);
std::string to_string(PraClass c);

/// Donor blood type may give to patient blood type.
bool abo_compatible(BloodType donor, BloodType patient);

/// Generator constants; defaults approximate the US population.
struct KidneyParams {
  std::array<double, 4> blood_freq{0.44, 0.42, 0.10, 0.04};  // O, A, B, AB
  std::array<double, 3> pra_freq{0.70, 0.20, 0.10};          // low, medium, high
  std::array<double, 3> pra_fail{0.05, 0.45, 0.90};          // crossmatch failure rate per class

  void validate() const;
};

struct PatientDonorPair {
  BloodType patient;
  BloodType donor;
  PraClass pra;
};

struct PairPool {
  std::vector<PatientDonorPair> pairs;
  std::uint64_t seed = 0;
  KidneyParams params;
  /// Every sampled candidate, including compatible pairs that were discarded.
  int drawn = 0;
  std::array<int, 4> drawn_patient_blood{};
  std::array<int, 4> drawn_donor_blood{};

  int size() const { return static_cast<int>(pairs.size()); }
};

/// Samples candidate pairs until `n` incompatible ones (ABO-incompatible or a
/// positive crossmatch draw) have been retained.
PairPool gen_pool(int n, std::uint64_t seed, const KidneyParams& params = {});

/// Directed compatibility graph over pair indices.
struct CompatGraph {
  int n = 0;
  std::vector<std::pair<int, int>> arcs;  // (u, v): donor of u can give to patient of v; sorted
  std::vector<std::vector<int>> out;      // successors, ascending

  bool has_arc(int u, int v) const;
};

/// Arc (u, v) iff donor u is ABO-compatible with patient v and a crossmatch
/// draw with success probability 1 - pra_fail[class of v] succeeds.
CompatGraph build_compat(const PairPool& pool);

/// Directed cycles of length 2..k_max as sets of pair indices. 2-cycles come
/// first. Both orientations of a 3-cycle are distinct exchanges over the same
/// pairs and are both listed.
struct CycleSets {
  KSetInstance instance;
  std::vector<int> lengths;
  std::vector<std::vector<int>> cycles;  // pair order along each cycle, smallest first

  /// (1 - f)^length per set.
  std::vector<double> probabilities(double f) const;
};
CycleSets enumerate_cycles(const CompatGraph& compat, int k_max);

void write_pool(std::ostream& out, const PairPool& pool);

struct KidneyConfig {
  int n = 250;
  std::vector<double> f_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<int> r_grid{0, 1, 2, 3, 4, 5};
  int k_max = 2;
  int trials = 100;
  std::uint64_t seed = 1;
  int s = 2;  // local-search structure size (k_max = 3)
  bool include_empty = false;
  int threads = 1;
  KidneyParams params;

  void validate() const;
};

struct KidneyRecord {
  RatioRecord ratio;  // ratio = mean of per-trial ratios over the used trials
  double f = 0;
  int k_max = 2;
  int n = 0;
  int used_trials = 0;  // trials whose omniscient solution was non-empty (or all, with include_empty)
};

/// For each trial: one pool, R_max + 1 disjoint packings planned once, then for
/// every f one realization shared by every R. R extra non-adaptive rounds
/// query the first R + 1 packings; R = 0 queries a single packing.
std::vector<KidneyRecord> run_experiment(const KidneyConfig& config);

std::string kidney_csv_header();
std::string kidney_csv_row(const KidneyRecord& r);

}  // namespace stochmatch
