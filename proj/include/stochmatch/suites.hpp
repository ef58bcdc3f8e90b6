#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stochmatch/bench.hpp"
#include "stochmatch/kidney.hpp"

namespace stochmatch {

struct SuiteOptions {
  int trials = 100;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Layered example31 graph: the scheduled naive algorithm with R = ceil(2 ln n / p)
/// against the adaptive algorithm with `adaptive_rounds` rounds, on the same
/// realizations.
std::vector<RatioRecord> suite_example31(int t, double p, int adaptive_rounds, const SuiteOptions& opt);

/// Layered figure3 graph with R = ceil(log2 n): adversarial and default non-adaptive selections.
std::vector<RatioRecord> suite_figure3(int t, double p, const SuiteOptions& opt);

/// Random-neighbour naive algorithm with b = floor(sqrt t) on appendixA graphs.
std::vector<RatioRecord> suite_appendix_a(const std::vector<int>& ts, double beta, double p, const SuiteOptions& opt);

struct LemmaB1Row {
  int n = 0;
  double p = 0;
  OmniscientEstimate estimate;
  double bound = 0;  // n - (10 / ln(1/(1-p))) ln n
};
std::vector<LemmaB1Row> suite_lemma_b1(const std::vector<int>& ns, const std::vector<double>& ps,
                                       const SuiteOptions& opt);
RatioRecord lemma_b1_record(const LemmaB1Row& row);

/// Rounds used by the example31 and figure3 suites.
int example31_naive_rounds(int t, double p);
int figure3_rounds(int t);

}  // namespace stochmatch
