#pragma once

#include <iosfwd>
#include <vector>

namespace stochmatch {

struct RoundRecord {
  int round = 0;
  std::vector<int> queried;  // items first queried in this round, in query order
  int exists = 0;            // how many of them exist
  int solution_size = 0;     // |M_r| (|B_r|) after the round
};

/// Outcome of one query-algorithm run against an oracle.
struct RunReport {
  std::vector<int> solution;  // final matching edges / packing sets, ascending
  std::vector<RoundRecord> rounds;
  int max_load = 0;           // max distinct queried items per vertex (element)
  int rounds_executed = 0;
  int total_queries = 0;

  int size() const { return static_cast<int>(solution.size()); }
};

/// One line per round: `round queries exists size`, preceded by a comment header.
void write_report(std::ostream& out, const RunReport& report);

}  // namespace stochmatch
