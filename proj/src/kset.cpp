#include "stochmatch/kset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "stochmatch/exact.hpp"

namespace stochmatch {

KSetInstance::KSetInstance(int universe_size, std::vector<std::vector<int>> sets, int k, bool allow_parallel_sets)
    : universe_(universe_size), k_(k), sets_(std::move(sets)) {
  if (universe_size < 0) throw InputError("k-set instance: negative universe size");
  if (k < 1) throw InputError("k-set instance: k must be >= 1");
  std::vector<int> counts(universe_ + 1, 0);
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    auto& s = sets_[i];
    if (s.empty()) throw InputError("k-set instance: set " + std::to_string(i) + " is empty");
    if (static_cast<int>(s.size()) > k) {
      throw InputError("k-set instance: set " + std::to_string(i) + " has more than k=" + std::to_string(k) +
                       " elements");
    }
    std::sort(s.begin(), s.end());
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] < 0 || s[j] >= universe_) {
        throw InputError("k-set instance: element " + std::to_string(s[j]) + " outside the universe");
      }
      if (j > 0 && s[j] == s[j - 1]) {
        throw InputError("k-set instance: set " + std::to_string(i) + " repeats element " + std::to_string(s[j]));
      }
      ++counts[s[j] + 1];
    }
  }
  if (!allow_parallel_sets) {
    std::vector<std::size_t> order(sets_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sets_[a] < sets_[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (sets_[order[i]] == sets_[order[i - 1]]) {
        throw InputError("k-set instance: duplicate set " + std::to_string(order[i]));
      }
    }
  }
  offsets_.assign(universe_ + 1, 0);
  for (int x = 0; x < universe_; ++x) offsets_[x + 1] = offsets_[x] + counts[x + 1];
  by_element_.resize(offsets_.back());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (SetId s = 0; s < num_sets(); ++s) {
    for (int x : sets_[s]) by_element_[fill[x]++] = s;
  }
}

KSetInstance KSetInstance::from_graph(const Graph& g) {
  std::vector<std::vector<int>> sets;
  sets.reserve(g.num_edges());
  for (const auto& [u, v] : g.edges()) sets.push_back({u, v});
  return KSetInstance(g.num_vertices(), std::move(sets), 2);
}

bool KSetInstance::intersects(SetId a, SetId b) const {
  const auto& x = sets_[a];
  const auto& y = sets_[b];
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] == y[j]) return true;
    if (x[i] < y[j]) ++i; else ++j;
  }
  return false;
}

bool is_packing(const KSetInstance& inst, std::span<const SetId> sets) {
  std::vector<std::uint8_t> used(inst.universe_size(), 0);
  for (SetId s : sets) {
    if (s < 0 || s >= inst.num_sets()) return false;
    for (int x : inst.set(s)) {
      if (used[x]) return false;
      used[x] = 1;
    }
  }
  return true;
}

namespace {

struct OracleSearch {
  const KSetInstance& inst;
  std::vector<std::uint8_t> used;
  std::vector<SetId> current, best;

  void run(SetId next) {
    if (current.size() + (inst.num_sets() - next) <= best.size()) return;
    if (next == inst.num_sets()) {
      best = current;
      return;
    }
    const auto s = inst.set(next);
    if (std::none_of(s.begin(), s.end(), [&](int x) { return used[x]; })) {
      for (int x : s) used[x] = 1;
      current.push_back(next);
      run(next + 1);
      current.pop_back();
      for (int x : s) used[x] = 0;
    }
    run(next + 1);
  }
};

// Searches for one augmenting structure with |C| <= s among alive sets.
// Grows C from its lowest-index set through sets meeting the current D, which
// reaches every connected structure; any improving structure contains one.
class StructureSearch {
 public:
  StructureSearch(const KSetInstance& inst, int s) : inst_(inst), s_(s) {
    alive_.assign(inst.num_sets(), 0);
    in_b_.assign(inst.num_sets(), 0);
    in_c_.assign(inst.num_sets(), 0);
    d_count_.assign(inst.num_sets(), 0);
    owner_.assign(inst.universe_size(), -1);
    c_elem_.assign(inst.universe_size(), 0);
  }

  void set_alive(std::span<const SetId> active) {
    std::fill(alive_.begin(), alive_.end(), 0);
    for (SetId a : active) alive_[a] = 1;
  }
  void kill(SetId a) { alive_[a] = 0; }

  void set_packing(std::span<const SetId> b) {
    std::fill(in_b_.begin(), in_b_.end(), 0);
    std::fill(owner_.begin(), owner_.end(), -1);
    for (SetId a : b) {
      in_b_[a] = 1;
      for (int x : inst_.set(a)) owner_[x] = a;
    }
  }

  bool find(AugStructure& out) {
    for (SetId c1 = 0; c1 < inst_.num_sets(); ++c1) {
      if (!alive_[c1] || in_b_[c1]) continue;
      first_ = c1;
      push(c1);
      const bool ok = extend();
      if (ok) {
        out.add = c_;
        out.remove = d_;
        std::sort(out.add.begin(), out.add.end());
        std::sort(out.remove.begin(), out.remove.end());
      }
      while (!c_.empty()) pop(c_.back());
      if (ok) return true;
    }
    return false;
  }

 private:
  void push(SetId c) {
    in_c_[c] = 1;
    c_.push_back(c);
    for (int x : inst_.set(c)) {
      c_elem_[x] = 1;
      const SetId o = owner_[x];
      if (o >= 0 && d_count_[o]++ == 0) d_.push_back(o);
    }
  }

  void pop(SetId c) {
    in_c_[c] = 0;
    c_.pop_back();
    for (int x : inst_.set(c)) {
      c_elem_[x] = 0;
      const SetId o = owner_[x];
      if (o >= 0 && --d_count_[o] == 0) d_.erase(std::find(d_.begin(), d_.end(), o));
    }
  }

  bool extend() {
    if (c_.size() > d_.size()) return true;
    if (static_cast<int>(c_.size()) >= s_ || static_cast<int>(d_.size()) + 1 > s_) return false;
    std::vector<SetId> candidates;
    for (SetId d : d_) {
      for (int x : inst_.set(d)) {
        for (SetId y : inst_.containing(x)) {
          if (y <= first_ || !alive_[y] || in_b_[y] || in_c_[y]) continue;
          const auto ys = inst_.set(y);
          if (std::any_of(ys.begin(), ys.end(), [&](int e) { return c_elem_[e]; })) continue;
          candidates.push_back(y);
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (SetId y : candidates) {
      push(y);
      const bool ok = extend();
      if (ok) return true;  // find() copies the stack before unwinding it
      pop(y);
    }
    return false;
  }

  const KSetInstance& inst_;
  int s_;
  SetId first_ = 0;
  std::vector<std::uint8_t> alive_, in_b_, in_c_;
  std::vector<int> d_count_;
  std::vector<SetId> owner_;
  std::vector<std::uint8_t> c_elem_;
  std::vector<SetId> c_, d_;
};

std::vector<SetId> all_sets(const KSetInstance& inst) {
  std::vector<SetId> out(inst.num_sets());
  for (SetId a = 0; a < inst.num_sets(); ++a) out[a] = a;
  return out;
}

void check_s(int s) {
  if (s < 1) throw InputError("structure size s must be >= 1");
}

std::vector<SetId> apply_structure(std::span<const SetId> b, const AugStructure& st) {
  std::vector<SetId> out;
  for (SetId a : b) {
    if (!std::binary_search(st.remove.begin(), st.remove.end(), a)) out.push_back(a);
  }
  out.insert(out.end(), st.add.begin(), st.add.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<SetId> packing_oracle(const KSetInstance& inst) {
  if (inst.num_sets() > kPackingOracleSetCap) {
    throw InstanceTooLarge("packing_oracle: at most " + std::to_string(kPackingOracleSetCap) + " sets, got " +
                           std::to_string(inst.num_sets()));
  }
  OracleSearch search{inst, std::vector<std::uint8_t>(inst.universe_size(), 0), {}, {}};
  search.run(0);
  return search.best;
}

std::vector<SetId> local_search_packing(const KSetInstance& inst, int s) {
  return local_search_packing(inst, s, all_sets(inst));
}

std::vector<SetId> local_search_packing(const KSetInstance& inst, int s, std::span<const SetId> active) {
  check_s(s);
  std::vector<SetId> order(active.begin(), active.end());
  std::sort(order.begin(), order.end());
  std::vector<std::uint8_t> used(inst.universe_size(), 0);
  std::vector<SetId> b;
  for (SetId a : order) {
    const auto set = inst.set(a);
    if (std::any_of(set.begin(), set.end(), [&](int x) { return used[x]; })) continue;
    for (int x : set) used[x] = 1;
    b.push_back(a);
  }
  StructureSearch search(inst, s);
  search.set_alive(order);
  for (;;) {
    search.set_packing(b);
    AugStructure st;
    if (!search.find(st)) break;
    b = apply_structure(b, st);
  }
  return b;
}

std::vector<AugStructure> find_aug_structures(const KSetInstance& inst, std::span<const SetId> b, int s) {
  return find_aug_structures(inst, b, s, all_sets(inst));
}

std::vector<AugStructure> find_aug_structures(const KSetInstance& inst, std::span<const SetId> b, int s,
                                              std::span<const SetId> active) {
  check_s(s);
  if (!is_packing(inst, b)) throw InputError("find_aug_structures: B is not a packing");
  StructureSearch search(inst, s);
  search.set_alive(active);
  search.set_packing(b);
  std::vector<std::uint8_t> in_b(inst.num_sets(), 0);
  for (SetId a : b) in_b[a] = 1;
  std::vector<AugStructure> out;
  AugStructure st;
  while (search.find(st)) {
    for (SetId c : st.add) {
      for (int x : inst.set(c)) {
        for (SetId y : inst.containing(x)) {
          if (!in_b[y]) search.kill(y);
        }
      }
    }
    out.push_back(std::move(st));
    st = {};
  }
  return out;
}

double local_search_guarantee(int k, int s) {
  if (k < 2) throw InputError("local_search_guarantee: k must be >= 2");
  check_s(s);
  if (k == 2) return static_cast<double>(s) / (s + 1);
  const int r = (s + 1) / 2;
  const double q = std::pow(static_cast<double>(k - 1), r);
  if (s % 2 == 1) return (2.0 * q - k) / (k * q - k);
  return (2.0 * q - 2.0) / (k * q - 2.0);
}

double local_search_eta(int k, int s) { return 2.0 / k - local_search_guarantee(k, s); }

RunReport adaptive_kset(const KSetInstance& inst, QueryOracle& oracle, int rounds, int s) {
  check_s(s);
  if (rounds < 0) throw InputError("adaptive_kset: rounds must be >= 0");
  RunReport report;
  std::vector<std::uint8_t> alive(inst.num_sets(), 1);
  std::vector<SetId> b;
  bool converged = false;
  for (int r = 1; r <= rounds; ++r) {
    RoundRecord rec;
    rec.round = r;
    if (!converged) {
      std::vector<SetId> active;
      for (SetId a = 0; a < inst.num_sets(); ++a) {
        if (alive[a]) active.push_back(a);
      }
      const auto structures = find_aug_structures(inst, b, s, active);
      std::vector<SetId> add, remove;
      for (const auto& st : structures) {
        bool all_exist = true;
        for (SetId c : st.add) {
          const bool fresh = !oracle.was_queried(c);
          const bool exists = oracle.query(c);
          if (fresh) {
            rec.queried.push_back(c);
            if (exists) ++rec.exists;
          }
          if (!exists) {
            alive[c] = 0;
            all_exist = false;
          }
        }
        if (all_exist) {
          add.insert(add.end(), st.add.begin(), st.add.end());
          remove.insert(remove.end(), st.remove.begin(), st.remove.end());
        }
      }
      std::sort(remove.begin(), remove.end());
      std::vector<SetId> next;
      for (SetId a : b) {
        if (!std::binary_search(remove.begin(), remove.end(), a)) next.push_back(a);
      }
      next.insert(next.end(), add.begin(), add.end());
      std::sort(next.begin(), next.end());
      b = std::move(next);
      converged = structures.empty();
    }
    rec.solution_size = static_cast<int>(b.size());
    report.total_queries += static_cast<int>(rec.queried.size());
    report.rounds.push_back(std::move(rec));
  }
  report.solution = b;
  report.rounds_executed = rounds;
  report.max_load = oracle.max_load();
  return report;
}

std::vector<std::vector<SetId>> nonadaptive_kset_select(const KSetInstance& inst, int rounds, int s) {
  check_s(s);
  if (rounds < 1) throw InputError("nonadaptive_kset: rounds must be >= 1");
  std::vector<std::uint8_t> removed(inst.num_sets(), 0);
  std::vector<std::vector<SetId>> out;
  for (int r = 0; r < rounds; ++r) {
    std::vector<SetId> active;
    for (SetId a = 0; a < inst.num_sets(); ++a) {
      if (!removed[a]) active.push_back(a);
    }
    auto packing = local_search_packing(inst, s, active);
    for (SetId a : packing) removed[a] = 1;
    out.push_back(std::move(packing));
  }
  return out;
}

RunReport nonadaptive_kset(const KSetInstance& inst, QueryOracle& oracle, int rounds, int s) {
  return nonadaptive_kset(inst, oracle, nonadaptive_kset_select(inst, rounds, s), s);
}

RunReport nonadaptive_kset(const KSetInstance& inst, QueryOracle& oracle,
                           const std::vector<std::vector<SetId>>& selection, int s) {
  check_s(s);
  if (selection.empty()) throw InputError("nonadaptive_kset: empty selection");
  RunReport report;
  std::vector<SetId> q;
  {
    RoundRecord rec;
    rec.round = 1;
    for (SetId a : selection[0]) {
      const bool fresh = !oracle.was_queried(a);
      const bool exists = oracle.query(a);
      if (fresh) {
        rec.queried.push_back(a);
        if (exists) ++rec.exists;
      }
      if (exists) q.push_back(a);
    }
    std::sort(q.begin(), q.end());
    rec.solution_size = static_cast<int>(q.size());
    report.total_queries += static_cast<int>(rec.queried.size());
    report.rounds.push_back(std::move(rec));
  }
  for (std::size_t r = 1; r < selection.size(); ++r) {
    RoundRecord rec;
    rec.round = static_cast<int>(r) + 1;
    std::vector<SetId> active(q);
    active.insert(active.end(), selection[r].begin(), selection[r].end());
    std::sort(active.begin(), active.end());
    std::vector<SetId> add, remove;
    for (const auto& st : find_aug_structures(inst, q, s, active)) {
      bool all_exist = true;
      for (SetId c : st.add) {
        const bool fresh = !oracle.was_queried(c);
        const bool exists = oracle.query(c);
        if (fresh) {
          rec.queried.push_back(c);
          if (exists) ++rec.exists;
        }
        all_exist = all_exist && exists;
      }
      if (all_exist) {
        add.insert(add.end(), st.add.begin(), st.add.end());
        remove.insert(remove.end(), st.remove.begin(), st.remove.end());
      }
    }
    std::sort(remove.begin(), remove.end());
    std::vector<SetId> next;
    for (SetId a : q) {
      if (!std::binary_search(remove.begin(), remove.end(), a)) next.push_back(a);
    }
    next.insert(next.end(), add.begin(), add.end());
    std::sort(next.begin(), next.end());
    q = std::move(next);
    rec.solution_size = static_cast<int>(q.size());
    report.total_queries += static_cast<int>(rec.queried.size());
    report.rounds.push_back(std::move(rec));
  }
  report.solution = q;
  report.rounds_executed = static_cast<int>(selection.size());
  report.max_load = oracle.max_load();
  return report;
}

bool kset_subadditivity_check(const KSetInstance& inst, const ProbModel& model, const std::vector<bool>& in_first) {
  if (static_cast<int>(in_first.size()) != inst.num_sets()) throw InputError("subadditivity: partition size mismatch");
  const auto conflicts = conflict_masks(inst);
  model.check_compatible(inst.num_sets());
  std::vector<double> probs(inst.num_sets());
  for (SetId a = 0; a < inst.num_sets(); ++a) probs[a] = model.item_prob(a);
  const auto f = expected_optimum_all_subsets(conflicts, probs);
  std::uint32_t first = 0;
  for (SetId a = 0; a < inst.num_sets(); ++a) {
    if (in_first[a]) first |= 1u << a;
  }
  const std::uint32_t full = static_cast<std::uint32_t>(f.size() - 1);
  return f[full] <= f[first] + f[full ^ first] + 1e-12;
}

KSetFile read_kset(std::istream& in) {
  std::string line;
  if (!next_data_line(in, line)) throw InputError("k-set file: missing header");
  std::istringstream header(line);
  long long universe = -1, count = -1, k = -1;
  if (!(header >> universe >> count >> k) || universe < 0 || count < 0 || k < 1) {
    throw InputError("k-set file: header must be `|U| |A| k`");
  }
  std::vector<std::vector<int>> sets;
  std::vector<double> probs;
  int with_prob = 0;
  for (long long i = 0; i < count; ++i) {
    if (!next_data_line(in, line)) throw InputError("k-set file: expected " + std::to_string(count) + " sets");
    std::istringstream row(line);
    std::vector<int> set;
    double prob = -1;
    std::string tok;
    while (row >> tok) {
      if (tok.find('.') != std::string::npos) {
        if (prob >= 0 || !(std::istringstream(tok) >> prob)) throw InputError("k-set file: bad token `" + tok + "`");
        continue;
      }
      if (prob >= 0) throw InputError("k-set file: probability must be the last token");
      std::size_t used = 0;
      int x = 0;
      try {
        x = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw InputError("k-set file: bad element `" + tok + "`");
      set.push_back(x);
    }
    if (prob >= 0) ++with_prob;
    probs.push_back(prob);
    sets.push_back(std::move(set));
  }
  if (with_prob != 0 && with_prob != count) throw InputError("k-set file: either every set or none carries a probability");
  KSetFile out{KSetInstance(static_cast<int>(universe), std::move(sets), static_cast<int>(k)), {}};
  if (with_prob > 0) {
    for (double p : probs) {
      if (p > 1.0) throw InputError("k-set file: probability above 1");
    }
    out.probs = std::move(probs);
  }
  return out;
}

KSetFile read_kset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open k-set file `" + path + "`");
  return read_kset(in);
}

void write_kset(std::ostream& out, const KSetInstance& inst, std::span<const double> probs) {
  out << inst.universe_size() << ' ' << inst.num_sets() << ' ' << inst.k() << '\n';
  for (SetId a = 0; a < inst.num_sets(); ++a) {
    const auto s = inst.set(a);
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << s[i];
    if (!probs.empty()) {
      std::ostringstream p;
      p.precision(17);
      p << std::showpoint << probs[a];
      out << ' ' << p.str();
    }
    out << '\n';
  }
}

}  // namespace stochmatch
