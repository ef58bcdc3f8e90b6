// Command-line front end: generate | run | sweep | replicate.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stochmatch/bench.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/kidney.hpp"
#include "stochmatch/kset.hpp"
#include "stochmatch/match_algorithms.hpp"
#include "stochmatch/rng.hpp"
#include "stochmatch/suites.hpp"

using namespace stochmatch;

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Options {
  // instance
  std::string family;
  std::vector<std::string> params;
  std::string input;
  std::string kset_input;
  std::string model = "uniform:0.5";
  double delta = -1;
  // algorithm
  std::string alg = "adaptive";
  std::string rounds = "1";
  int budget = 0;
  int s = 3;
  int path_cap = 0;
  // experiment
  int trials = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string omni = "auto";
  std::string p_grid;
  std::string f_grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  bool include_empty = false;
  std::string out;
  std::string report;
  bool pool = false;
  double f = 0.5;
  // replicate
  std::string suite;
  std::string sizes;
  double p = 0.5;
  double beta = 0.75;
  int adaptive_rounds = 10;
};

[[noreturn]] void config_error(const std::string& message) { throw InputError(message); }

std::map<std::string, std::string> parse_params(const std::vector<std::string>& raw) {
  std::map<std::string, std::string> out;
  for (const auto& kv : raw) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) config_error("--param expects key=value, got `" + kv + "`");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, sep)) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

double to_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) config_error("not a number: `" + text + "`");
  return v;
}

int to_int(const std::string& text) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) config_error("not an integer: `" + text + "`");
  return v;
}

/// "3", "1..5" or "0,2,4".
std::vector<int> parse_int_grid(const std::string& text) {
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = to_int(text.substr(0, dots)), hi = to_int(text.substr(dots + 2));
    if (hi < lo) config_error("empty range `" + text + "`");
    std::vector<int> out;
    for (int r = lo; r <= hi; ++r) out.push_back(r);
    return out;
  }
  std::vector<int> out;
  for (const auto& tok : split(text, ',')) out.push_back(to_int(tok));
  if (out.empty()) config_error("empty list `" + text + "`");
  return out;
}

std::vector<double> parse_real_grid(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split(text, ',')) out.push_back(to_double(tok));
  if (out.empty()) config_error("empty list `" + text + "`");
  return out;
}

OmniMode parse_omni(const std::string& text) {
  if (text == "auto") return OmniMode::Auto;
  if (text == "exact") return OmniMode::Exact;
  if (text == "mc" || text == "monte-carlo") return OmniMode::MonteCarlo;
  config_error("--omni must be auto, exact or mc");
}

bool is_kidney_family(const std::string& family) {
  return family == "kidney-2cycle" || family == "kidney-23cycle";
}

/// Output stream: --out file or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) config_error("cannot write `" + path + "`");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void echo_config(std::ostream& os, const CLI::App& sub, std::uint64_t seed) {
  os << "# stochmatch " << sub.get_name() << '\n';
  os << "# seed=" << seed << '\n';
  std::istringstream cfg(sub.config_to_str(true, false));
  std::string line;
  while (std::getline(cfg, line)) {
    if (!line.empty()) os << "# " << line << '\n';
  }
}

struct GraphInstance {
  GeneratedGraph gg;
  ProbModel model = ProbModel::uniform(0.5);
};

GraphInstance load_graph(const Options& o) {
  GraphInstance inst;
  std::optional<ProbModel> from_file;
  if (!o.input.empty()) {
    std::ifstream in(o.input);
    if (!in) config_error("cannot open graph file `" + o.input + "`");
    inst.gg.graph = read_graph(in);
    inst.gg.family = "file";
    inst.gg.params["path"] = o.input;
    std::string line;
    std::streampos pos = in.tellg();
    if (next_data_line(in, line)) {
      in.clear();
      in.seekg(pos);
      from_file = read_model(in, inst.gg.graph.num_edges(), inst.gg.graph.num_vertices());
    }
  } else {
    if (o.family.empty()) config_error("give --family or --input");
    inst.gg = make_family(o.family, parse_params(o.params));
  }
  const Graph& g = inst.gg.graph;
  if (o.model == "file") {
    if (!from_file) config_error("--model file: the graph file carries no model section");
    inst.model = *from_file;
  } else if (o.model.rfind("uniform:", 0) == 0) {
    inst.model = parse_uniform_spec(o.model);
  } else if (o.model.rfind("vertex:", 0) == 0) {
    inst.model = sample_vertex_params(g.num_vertices(), parse_vertex_dist(o.model.substr(7)), Rng::split(o.seed, 3).next());
  } else if (o.model.rfind("peredge:", 0) == 0) {
    std::ifstream in(o.model.substr(8));
    if (!in) config_error("cannot open model file `" + o.model.substr(8) + "`");
    inst.model = read_model(in, g.num_edges(), g.num_vertices());
  } else {
    config_error("unknown model `" + o.model + "` (uniform:P, vertex:DIST, peredge:FILE or file)");
  }
  inst.model.check_compatible(g);
  return inst;
}

struct SetInstance {
  KSetInstance inst;
  ProbModel model = ProbModel::uniform(0.5);
  std::string family = "kset";
  std::string params;
};

SetInstance load_kset(const Options& o) {
  SetInstance out;
  KSetFile file = read_kset_file(o.kset_input);
  out.inst = std::move(file.instance);
  out.params = "path=" + o.kset_input;
  if (o.model == "file") {
    if (file.probs.empty()) config_error("--model file: the instance carries no set probabilities");
    out.model = ProbModel::per_item(file.probs);
  } else if (o.model.rfind("uniform:", 0) == 0) {
    out.model = parse_uniform_spec(o.model);
  } else {
    config_error("k-set instances take --model uniform:P or --model file");
  }
  return out;
}

AlgorithmSpec make_spec(const Options& o, int rounds) {
  AlgorithmSpec spec;
  spec.id = o.alg;
  spec.rounds = rounds;
  spec.budget = o.budget;
  spec.s = o.s;
  if (o.path_cap > 0) spec.max_path_length = o.path_cap;
  if (o.s < 1 || o.s > 4) config_error("--s must lie in 1..4");
  validate_algorithm(spec);
  return spec;
}

EvalConfig make_eval(const Options& o) {
  if (o.trials < 1) config_error("--trials must be >= 1");
  if (o.threads < 1) config_error("--threads must be >= 1");
  EvalConfig c;
  c.trials = o.trials;
  c.base_seed = o.seed;
  c.threads = o.threads;
  c.omni = parse_omni(o.omni);
  return c;
}

void note_record(const RatioRecord& r) {
  std::cerr << "# " << r.algorithm << " R=" << r.rounds << " p_or_f=" << r.p_or_f << " omni=" << mode_name(r.omni_mode)
            << " max_load=" << r.max_load << (r.above_one ? " ratio>1 (sampling noise)" : "") << '\n';
}

void write_vertex_metrics(std::ostream& os, const Options& o, const ProbModel& model) {
  if (o.delta < 0 || !model.is_vertex_params()) return;
  const auto dist = parse_vertex_dist(o.model.substr(7));
  os << "# f_delta=" << f_delta(model, o.delta) << " g_delta=" << g_delta(dist, o.delta) << " delta=" << o.delta
     << '\n';
}

KidneyConfig kidney_config(const Options& o, const std::string& family, const std::vector<int>& r_grid,
                           const std::map<std::string, std::string>& params) {
  KidneyConfig c;
  c.k_max = family == "kidney-2cycle" ? 2 : 3;
  c.n = params.count("n") ? to_int(params.at("n")) : (c.k_max == 2 ? 250 : 50);
  c.s = params.count("s") ? to_int(params.at("s")) : 2;
  c.f_grid = parse_real_grid(o.f_grid);
  c.r_grid = r_grid;
  c.trials = o.trials;
  c.seed = o.seed;
  c.threads = o.threads;
  c.include_empty = o.include_empty;
  if (params.count("blood_freq")) {
    const auto v = parse_real_grid(params.at("blood_freq"));
    if (v.size() != 4) config_error("blood_freq needs 4 values (O,A,B,AB)");
    std::copy(v.begin(), v.end(), c.params.blood_freq.begin());
  }
  if (params.count("pra_freq")) {
    const auto v = parse_real_grid(params.at("pra_freq"));
    if (v.size() != 3) config_error("pra_freq needs 3 values");
    std::copy(v.begin(), v.end(), c.params.pra_freq.begin());
  }
  if (params.count("pra_fail")) {
    const auto v = parse_real_grid(params.at("pra_fail"));
    if (v.size() != 3) config_error("pra_fail needs 3 values");
    std::copy(v.begin(), v.end(), c.params.pra_fail.begin());
  }
  c.validate();
  return c;
}

void write_kidney(std::ostream& os, const std::vector<KidneyRecord>& records) {
  os << "# generator=simplified-pool tie_break=lowest-index\n";
  os << kidney_csv_header() << '\n';
  for (const auto& r : records) os << kidney_csv_row(r) << '\n';
}

int cmd_generate(const Options& o, const CLI::App& sub) {
  Sink sink(o.out);
  std::ostream& os = sink.os();
  if (is_kidney_family(o.family)) {
    const auto params = parse_params(o.params);
    const auto c = kidney_config(o, o.family, {0}, params);
    const auto pool = gen_pool(c.n, o.seed, c.params);
    echo_config(os, sub, o.seed);
    if (o.pool) {
      write_pool(os, pool);
      return 0;
    }
    const auto cycles = enumerate_cycles(build_compat(pool), c.k_max);
    os << "# cycles=" << cycles.instance.num_sets() << " f=" << o.f << '\n';
    write_kset(os, cycles.instance, cycles.probabilities(o.f));
    return 0;
  }
  const auto inst = load_graph(o);
  echo_config(os, sub, o.seed);
  os << "# family=" << inst.gg.family << ' ' << inst.gg.describe() << '\n';
  for (const auto& [name, members] : inst.gg.classes) os << "# class " << name << " size=" << members.size() << '\n';
  write_vertex_metrics(os, o, inst.model);
  write_graph(os, inst.gg.graph);
  write_model(os, inst.model);
  return 0;
}

int cmd_run(const Options& o, const CLI::App& sub) {
  const auto rounds = parse_int_grid(o.rounds);
  if (rounds.size() != 1) config_error("run takes a single R; use sweep for grids");
  const AlgorithmSpec spec = make_spec(o, rounds[0]);
  const EvalConfig eval = make_eval(o);
  Sink sink(o.out);
  RatioRecord rec;
  std::optional<RunReport> first;
  if (!o.kset_input.empty()) {
    if (!is_kset_algorithm(spec.id)) config_error("k-set instances need adaptive-kset or nonadaptive-kset");
    const auto si = load_kset(o);
    rec = evaluate_kset(spec, si.inst, si.model, eval, si.family, si.params);
    if (!o.report.empty()) {
      QueryOracle oracle(si.inst, sample_realization(si.model, si.inst.num_sets(), trial_seed(o.seed, 0)));
      first = spec.id == "adaptive-kset" ? adaptive_kset(si.inst, oracle, spec.rounds, spec.s)
                                         : nonadaptive_kset(si.inst, oracle, spec.rounds, spec.s);
    }
    echo_config(sink.os(), sub, o.seed);
  } else {
    const auto gi = load_graph(o);
    rec = evaluate(spec, gi.gg, gi.model, eval);
    if (!o.report.empty()) {
      if (is_kset_algorithm(spec.id)) config_error("--report is only available for graph algorithms on graphs");
      QueryOracle oracle(gi.gg.graph, sample_realization(gi.model, gi.gg.graph, trial_seed(o.seed, 0)));
      first = run_matching_algorithm(spec, gi.gg, oracle, Rng::split(trial_seed(o.seed, 0), 1).next());
    }
    echo_config(sink.os(), sub, o.seed);
    write_vertex_metrics(sink.os(), o, gi.model);
  }
  sink.os() << csv_header() << '\n' << csv_row(rec) << '\n';
  note_record(rec);
  if (first) {
    std::ofstream rep(o.report);
    if (!rep) config_error("cannot write `" + o.report + "`");
    rep << "# trial 0, seed " << trial_seed(o.seed, 0) << ", max_load " << first->max_load << '\n';
    write_report(rep, *first);
  }
  return 0;
}

int cmd_sweep(const Options& o, const CLI::App& sub) {
  const auto rounds = parse_int_grid(o.rounds);
  Sink sink(o.out);
  if (is_kidney_family(o.family)) {
    const auto c = kidney_config(o, o.family, rounds, parse_params(o.params));
    const auto records = run_experiment(c);
    echo_config(sink.os(), sub, o.seed);
    write_kidney(sink.os(), records);
    return 0;
  }
  const EvalConfig eval = make_eval(o);
  std::vector<RatioRecord> records;
  if (!o.kset_input.empty()) {
    const auto si = load_kset(o);
    std::vector<ProbModel> models;
    if (o.p_grid.empty()) {
      models.push_back(si.model);
    } else {
      for (double p : parse_real_grid(o.p_grid)) models.push_back(ProbModel::uniform(p));
    }
    for (const auto& m : models) {
      for (int r : rounds) records.push_back(evaluate_kset(make_spec(o, r), si.inst, m, eval, si.family, si.params));
    }
  } else {
    const auto gi = load_graph(o);
    std::vector<ProbModel> models;
    if (o.p_grid.empty()) {
      models.push_back(gi.model);
    } else {
      for (double p : parse_real_grid(o.p_grid)) models.push_back(ProbModel::uniform(p));
    }
    for (const auto& m : models) {
      for (int r : rounds) records.push_back(evaluate(make_spec(o, r), gi.gg, m, eval));
    }
  }
  echo_config(sink.os(), sub, o.seed);
  sink.os() << csv_header() << '\n';
  for (const auto& r : records) {
    sink.os() << csv_row(r) << '\n';
    note_record(r);
  }
  return 0;
}

int cmd_replicate(const Options& o, const CLI::App& sub) {
  if (o.trials < 1) config_error("--trials must be >= 1");
  SuiteOptions so;
  so.trials = o.trials;
  so.seed = o.seed;
  so.threads = o.threads;
  Sink sink(o.out);
  std::vector<RatioRecord> records;
  const auto sizes = [&](std::vector<int> fallback) { return o.sizes.empty() ? fallback : parse_int_grid(o.sizes); };
  if (o.suite == "example31") {
    for (int t : sizes({1600})) {
      auto part = suite_example31(t, o.p, o.adaptive_rounds, so);
      records.insert(records.end(), part.begin(), part.end());
    }
  } else if (o.suite == "figure3") {
    for (int t : sizes({200})) {
      auto part = suite_figure3(t, o.p, so);
      records.insert(records.end(), part.begin(), part.end());
    }
  } else if (o.suite == "appendixA") {
    records = suite_appendix_a(sizes({256, 1024, 4096}), o.beta, o.p, so);
  } else if (o.suite == "lemmaB1") {
    const auto ps = o.p_grid.empty() ? std::vector<double>{0.3, 0.5} : parse_real_grid(o.p_grid);
    for (const auto& row : suite_lemma_b1(sizes({100, 200}), ps, so)) records.push_back(lemma_b1_record(row));
  } else if (o.suite == "kidney-2cycle" || o.suite == "kidney-23cycle") {
    auto params = parse_params(o.params);
    const auto c = kidney_config(o, o.suite, parse_int_grid(o.rounds == "1" ? "0..5" : o.rounds), params);
    const auto rows = run_experiment(c);
    echo_config(sink.os(), sub, o.seed);
    write_kidney(sink.os(), rows);
    return 0;
  } else {
    config_error("unknown suite `" + o.suite + "`");
  }
  echo_config(sink.os(), sub, o.seed);
  sink.os() << csv_header() << '\n';
  for (const auto& r : records) {
    sink.os() << csv_row(r) << '\n';
    note_record(r);
  }
  return 0;
}

void report_error(const char* kind, const std::string& message) {
  nlohmann::json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
}

void add_instance_options(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.family, "Graph family (e.g. k22, knn, example31, figure3, appendixA, er)");
  sub->add_option("--param", o.params, "Family parameter key=value (repeatable)");
  sub->add_option("--input", o.input, "Graph file");
  sub->add_option("--model", o.model,
                  "uniform:P | vertex:uniform01 | vertex:const:C | vertex:twopoint:LO,HI,FRAC | peredge:FILE | file");
  sub->add_option("--delta", o.delta, "Report f_delta/g_delta for vertex-parameter models");
}

void add_experiment_options(CLI::App* sub, Options& o) {
  sub->add_option("--trials", o.trials, "Trials");
  sub->add_option("--threads", o.threads, "Worker threads");
  sub->add_option("--out", o.out, "Output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Stochastic matching and k-set packing query algorithms"};
  app.set_config("--config", "", "key=value config file; flags override it");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "Base seed")->envname("STOCHMATCH_SEED");

  auto* gen = app.add_subcommand("generate", "Write a generated instance");
  add_instance_options(gen, o);
  gen->add_option("--out", o.out, "Output file (default stdout)");
  gen->add_option("--f", o.f, "Failure rate for kidney cycle instances");
  gen->add_flag("--pool", o.pool, "Dump the kidney pair pool instead of the cycle sets");

  auto* run = app.add_subcommand("run", "Evaluate one algorithm");
  auto* sweep = app.add_subcommand("sweep", "Evaluate over an R x p (or R x f) grid");
  for (auto* sub : {run, sweep}) {
    add_instance_options(sub, o);
    add_experiment_options(sub, o);
    sub->add_option("--kset", o.kset_input, "k-set instance file");
    sub->add_option("--alg", o.alg, "adaptive | nonadaptive | nonadaptive-adversarial | naive-random | "
                                     "naive-scheduled | single-matching | query-all | adaptive-kset | nonadaptive-kset");
    sub->add_option("--R", o.rounds, "Rounds (sweep: 1..5 or 0,2,4)");
    sub->add_option("--b", o.budget, "Per-vertex budget for naive-random");
    sub->add_option("--s", o.s, "Augmenting-structure size for k-set algorithms (1..4)");
    sub->add_option("--path-cap", o.path_cap, "Cap augmenting-path length in adaptive (odd; 0 = off)");
    sub->add_option("--omni", o.omni, "Omniscient estimate: auto | exact | mc");
  }
  run->add_option("--report", o.report, "Write the per-round report of trial 0 to this file");
  sweep->add_option("--p", o.p_grid, "Comma-separated uniform probabilities");
  sweep->add_option("--f", o.f_grid, "Failure-rate grid for kidney families");
  sweep->add_flag("--include-empty", o.include_empty, "Count trials with an empty omniscient solution as ratio 1");

  auto* rep = app.add_subcommand("replicate", "Run a replication suite");
  rep->add_option("suite", o.suite, "example31 | figure3 | appendixA | lemmaB1 | kidney-2cycle | kidney-23cycle")
      ->required();
  add_experiment_options(rep, o);
  rep->add_option("--sizes", o.sizes, "t (or n) values, e.g. 256,4096");
  rep->add_option("--p", o.p, "Edge probability")->check(CLI::Range(0.0, 1.0));
  rep->add_option("--ps", o.p_grid, "Probability list for lemmaB1");
  rep->add_option("--beta", o.beta, "appendixA exponent");
  rep->add_option("--adaptive-R", o.adaptive_rounds, "Adaptive rounds in example31");
  rep->add_option("--R", o.rounds, "R grid for kidney suites (default 0..5)");
  rep->add_option("--f", o.f_grid, "Failure-rate grid for kidney suites");
  rep->add_option("--param", o.params, "Kidney parameters key=value: n, s, blood_freq, pra_freq, pra_fail");
  rep->add_flag("--include-empty", o.include_empty, "Count trials with an empty omniscient solution as ratio 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("config", e.what());
    return kConfigError;
  }

  try {
    if (*gen) return cmd_generate(o, *gen);
    if (*run) return cmd_run(o, *run);
    if (*sweep) return cmd_sweep(o, *sweep);
    if (*rep) {
      if (rep->count("--trials") == 0) {
        static const std::map<std::string, int> defaults = {{"example31", 20},     {"figure3", 2000},
                                                            {"appendixA", 20},     {"lemmaB1", 200},
                                                            {"kidney-2cycle", 500}, {"kidney-23cycle", 100}};
        const auto it = defaults.find(o.suite);
        if (it != defaults.end()) o.trials = it->second;
      }
      return cmd_replicate(o, *rep);
    }
  } catch (const InputError& e) {
    report_error("config", e.what());
    return kConfigError;
  } catch (const InstanceTooLarge& e) {
    report_error("config", e.what());
    return kConfigError;
  } catch (const std::domain_error& e) {
    report_error("config", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    report_error("runtime", e.what());
    return kRuntimeError;
  }
  return 0;
}
