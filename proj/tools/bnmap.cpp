#include <cmath>
#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bnmap/elimination.hpp"
#include "bnmap/error.hpp"
#include "bnmap/experiment.hpp"
#include "bnmap/io.hpp"
#include "bnmap/local_search.hpp"
#include "bnmap/loopy_bp.hpp"
#include "bnmap/netgen.hpp"
#include "bnmap/reductions.hpp"

using namespace bnmap;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  return out;
}

// Writes to `path`, or to stdout when it is "-".
void write_to(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out = open_out(path);
  out << text;
}

std::string assignment_string(const BayesianNetwork& net, const Instantiation& s, const std::vector<VarId>& vars) {
  std::string out;
  for (VarId v : vars) {
    if (!out.empty()) out += ' ';
    out += net.variable(v).name + "=" + net.state_label(v, s[v]);
  }
  return out.empty() ? "(empty)" : out;
}

std::string real(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

// ---- query ------------------------------------------------------------------

struct QueryOptions {
  std::string net_path, query_path, map, evidence, records;
  std::string engine = "exact", method = "taboo", init = "seq", order_policy = "minfill";
  int iters = 150;
  double pf = 0.35;
  std::uint64_t seed = 0;
};

int run_query(const QueryOptions& o) {
  if (o.order_policy != "minfill") throw ValidationError("unknown order policy '" + o.order_policy + "'");
  const BayesianNetwork net = parse_network_file(o.net_path);
  Query q = o.query_path.empty() ? Query{{}, Instantiation(net.size()), std::nullopt, 0}
                                 : parse_query_file(o.query_path, net);
  std::string extra;
  if (!o.map.empty()) extra += "map " + [&] {
    std::string s;
    for (const auto& name : split(o.map, ',')) s += name + " ";
    return s;
  }() + "\n";
  if (!o.evidence.empty()) {
    extra += "evidence";
    for (const auto& item : split(o.evidence, ',')) extra += " " + item;
    extra += "\n";
  }
  if (!extra.empty()) {
    const Query more = parse_query_string(extra, net);
    for (VarId v : more.map_vars) q.map_vars.push_back(v);
    std::sort(q.map_vars.begin(), q.map_vars.end());
    q.map_vars.erase(std::unique(q.map_vars.begin(), q.map_vars.end()), q.map_vars.end());
    for (VarId v : more.evidence.vars()) {
      if (q.evidence.has(v) && q.evidence[v] != more.evidence[v])
        throw ValidationError("conflicting evidence on '" + net.variable(v).name + "'");
      q.evidence.set(v, more.evidence[v]);
    }
    for (VarId v : q.map_vars)
      if (q.evidence.has(v)) throw ValidationError("'" + net.variable(v).name + "' is both MAP and evidence");
  }

  Json record;
  record["net"] = net.name();
  record["engine"] = o.engine;
  record["method"] = o.method;
  record["init"] = o.method == "exact" ? "" : o.init;
  record["seed"] = o.seed;

  Instantiation best;
  double log_score = 0;
  bool exact_score = true;
  if (o.method == "exact") {
    if (o.engine != "exact") throw ValidationError("method 'exact' needs the exact engine");
    const EliminationResult r = exact_map(net, q.evidence, q.map_vars);
    best = r.assignment;
    log_score = r.log_value;
    std::cout << "method       exact elimination\n";
  } else {
    const auto method = parse_search_method(o.method);
    if (!method) throw ValidationError("unknown method '" + o.method + "'");
    const auto init_mode = parse_init_mode(o.init);
    if (!init_mode) throw ValidationError("unknown init '" + o.init + "'");
    std::unique_ptr<Scorer> scorer;
    if (o.engine == "exact")
      scorer = std::make_unique<ExactScorer>(net, q.evidence, q.map_vars);
    else if (o.engine == "bp")
      scorer = std::make_unique<BpScorer>(net, q.evidence, q.map_vars);
    else
      throw ValidationError("unknown engine '" + o.engine + "'");
    Rng rng = Rng::stream(o.seed, 1);
    const Initialization init = initialize(*scorer, *init_mode, rng);
    SearchConfig sc;
    sc.max_evaluations = o.iters;
    sc.p_f = o.pf;
    sc.seed = o.seed;
    const SearchResult r = run_search(*method, *scorer, init.state, sc, init.evaluations);
    best = r.best;
    if (auto exact = scorer->exact_log_score(best)) {
      log_score = *exact;
    } else {
      try {
        log_score = log_probability_of_evidence(net, best.merged(q.evidence));
      } catch (const ResourceError&) {
        log_score = r.best_log_score;
        exact_score = false;
      }
    }
    std::cout << "method       " << o.init << "-" << o.method << " (" << o.engine << " scoring)\n";
    std::cout << "evaluations  " << init.evaluations + r.search_evaluations << " (init " << init.evaluations
              << ", search " << r.search_evaluations << "), best after " << r.evaluations_to_best << "\n";
    std::cout << "peaks        " << r.peaks_found << "\n";
    if (r.flagged) std::cout << "warning      infinite neighbor ratio seen during search\n";
    record["evaluations_to_best"] = r.evaluations_to_best;
    record["init_evaluations"] = init.evaluations;
    record["search_evaluations"] = r.search_evaluations;
    record["peaks"] = r.peaks_found;
    record["flagged"] = r.flagged;
  }

  std::cout << "map          " << assignment_string(net, best, q.map_vars) << "\n";
  if (exact_score) {
    std::cout << "log Pr(q,e)  " << real(log_score) << "\n";
    std::cout << "Pr(q,e)      " << real(std::exp(log_score)) << "\n";
  } else {
    std::cout << "log ratio    " << real(log_score) << " (relative to the initialization; exact scoring too large)\n";
  }
  Json assignment = Json::object();
  for (VarId v : q.map_vars) assignment[net.variable(v).name] = net.state_label(v, best[v]);
  record["map"] = assignment;
  record["log_score"] = std::isfinite(log_score) ? Json(log_score) : Json(nullptr);
  record["exact_score"] = exact_score;
  if (q.threshold && exact_score) {
    const bool yes = exceeds_threshold(*q.threshold, q.lattice, log_score);
    std::cout << "decision     Pr(q,e) > " << rational_string(*q.threshold) << ": " << (yes ? "yes" : "no") << "\n";
    record["threshold"] = rational_string(*q.threshold);
    record["exceeds"] = yes;
  }
  if (!o.records.empty()) {
    std::ofstream out = open_out(o.records);
    out << record.dump() << '\n';
  }
  return 0;
}

// ---- gen ----------------------------------------------------------------------

struct GenOptions {
  std::string method = "two", out = "-", query_out;
  int n = 20, c = 12, max_map = 25, evidence_leaves = -1;
  double p = 0.1, bias = 0.5;
  std::uint64_t seed = 0;
};

int run_gen(const GenOptions& o) {
  GenSpec spec;
  if (o.method == "one")
    spec.method = StructureMethod::One;
  else if (o.method == "two")
    spec.method = StructureMethod::Two;
  else
    throw ValidationError("unknown generator method '" + o.method + "'");
  spec.num_vars = o.n;
  spec.connectivity = o.c;
  spec.edge_probability = o.p;
  spec.bias = o.bias;
  spec.seed = o.seed;
  validate(spec);
  const ProblemInstance inst = make_instance(spec, o.seed, o.max_map, o.evidence_leaves);
  write_to(o.out, emit_network_string(inst.net));
  if (!o.query_out.empty()) {
    Query q{inst.map_vars, inst.evidence, std::nullopt, 0};
    write_to(o.query_out, emit_query_string(inst.net, q));
  }
  return 0;
}

// ---- reduce -------------------------------------------------------------------

struct ReduceOptions {
  std::string from = "cnf", input, construction, theorem, eps = "1/4", out = "-", query_out;
  int k = -1, q = 0;
};

int run_reduce(const ReduceOptions& o) {
  std::string kind = o.construction;
  if (!o.theorem.empty()) {
    static const std::map<std::string, std::string> alias{
        {"1", "circuit"}, {"2", "depth2"}, {"7", "polytree"}, {"8", "replicated"}};
    auto it = alias.find(o.theorem);
    if (it == alias.end()) throw ValidationError("--theorem takes 1, 2, 7 or 8");
    if (!kind.empty() && kind != it->second) throw ValidationError("--theorem and --construction disagree");
    kind = it->second;
  }
  if (kind.empty()) throw ValidationError("choose a construction");
  const std::string text = read_file(o.input);

  std::optional<CnfFormula> cnf;
  std::optional<BooleanCircuit> circuit;
  if (o.from == "cnf")
    cnf = parse_dimacs_string(text);
  else if (o.from == "circuit")
    circuit = parse_formula(text);
  else
    throw ValidationError("--from takes cnf or circuit");

  ReductionOutput r;
  if (kind == "circuit" || kind == "depth2") {
    if (!circuit) circuit = cnf_to_circuit(*cnf);
    const int k = o.k >= 0 ? o.k : circuit->num_inputs();
    r = kind == "circuit" ? circuit_to_map_network(*circuit, k)
                          : emajsat_depth2_network(*circuit, k, parse_rational(o.eps));
  } else if (kind == "polytree" || kind == "replicated") {
    if (!cnf) throw ValidationError("the " + kind + " construction needs CNF input");
    if (kind == "polytree") {
      r = maxsat_to_polytree(*cnf, o.k >= 0 ? o.k : static_cast<int>(cnf->clauses.size()));
    } else {
      const double eps = parse_rational(o.eps).convert_to<double>();
      r = replicate_polytree(*cnf, eps, o.q > 0 ? std::optional<int>(o.q) : std::nullopt);
    }
  } else {
    throw ValidationError("unknown construction '" + kind + "'");
  }

  write_to(o.out, emit_network_string(r.network));
  if (!o.query_out.empty()) write_to(o.query_out, emit_query_string(r.network, query_of(r)));
  std::ostream& info = o.out == "-" ? std::cerr : std::cout;
  info << "construction " << kind << ": " << r.network.size() << " variables, " << r.map_vars.size()
       << " MAP variables, threshold " << rational_string(r.threshold) << "\n";
  for (const auto& [key, value] : r.metadata) info << "  " << key << " = " << value << "\n";
  return 0;
}

// ---- width-study / experiment ------------------------------------------------

template <typename Report>
void finish(const Report& report, const std::string& records) {
  print_table(std::cout, report);
  if (!records.empty()) {
    std::ofstream out = open_out(records);
    write_records(out, report);
  }
}

struct WidthOptions {
  int nets = 20, n = 100, c = 12, step = 1, threads = 0;
  std::uint64_t seed = 1;
  std::string records;
};

int run_width(const WidthOptions& o) {
  WidthStudyConfig c;
  c.generator.method = StructureMethod::One;
  c.generator.num_vars = o.n;
  c.generator.connectivity = o.c;
  validate(c.generator);
  if (o.step < 1 || o.nets < 0) throw ValidationError("--step must be positive and --nets nonnegative");
  c.num_nets = o.nets;
  c.step = o.step;
  c.seed = o.seed;
  c.threads = o.threads;
  finish(run_width_study(c), o.records);
  return 0;
}

struct ExperimentOptions {
  std::string config, records;
  int threads = -1;
};

int run_experiment(const ExperimentOptions& o) {
  Json j;
  try {
    j = Json::parse(read_file(o.config));
  } catch (const nlohmann::json::parse_error& err) {
    throw ValidationError(std::string("config: ") + err.what());
  }
  const std::string kind = j.value("experiment", "table");
  const std::string records = o.records.empty() ? j.value("records", "") : o.records;
  if (o.threads >= 0) j["threads"] = o.threads;
  if (kind == "table")
    finish(run_table_experiment(table_config_from_json(j)), records);
  else if (kind == "bp")
    finish(run_bp_experiment(bp_config_from_json(j)), records);
  else if (kind == "width")
    finish(run_width_study(width_config_from_json(j)), records);
  else
    throw ValidationError("unknown experiment '" + kind + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAP inference toolkit for discrete Bayesian networks"};
  app.require_subcommand(1);

  QueryOptions qo;
  auto* query = app.add_subcommand("query", "Exact or local-search MAP on a network file");
  query->add_option("--net", qo.net_path, "Network file")->required();
  query->add_option("--query", qo.query_path, "Query file (map, evidence, threshold)");
  query->add_option("--map", qo.map, "MAP variables, comma separated");
  query->add_option("--evidence", qo.evidence, "Evidence as X=s, comma separated");
  query->add_option("--engine", qo.engine, "Scoring engine: exact or bp")->capture_default_str();
  query->add_option("--method", qo.method, "hill, shill, taboo or exact")->capture_default_str();
  query->add_option("--init", qo.init, "rand, mpe, ml or seq")->capture_default_str();
  query->add_option("--iters", qo.iters, "Search evaluation budget")->capture_default_str();
  query->add_option("--pf", qo.pf, "Random-move probability for shill")->capture_default_str();
  query->add_option("--seed", qo.seed, "Random seed")->capture_default_str();
  query->add_option("--order-policy", qo.order_policy, "Elimination order heuristic")->capture_default_str();
  query->add_option("--records", qo.records, "Write a JSON record here");

  GenOptions go;
  auto* gen = app.add_subcommand("gen", "Generate a random network");
  gen->add_option("--method", go.method, "Structure method: one or two")->capture_default_str();
  gen->add_option("--n", go.n, "Number of variables")->capture_default_str();
  gen->add_option("--c", go.c, "Connectivity (method one)")->capture_default_str();
  gen->add_option("--p", go.p, "Edge probability (method two)")->capture_default_str();
  gen->add_option("--bias", go.bias, "CPT bias in [0, 0.5]")->capture_default_str();
  gen->add_option("--seed", go.seed, "Random seed")->capture_default_str();
  gen->add_option("--out", go.out, "Network output path, - for stdout")->capture_default_str();
  gen->add_option("--query-out", go.query_out, "Also write roots as MAP and sampled leaf evidence");
  gen->add_option("--max-map", go.max_map, "Cap on MAP roots")->capture_default_str();
  gen->add_option("--evidence-leaves", go.evidence_leaves, "Leaves to observe, -1 for all")->capture_default_str();

  ReduceOptions ro;
  auto* reduce = app.add_subcommand("reduce", "Build a MAP instance from a CNF or formula");
  reduce->add_option("input", ro.input, "DIMACS CNF or infix formula file")->required();
  reduce->add_option("--from", ro.from, "Input kind: cnf or circuit")->capture_default_str();
  reduce->add_option("--construction", ro.construction, "circuit, depth2, polytree or replicated");
  reduce->add_option("--theorem", ro.theorem, "Numeric alias: 1 circuit, 2 depth2, 7 polytree, 8 replicated");
  reduce->add_option("--eps", ro.eps, "Approximation exponent (depth2, replicated)")->capture_default_str();
  reduce->add_option("--k", ro.k, "MAP input count (circuit, depth2) or clause bound (polytree)");
  reduce->add_option("--q", ro.q, "Override the copy count (replicated)");
  reduce->add_option("--out", ro.out, "Network output path, - for stdout")->capture_default_str();
  reduce->add_option("--query-out", ro.query_out, "Query output path");

  WidthOptions wo;
  auto* width = app.add_subcommand("width-study", "Constrained-width growth as MAP sets grow");
  width->add_option("--nets", wo.nets, "Number of networks")->capture_default_str();
  width->add_option("--n", wo.n, "Variables per network")->capture_default_str();
  width->add_option("--c", wo.c, "Connectivity")->capture_default_str();
  width->add_option("--step", wo.step, "MAP set growth per point")->capture_default_str();
  width->add_option("--seed", wo.seed, "Master seed")->capture_default_str();
  width->add_option("--threads", wo.threads, "Worker threads, 0 for all cores")->capture_default_str();
  width->add_option("--records", wo.records, "JSONL record file");

  ExperimentOptions eo;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment from a JSON config");
  experiment->add_option("config", eo.config, "Config file")->required();
  experiment->add_option("--records", eo.records, "JSONL record file (overrides the config)");
  experiment->add_option("--threads", eo.threads, "Worker threads (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*query) return run_query(qo);
    if (*gen) return run_gen(go);
    if (*reduce) return run_reduce(ro);
    if (*width) return run_width(wo);
    if (*experiment) return run_experiment(eo);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
