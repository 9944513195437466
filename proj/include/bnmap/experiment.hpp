#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bnmap/local_search.hpp"
#include "bnmap/loopy_bp.hpp"
#include "bnmap/netgen.hpp"
#include "json.hpp"

namespace bnmap {

using Json = nlohmann::ordered_json;

/// "Rand", "ML-Hill", "Seq-Taboo", "MPE-SHill": an initialization with an
/// optional search. Hill is pure hill climbing, SHill stochastic hill climbing.
struct MethodSpec {
  std::string label;
  InitMode init = InitMode::Rand;
  std::optional<SearchMethod> search;
};
std::optional<MethodSpec> parse_method(const std::string& label);

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers (0 = hardware).
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// A generated MAP problem: roots (at most `max_map`, chosen at random) as MAP
/// variables and evidence on non-MAP leaves read off one forward-sampled
/// world. `evidence_leaves` < 0 uses every such leaf, otherwise a random
/// subset of that size. `gen.seed` is replaced by `seed`.
struct ProblemInstance {
  BayesianNetwork net;
  std::vector<VarId> map_vars;
  Instantiation evidence;
};
ProblemInstance make_instance(GenSpec gen, std::uint64_t seed, int max_map, int evidence_leaves);

/// Relative equality of two log-space scores within 1e-9 in linear space.
bool same_score(double log_a, double log_b);

// ---- solution-quality tables ------------------------------------------------

struct TableConfig {
  GenSpec generator;  // bias is taken from `biases`
  std::vector<double> biases{0.0, 0.125, 0.25, 0.375, 0.5};
  int num_nets = 100;
  int max_map_vars = 25;
  std::vector<MethodSpec> methods;
  int budget = 150;
  double p_f = 0.35;
  std::uint64_t seed = 1;
  int threads = 0;
  bool cross_validate = true;  // brute force alongside elimination when feasible
  std::size_t cell_budget = std::size_t{1} << 26;
};

struct TableRecord {
  int net = 0;
  double bias = 0;
  std::uint64_t seed = 0;  // instance seed (generation and evidence)
  std::string method;
  int map_vars = 0;
  int evidence_vars = 0;
  double log_score = 0;  // exact log Pr(best, e)
  double log_exact = 0;  // exact log MAP value
  bool solved = false;
  bool cross_validated = false;
  int evaluations_to_best = 0;
  int init_evaluations = 0;
  int search_evaluations = 0;
  int peaks = 0;
};

struct TableCell {
  std::string method;
  double bias = 0;
  int runs = 0;
  int solved = 0;
  double eval_mean = 0, eval_stdev = 0;
  int eval_max = 0;
  double init_eval_mean = 0;
  double peaks_mean = 0;
};

struct Failure {
  int net = 0;
  double bias = 0;
  std::string error;
};

struct TableReport {
  TableConfig config;
  std::vector<TableRecord> records;  // sorted by (net, bias, method order)
  std::vector<Failure> failures;
};

TableReport run_table_experiment(const TableConfig& config);
/// Per (method, bias) aggregates, in method-then-bias order.
std::vector<TableCell> summarize(const TableReport& report);
/// Aggregates over every bias for one method.
TableCell summarize_method(const TableReport& report, const std::string& method);
void print_table(std::ostream& out, const TableReport& report);

// ---- BP-scored search -------------------------------------------------------

struct BpExperimentConfig {
  GenSpec generator;
  int num_nets = 50;
  int max_map_vars = 25;
  int evidence_leaves = 10;
  int steps = 100;
  double p_f = 0.3;
  BpConfig bp;
  std::uint64_t seed = 1;
  int threads = 0;
  std::size_t cell_budget = std::size_t{1} << 26;
};

/// Methods: MPE, MPE-Hill, MPE-SHill, ML, ML-Hill, ML-SHill. Hill here stops
/// at the first peak. Scores are exact re-scorings of the BP-chosen states.
struct BpRecord {
  int net = 0;
  std::uint64_t seed = 0;
  std::string method;
  int map_vars = 0;
  double log_score = 0;  // exact log Pr(found, e)
  double log_init = 0;   // exact log Pr(init, e)
  std::optional<double> log_map;  // exact MAP value when elimination fit the budget
  bool solved = false;
  bool zero_probability = false;
  bool flagged = false;  // BP reported an infinite neighbor ratio
  int evaluations_to_best = 0;
  int bp_runs = 0;
  int unconverged_runs = 0;
};

struct BpMethodSummary {
  std::string method;
  int runs = 0;
  int with_map = 0;
  int solved = 0;
  std::optional<double> worst_ratio_to_map;
  // Improvement over the method's initialization: found / init.
  double improve_min = 0, improve_median = 0, improve_mean = 0, improve_max = 0;
  int improved = 0;  // strictly better than init
  int worse = 0;     // strictly worse than init
  int zero_probability = 0;
  int flagged = 0;
};

struct BpReport {
  BpExperimentConfig config;
  std::vector<BpRecord> records;
  std::vector<Failure> failures;
};

BpReport run_bp_experiment(const BpExperimentConfig& config);
std::vector<BpMethodSummary> summarize(const BpReport& report);
void print_table(std::ostream& out, const BpReport& report);

// ---- constrained-width study ------------------------------------------------

struct WidthStudyConfig {
  GenSpec generator;
  int num_nets = 20;
  int step = 1;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct WidthRecord {
  int net = 0;
  std::uint64_t seed = 0;
  int map_vars = 0;
  double width = 0;
  double unconstrained = 0;
};

struct WidthPoint {
  int map_vars = 0;
  double min = 0, max = 0, mean = 0, weighted_mean = 0;
};

struct WidthStudyReport {
  WidthStudyConfig config;
  std::vector<WidthRecord> records;
  std::vector<Failure> failures;
};

WidthStudyReport run_width_study(const WidthStudyConfig& config);
std::vector<WidthPoint> summarize(const WidthStudyReport& report);
void print_table(std::ostream& out, const WidthStudyReport& report);

// ---- records and configs ----------------------------------------------------

Json to_json(const TableRecord& r);
Json to_json(const BpRecord& r);
Json to_json(const WidthRecord& r);
Json to_json(const Failure& f);

/// One JSON object per line: records in order, then failures.
void write_records(std::ostream& out, const TableReport& report);
void write_records(std::ostream& out, const BpReport& report);
void write_records(std::ostream& out, const WidthStudyReport& report);

GenSpec gen_spec_from_json(const Json& j);
Json to_json(const GenSpec& spec);
TableConfig table_config_from_json(const Json& j);
BpExperimentConfig bp_config_from_json(const Json& j);
WidthStudyConfig width_config_from_json(const Json& j);

}  // namespace bnmap
