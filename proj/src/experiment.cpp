#include "bnmap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "bnmap/elimination.hpp"
#include "bnmap/error.hpp"
#include "bnmap/oracle.hpp"
#include "bnmap/rng.hpp"

namespace bnmap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double world_count(const BayesianNetwork& net) {
  double space = 1.0;
  for (const Variable& v : net.variables()) space *= v.cardinality;
  return space;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double stdev_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size()));
}

double median_of(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string fixed(double x, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

std::string sci(double x) {
  std::ostringstream s;
  s << std::setprecision(3) << x;
  return s.str();
}

StructureMethod parse_structure(const std::string& s) {
  if (s == "one") return StructureMethod::One;
  if (s == "two") return StructureMethod::Two;
  throw ValidationError("unknown generator method '" + s + "'");
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("config field '") + key + "' has the wrong type");
  }
}

std::vector<MethodSpec> parse_methods(const Json& j) {
  std::vector<MethodSpec> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw ValidationError("method labels must be strings");
    auto m = parse_method(item.get<std::string>());
    if (!m) throw ValidationError("unknown method '" + item.get<std::string>() + "'");
    out.push_back(*m);
  }
  return out;
}

}  // namespace

ProblemInstance make_instance(GenSpec gen, std::uint64_t seed, int max_map, int evidence_leaves) {
  gen.seed = seed;
  ProblemInstance inst{generate_network(gen), {}, {}};
  Rng pick = Rng::stream(seed, 3);
  inst.map_vars = choose_subset(root_variables(inst.net), static_cast<std::size_t>(max_map), pick);
  std::vector<VarId> leaves;
  for (VarId v : leaf_variables(inst.net))
    if (!std::binary_search(inst.map_vars.begin(), inst.map_vars.end(), v)) leaves.push_back(v);
  if (evidence_leaves >= 0) leaves = choose_subset(std::move(leaves), static_cast<std::size_t>(evidence_leaves), pick);
  Rng sample = Rng::stream(seed, 4);
  inst.evidence = leaves.empty() ? Instantiation(inst.net.size()) : sample_leaf_evidence(inst.net, sample, leaves);
  return inst;
}

std::optional<MethodSpec> parse_method(const std::string& label) {
  const auto dash = label.find('-');
  std::string init = label.substr(0, dash);
  std::transform(init.begin(), init.end(), init.begin(), [](unsigned char c) { return std::tolower(c); });
  MethodSpec m;
  m.label = label;
  auto mode = parse_init_mode(init);
  if (!mode) return std::nullopt;
  m.init = *mode;
  if (dash == std::string::npos) return m;
  const std::string search = label.substr(dash + 1);
  if (search == "Hill")
    m.search = SearchMethod::PureHill;
  else if (search == "SHill")
    m.search = SearchMethod::StochasticHill;
  else if (search == "Taboo")
    m.search = SearchMethod::Taboo;
  else
    return std::nullopt;
  return m;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& t : pool) t.join();
}

bool same_score(double log_a, double log_b) {
  if (log_a == kNegInf || log_b == kNegInf) return log_a == log_b;
  return std::abs(std::expm1(log_a - log_b)) <= 1e-9;
}

// ---- solution-quality tables ------------------------------------------------

TableReport run_table_experiment(const TableConfig& config) {
  TableReport report;
  report.config = config;
  const std::size_t biases = config.biases.size();
  const std::size_t items = static_cast<std::size_t>(config.num_nets) * biases;
  std::vector<std::vector<TableRecord>> results(items);
  std::vector<std::optional<Failure>> failed(items);

  parallel_for(items, config.threads, [&](std::size_t k) {
    const int net_index = static_cast<int>(k / biases);
    const std::size_t bias_index = k % biases;
    const double bias = config.biases[bias_index];
    const std::uint64_t seed = mix_seed(config.seed, static_cast<std::uint64_t>(net_index));
    try {
      GenSpec gen = config.generator;
      gen.bias = bias;
      const ProblemInstance inst = make_instance(gen, seed, config.max_map_vars, -1);
      EliminationOptions opts;
      opts.cell_budget = config.cell_budget;
      const EliminationResult exact = exact_map(inst.net, inst.evidence, inst.map_vars, opts);
      bool checked = false;
      if (config.cross_validate && world_count(inst.net) <= kBruteForceLimit) {
        const BruteForceResult brute = brute_force_map(inst.net, inst.evidence, inst.map_vars);
        if (!same_score(std::log(brute.value), exact.log_value))
          throw std::runtime_error("elimination and enumeration disagree on the MAP value");
        checked = true;
      }

      ExactScorer scorer(inst.net, inst.evidence, inst.map_vars, config.cell_budget);
      for (std::size_t m = 0; m < config.methods.size(); ++m) {
        const MethodSpec& method = config.methods[m];
        const std::uint64_t run_seed = mix_seed(mix_seed(seed, bias_index), m);
        Rng rng = Rng::stream(run_seed, 1);
        const Initialization init = initialize(scorer, method.init, rng);
        TableRecord r;
        r.net = net_index;
        r.bias = bias;
        r.seed = seed;
        r.method = method.label;
        r.map_vars = static_cast<int>(inst.map_vars.size());
        r.evidence_vars = static_cast<int>(inst.evidence.count());
        r.log_exact = exact.log_value;
        r.cross_validated = checked;
        r.init_evaluations = init.evaluations;
        if (method.search) {
          SearchConfig sc;
          sc.max_evaluations = config.budget;
          sc.p_f = config.p_f;
          sc.seed = run_seed;
          const SearchResult res = run_search(*method.search, scorer, init.state, sc, init.evaluations);
          r.log_score = res.best_log_score;
          r.evaluations_to_best = res.evaluations_to_best;
          r.search_evaluations = res.search_evaluations;
          r.peaks = res.peaks_found;
        } else {
          r.log_score = *scorer.exact_log_score(init.state);
          r.evaluations_to_best = init.evaluations;
        }
        r.solved = same_score(r.log_score, r.log_exact);
        results[k].push_back(std::move(r));
      }
    } catch (const std::exception& err) {
      failed[k] = Failure{net_index, bias, err.what()};
      results[k].clear();
    }
  });

  for (std::size_t k = 0; k < items; ++k) {
    for (auto& r : results[k]) report.records.push_back(std::move(r));
    if (failed[k]) report.failures.push_back(*failed[k]);
  }
  return report;
}

namespace {

TableCell cell_of(const std::string& method, double bias, const std::vector<const TableRecord*>& rs) {
  TableCell c;
  c.method = method;
  c.bias = bias;
  std::vector<double> evals, init_evals, peaks;
  for (const TableRecord* r : rs) {
    ++c.runs;
    c.solved += r->solved;
    evals.push_back(r->evaluations_to_best);
    init_evals.push_back(r->init_evaluations);
    peaks.push_back(r->peaks);
    c.eval_max = std::max(c.eval_max, r->evaluations_to_best);
  }
  c.eval_mean = mean_of(evals);
  c.eval_stdev = stdev_of(evals);
  c.init_eval_mean = mean_of(init_evals);
  c.peaks_mean = mean_of(peaks);
  return c;
}

}  // namespace

std::vector<TableCell> summarize(const TableReport& report) {
  std::vector<TableCell> cells;
  for (const MethodSpec& m : report.config.methods)
    for (double b : report.config.biases) {
      std::vector<const TableRecord*> rs;
      for (const auto& r : report.records)
        if (r.method == m.label && r.bias == b) rs.push_back(&r);
      cells.push_back(cell_of(m.label, b, rs));
    }
  return cells;
}

TableCell summarize_method(const TableReport& report, const std::string& method) {
  std::vector<const TableRecord*> rs;
  for (const auto& r : report.records)
    if (r.method == method) rs.push_back(&r);
  TableCell c = cell_of(method, 0, rs);
  c.bias = std::numeric_limits<double>::quiet_NaN();
  return c;
}

void print_table(std::ostream& out, const TableReport& report) {
  const auto cells = summarize(report);
  const std::size_t nb = report.config.biases.size();
  out << "Solved exactly (" << report.config.num_nets << " nets per bias)\n";
  out << std::left << std::setw(12) << "method";
  for (double b : report.config.biases) out << std::right << std::setw(8) << fixed(b, 3);
  out << '\n';
  for (std::size_t m = 0; m < report.config.methods.size(); ++m) {
    out << std::left << std::setw(12) << report.config.methods[m].label;
    for (std::size_t b = 0; b < nb; ++b) out << std::right << std::setw(8) << cells[m * nb + b].solved;
    out << '\n';
  }
  out << "\nEvaluations to best (all biases)\n";
  out << std::left << std::setw(12) << "method" << std::right << std::setw(9) << "mean" << std::setw(9) << "stdev"
      << std::setw(7) << "max" << std::setw(9) << "peaks" << '\n';
  for (const MethodSpec& m : report.config.methods) {
    const TableCell c = summarize_method(report, m.label);
    out << std::left << std::setw(12) << m.label << std::right << std::setw(9) << fixed(c.eval_mean, 2)
        << std::setw(9) << fixed(c.eval_stdev, 2) << std::setw(7) << c.eval_max << std::setw(9)
        << fixed(c.peaks_mean, 2) << '\n';
  }
  if (!report.failures.empty()) out << "\nskipped runs: " << report.failures.size() << '\n';
}

// ---- BP-scored search -------------------------------------------------------

BpReport run_bp_experiment(const BpExperimentConfig& config) {
  BpReport report;
  report.config = config;
  const std::size_t items = static_cast<std::size_t>(config.num_nets);
  std::vector<std::vector<BpRecord>> results(items);
  std::vector<std::optional<Failure>> failed(items);

  parallel_for(items, config.threads, [&](std::size_t k) {
    const int net_index = static_cast<int>(k);
    const std::uint64_t seed = mix_seed(config.seed, k);
    try {
      const ProblemInstance inst = make_instance(config.generator, seed, config.max_map_vars, config.evidence_leaves);
      EliminationOptions opts;
      opts.cell_budget = config.cell_budget;
      std::optional<double> log_map;
      try {
        const EliminationResult map = exact_map(inst.net, inst.evidence, inst.map_vars, opts);
        log_map = map.log_value;
      } catch (const ResourceError&) {
      }
      auto rescore = [&](const Instantiation& s) {
        return log_probability_of_evidence(inst.net, s.merged(inst.evidence), opts);
      };

      BpScorer scorer(inst.net, inst.evidence, inst.map_vars, config.bp);
      const InitMode inits[] = {InitMode::Mpe, InitMode::Ml};
      for (std::size_t a = 0; a < 2; ++a) {
        const std::string base = a == 0 ? "MPE" : "ML";
        Rng rng = Rng::stream(seed, 10 + a);
        int runs_before = scorer.runs(), unconverged_before = scorer.unconverged_runs();
        const Initialization init = initialize(scorer, inits[a], rng);
        const double log_init = rescore(init.state);

        auto record = [&](const std::string& label, const Instantiation& s, int evals, bool flagged) {
          BpRecord r;
          r.net = net_index;
          r.seed = seed;
          r.method = label;
          r.map_vars = static_cast<int>(inst.map_vars.size());
          r.log_score = rescore(s);
          r.log_init = log_init;
          r.log_map = log_map;
          r.solved = log_map && same_score(r.log_score, *log_map);
          r.zero_probability = r.log_score == kNegInf;
          r.flagged = flagged;
          r.evaluations_to_best = evals;
          r.bp_runs = scorer.runs() - runs_before;
          r.unconverged_runs = scorer.unconverged_runs() - unconverged_before;
          results[k].push_back(std::move(r));
        };
        record(base, init.state, init.evaluations, false);

        for (int variant = 0; variant < 2; ++variant) {
          runs_before = scorer.runs();
          unconverged_before = scorer.unconverged_runs();
          SearchConfig sc;
          sc.max_evaluations = config.steps;
          sc.p_f = config.p_f;
          sc.seed = mix_seed(seed, 20 + 2 * a + variant);
          SearchResult res;
          if (variant == 0) {
            sc.restart_on_peak = false;
            res = pure_hill_climb_restart(scorer, init.state, sc, init.evaluations);
          } else {
            res = stochastic_hill_climb(scorer, init.state, sc, init.evaluations);
          }
          record(base + (variant == 0 ? "-Hill" : "-SHill"), res.best, res.evaluations_to_best, res.flagged);
        }
      }
    } catch (const std::exception& err) {
      failed[k] = Failure{net_index, config.generator.bias, err.what()};
      results[k].clear();
    }
  });

  for (std::size_t k = 0; k < items; ++k) {
    for (auto& r : results[k]) report.records.push_back(std::move(r));
    if (failed[k]) report.failures.push_back(*failed[k]);
  }
  return report;
}

std::vector<BpMethodSummary> summarize(const BpReport& report) {
  std::vector<BpMethodSummary> out;
  for (const char* label : {"MPE", "MPE-Hill", "MPE-SHill", "ML", "ML-Hill", "ML-SHill"}) {
    BpMethodSummary s;
    s.method = label;
    std::vector<double> ratios;
    for (const BpRecord& r : report.records) {
      if (r.method != label) continue;
      ++s.runs;
      s.zero_probability += r.zero_probability;
      s.flagged += r.flagged;
      if (r.log_map) {
        ++s.with_map;
        s.solved += r.solved;
        const double ratio = std::exp(r.log_score - *r.log_map);
        s.worst_ratio_to_map = s.worst_ratio_to_map ? std::min(*s.worst_ratio_to_map, ratio) : ratio;
      }
      const bool same = same_score(r.log_score, r.log_init);
      s.improved += !same && r.log_score > r.log_init;
      s.worse += !same && r.log_score < r.log_init;
      ratios.push_back(same ? 1.0 : std::exp(r.log_score - r.log_init));
    }
    if (!ratios.empty()) {
      s.improve_min = *std::min_element(ratios.begin(), ratios.end());
      s.improve_max = *std::max_element(ratios.begin(), ratios.end());
      s.improve_mean = mean_of(ratios);
      s.improve_median = median_of(ratios);
    }
    out.push_back(s);
  }
  return out;
}

void print_table(std::ostream& out, const BpReport& report) {
  const auto rows = summarize(report);
  out << "Solution quality (" << report.config.num_nets << " nets)\n";
  out << std::left << std::setw(11) << "method" << std::right << std::setw(8) << "solved" << std::setw(8) << "of"
      << std::setw(11) << "worst" << std::setw(10) << "improved" << std::setw(8) << "worse" << std::setw(8)
      << "zero" << '\n';
  for (const auto& s : rows)
    out << std::left << std::setw(11) << s.method << std::right << std::setw(8) << s.solved << std::setw(8)
        << s.with_map << std::setw(11) << (s.worst_ratio_to_map ? sci(*s.worst_ratio_to_map) : "-")
        << std::setw(10) << s.improved << std::setw(8) << s.worse << std::setw(8) << s.zero_probability << '\n';
  out << "\nImprovement over initialization (found / init)\n";
  out << std::left << std::setw(11) << "method" << std::right << std::setw(11) << "min" << std::setw(11)
      << "median" << std::setw(11) << "mean" << std::setw(11) << "max" << '\n';
  for (const auto& s : rows) {
    if (s.method == "MPE" || s.method == "ML") continue;
    out << std::left << std::setw(11) << s.method << std::right << std::setw(11) << sci(s.improve_min)
        << std::setw(11) << sci(s.improve_median) << std::setw(11) << sci(s.improve_mean) << std::setw(11)
        << sci(s.improve_max) << '\n';
  }
  if (!report.failures.empty()) out << "\nskipped runs: " << report.failures.size() << '\n';
}

// ---- constrained-width study ------------------------------------------------

WidthStudyReport run_width_study(const WidthStudyConfig& config) {
  WidthStudyReport report;
  report.config = config;
  const std::size_t items = static_cast<std::size_t>(config.num_nets);
  std::vector<std::vector<WidthRecord>> results(items);
  std::vector<std::optional<Failure>> failed(items);

  parallel_for(items, config.threads, [&](std::size_t k) {
    const std::uint64_t seed = mix_seed(config.seed, k);
    try {
      GenSpec gen = config.generator;
      gen.seed = seed;
      const BayesianNetwork net = generate_network(gen);
      const double unconstrained = order_width(net, min_fill_order(net).order).width;
      Rng rng = Rng::stream(seed, 5);
      const auto schedule = growing_q_schedule(net.size(), static_cast<std::size_t>(std::max(1, config.step)), rng);
      const auto profile = width_profile(net, schedule);
      for (std::size_t i = 0; i < schedule.size(); ++i)
        results[k].push_back(WidthRecord{static_cast<int>(k), seed, static_cast<int>(schedule[i].size()),
                                         profile[i].width, unconstrained});
    } catch (const std::exception& err) {
      failed[k] = Failure{static_cast<int>(k), config.generator.bias, err.what()};
      results[k].clear();
    }
  });

  for (std::size_t k = 0; k < items; ++k) {
    for (auto& r : results[k]) report.records.push_back(r);
    if (failed[k]) report.failures.push_back(*failed[k]);
  }
  return report;
}

std::vector<WidthPoint> summarize(const WidthStudyReport& report) {
  std::map<int, std::vector<double>> by_size;
  for (const WidthRecord& r : report.records) by_size[r.map_vars].push_back(r.width);
  std::vector<WidthPoint> out;
  for (const auto& [size, widths] : by_size) {
    const WidthStats s = summarize_widths(widths);
    out.push_back(WidthPoint{size, s.min, s.max, s.mean, s.weighted_mean});
  }
  return out;
}

void print_table(std::ostream& out, const WidthStudyReport& report) {
  out << "Constrained min-fill width (" << report.config.num_nets << " nets)\n";
  out << std::right << std::setw(6) << "|Q|" << std::setw(8) << "min" << std::setw(8) << "max" << std::setw(9)
      << "mean" << std::setw(10) << "weighted" << '\n';
  for (const WidthPoint& p : summarize(report))
    out << std::setw(6) << p.map_vars << std::setw(8) << fixed(p.min, 0) << std::setw(8) << fixed(p.max, 0)
        << std::setw(9) << fixed(p.mean, 2) << std::setw(10) << fixed(p.weighted_mean, 2) << '\n';
  if (!report.failures.empty()) out << "\nskipped runs: " << report.failures.size() << '\n';
}

// ---- records and configs ----------------------------------------------------

Json to_json(const TableRecord& r) {
  Json j;
  j["net"] = r.net;
  j["bias"] = r.bias;
  j["seed"] = r.seed;
  j["method"] = r.method;
  j["map_vars"] = r.map_vars;
  j["evidence_vars"] = r.evidence_vars;
  j["log_score"] = number_or_null(r.log_score);
  j["log_exact"] = number_or_null(r.log_exact);
  j["solved"] = r.solved;
  j["cross_validated"] = r.cross_validated;
  j["evaluations_to_best"] = r.evaluations_to_best;
  j["init_evaluations"] = r.init_evaluations;
  j["search_evaluations"] = r.search_evaluations;
  j["peaks"] = r.peaks;
  return j;
}

Json to_json(const BpRecord& r) {
  Json j;
  j["net"] = r.net;
  j["seed"] = r.seed;
  j["method"] = r.method;
  j["map_vars"] = r.map_vars;
  j["log_score"] = number_or_null(r.log_score);
  j["log_init"] = number_or_null(r.log_init);
  j["log_map"] = r.log_map ? number_or_null(*r.log_map) : Json(nullptr);
  j["ratio_to_init"] = same_score(r.log_score, r.log_init) ? Json(1.0) : number_or_null(std::exp(r.log_score - r.log_init));
  j["ratio_to_map"] = r.log_map ? number_or_null(std::exp(r.log_score - *r.log_map)) : Json(nullptr);
  j["solved"] = r.solved;
  j["zero_probability"] = r.zero_probability;
  j["flagged"] = r.flagged;
  j["evaluations_to_best"] = r.evaluations_to_best;
  j["bp_runs"] = r.bp_runs;
  j["unconverged_runs"] = r.unconverged_runs;
  return j;
}

Json to_json(const WidthRecord& r) {
  Json j;
  j["net"] = r.net;
  j["seed"] = r.seed;
  j["map_vars"] = r.map_vars;
  j["width"] = r.width;
  j["unconstrained"] = r.unconstrained;
  return j;
}

Json to_json(const Failure& f) {
  Json j;
  j["net"] = f.net;
  j["bias"] = f.bias;
  j["error"] = f.error;
  return j;
}

namespace {

template <typename Report>
void write_all(std::ostream& out, const Report& report) {
  for (const auto& r : report.records) out << to_json(r).dump() << '\n';
  for (const auto& f : report.failures) out << to_json(f).dump() << '\n';
}

}  // namespace

void write_records(std::ostream& out, const TableReport& report) { write_all(out, report); }
void write_records(std::ostream& out, const BpReport& report) { write_all(out, report); }
void write_records(std::ostream& out, const WidthStudyReport& report) { write_all(out, report); }

GenSpec gen_spec_from_json(const Json& j) {
  GenSpec g;
  g.method = parse_structure(get_or<std::string>(j, "method", "two"));
  g.num_vars = get_or(j, "num_vars", g.num_vars);
  g.connectivity = get_or(j, "connectivity", g.connectivity);
  g.edge_probability = get_or(j, "edge_probability", g.edge_probability);
  g.bias = get_or(j, "bias", g.bias);
  g.seed = get_or(j, "seed", g.seed);
  validate(g);
  return g;
}

Json to_json(const GenSpec& spec) {
  Json j;
  j["method"] = spec.method == StructureMethod::One ? "one" : "two";
  j["num_vars"] = spec.num_vars;
  if (spec.method == StructureMethod::One)
    j["connectivity"] = spec.connectivity;
  else
    j["edge_probability"] = spec.edge_probability;
  j["bias"] = spec.bias;
  j["seed"] = spec.seed;
  return j;
}

TableConfig table_config_from_json(const Json& j) {
  TableConfig c;
  if (j.contains("generator")) c.generator = gen_spec_from_json(j.at("generator"));
  c.biases = get_or(j, "biases", c.biases);
  for (double b : c.biases)
    if (!(b >= 0.0 && b <= 0.5)) throw ValidationError("bias must lie in [0, 0.5]");
  c.num_nets = get_or(j, "num_nets", c.num_nets);
  c.max_map_vars = get_or(j, "max_map_vars", c.max_map_vars);
  if (j.contains("methods"))
    c.methods = parse_methods(j.at("methods"));
  else
    c.methods = parse_methods(Json::array({"Rand-Hill", "Rand-Taboo", "ML", "ML-Hill", "ML-Taboo", "MPE",
                                           "MPE-Hill", "MPE-Taboo", "Seq", "Seq-Hill", "Seq-Taboo"}));
  c.budget = get_or(j, "budget", c.budget);
  c.p_f = get_or(j, "p_f", c.p_f);
  c.seed = get_or(j, "seed", c.seed);
  c.threads = get_or(j, "threads", c.threads);
  c.cross_validate = get_or(j, "cross_validate", c.cross_validate);
  c.cell_budget = get_or(j, "cell_budget", c.cell_budget);
  if (c.num_nets < 0 || c.budget < 0 || c.max_map_vars < 0) throw ValidationError("counts must be nonnegative");
  return c;
}

BpExperimentConfig bp_config_from_json(const Json& j) {
  BpExperimentConfig c;
  c.generator.method = StructureMethod::One;
  c.generator.num_vars = 60;
  c.generator.connectivity = 13;
  c.generator.bias = 0.25;
  if (j.contains("generator")) c.generator = gen_spec_from_json(j.at("generator"));
  c.num_nets = get_or(j, "num_nets", c.num_nets);
  c.max_map_vars = get_or(j, "max_map_vars", c.max_map_vars);
  c.evidence_leaves = get_or(j, "evidence_leaves", c.evidence_leaves);
  c.steps = get_or(j, "steps", c.steps);
  c.p_f = get_or(j, "p_f", c.p_f);
  c.bp.tolerance = get_or(j, "bp_tolerance", c.bp.tolerance);
  c.bp.max_sweeps = get_or(j, "bp_max_sweeps", c.bp.max_sweeps);
  c.seed = get_or(j, "seed", c.seed);
  c.threads = get_or(j, "threads", c.threads);
  c.cell_budget = get_or(j, "cell_budget", c.cell_budget);
  if (c.num_nets < 0 || c.steps < 0 || c.max_map_vars < 0) throw ValidationError("counts must be nonnegative");
  return c;
}

WidthStudyConfig width_config_from_json(const Json& j) {
  WidthStudyConfig c;
  c.generator.method = StructureMethod::One;
  c.generator.num_vars = 100;
  c.generator.connectivity = 12;
  if (j.contains("generator")) c.generator = gen_spec_from_json(j.at("generator"));
  c.num_nets = get_or(j, "num_nets", c.num_nets);
  c.step = get_or(j, "step", c.step);
  c.seed = get_or(j, "seed", c.seed);
  c.threads = get_or(j, "threads", c.threads);
  if (c.num_nets < 0 || c.step < 1) throw ValidationError("num_nets must be nonnegative and step positive");
  return c;
}

}  // namespace bnmap
