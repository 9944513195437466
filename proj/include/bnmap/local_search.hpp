#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bnmap/jointree.hpp"
#include "bnmap/network.hpp"
#include "bnmap/rng.hpp"

namespace bnmap {

/// One evaluation of a complete MAP instantiation s. `log_table[i][x]` scores
/// the neighbor that sets map_vars()[i] to x. Exact scorers report
/// log Pr(s', e) and the true log Pr(s, e) as `log_current`; relative
/// scorers report log(score(s') / score(s)) with `log_current` = 0.
struct Evaluation {
  double log_current = 0.0;
  std::vector<std::vector<double>> log_table;
  bool flagged = false;  // scorer saw something it could not represent (see BpScorer)
};

class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual const BayesianNetwork& network() const = 0;
  virtual const Instantiation& evidence() const = 0;
  /// MAP variables in increasing id order.
  virtual const std::vector<VarId>& map_vars() const = 0;
  /// True when evaluations are ratios to the current state.
  virtual bool relative() const = 0;

  virtual Evaluation evaluate(const Instantiation& s) = 0;
  /// log Pr(x | e, y) for every state x of each listed variable.
  virtual std::vector<std::vector<double>> log_conditionals(const Instantiation& y,
                                                            std::span<const VarId> vars) = 0;
  /// log Pr(s, e) when the scorer can compute it exactly.
  virtual std::optional<double> exact_log_score(const Instantiation& s) = 0;
};

/// Jointree-backed scorer: every evaluation is one two-phase propagation.
class ExactScorer : public Scorer {
 public:
  /// Throws ValidationError("impossible evidence") when Pr(e) = 0.
  ExactScorer(const BayesianNetwork& net, Instantiation e, std::vector<VarId> map_vars,
              std::size_t cell_budget = std::size_t{1} << 26);

  const BayesianNetwork& network() const override { return net_; }
  const Instantiation& evidence() const override { return e_; }
  const std::vector<VarId>& map_vars() const override { return map_vars_; }
  bool relative() const override { return false; }
  Evaluation evaluate(const Instantiation& s) override;
  std::vector<std::vector<double>> log_conditionals(const Instantiation& y, std::span<const VarId> vars) override;
  std::optional<double> exact_log_score(const Instantiation& s) override;

  const Jointree& jointree() const { return jt_; }
  double log_evidence() const { return log_pe_; }

 private:
  const BayesianNetwork& net_;
  Instantiation e_;
  std::vector<VarId> map_vars_;
  Jointree jt_;
  double log_pe_ = 0.0;
};

enum class InitMode { Rand, Mpe, Ml, Seq };
enum class SearchMethod { StochasticHill, PureHill, Taboo };

std::string to_string(InitMode m);
std::string to_string(SearchMethod m);
std::optional<InitMode> parse_init_mode(const std::string& s);
std::optional<SearchMethod> parse_search_method(const std::string& s);

struct Initialization {
  Instantiation state;  // over the scorer's MAP variables
  int evaluations = 0;  // Rand 0, MPE 1, ML 1, Seq m
};

/// Starting point for search. MPE uses exact elimination on the scorer's network.
Initialization initialize(Scorer& scorer, InitMode mode, Rng& rng);

struct SearchConfig {
  int max_evaluations = 150;
  double p_f = 0.35;
  double restart_flip_prob = 0.3;
  int taboo_random_kick = 5;
  std::uint64_t seed = 0;
  bool restart_on_peak = true;  // pure hill climbing: false stops at the first peak
  bool record_trace = false;
};

struct TraceStep {
  int evaluation = 0;   // search evaluations done when the step happened
  std::string kind;     // "eval", "greedy", "random", "taboo", "kick", "restart"
  VarId var = -1;       // flipped variable for single moves
  Instantiation state;  // state after the step
  double key = 0.0;     // log score key of the state
  double best_key = 0.0;
};

struct SearchResult {
  Instantiation best;
  /// Natural-log score of `best`. With an exact scorer it is re-verified at
  /// return; with a relative scorer it is the cumulative-ratio key.
  double best_log_score = 0.0;
  bool approximate = false;
  bool flagged = false;
  int evaluations_to_best = 0;  // includes the initialization's evaluations
  int init_evaluations = 0;
  int search_evaluations = 0;
  int peaks_found = 0;
  int best_climb = 0;  // restarts preceding the climb that found `best`
  std::vector<TraceStep> trace;
};

SearchResult stochastic_hill_climb(Scorer& scorer, const Instantiation& s0, const SearchConfig& config,
                                   int init_evaluations = 0);
SearchResult pure_hill_climb_restart(Scorer& scorer, const Instantiation& s0, const SearchConfig& config,
                                     int init_evaluations = 0);
SearchResult taboo_search(Scorer& scorer, const Instantiation& s0, const SearchConfig& config,
                          int init_evaluations = 0);
SearchResult run_search(SearchMethod method, Scorer& scorer, const Instantiation& s0, const SearchConfig& config,
                        int init_evaluations = 0);

}  // namespace bnmap
