#include "bnmap/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "bnmap/elimination.hpp"
#include "bnmap/error.hpp"

namespace bnmap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum(std::span<const double> xs) {
  double total = kNegInf;
  for (double x : xs) total = log_add(total, x);
  return total;
}

// Shared bookkeeping for the three search loops: current state and key,
// last evaluation, best-so-far tracking, budget and trace.
class Walk {
 public:
  Walk(Scorer& scorer, const Instantiation& s0, const SearchConfig& config, int init_evaluations)
      : scorer_(scorer), vars_(scorer.map_vars()), config_(config), rng_(config.seed), s_(s0) {
    for (VarId v : vars_)
      if (!s_.has(v)) throw ValidationError("initial state does not assign MAP variable '" +
                                            scorer.network().variable(v).name + "'");
    result_.best = s_;
    result_.init_evaluations = init_evaluations;
    result_.evaluations_to_best = init_evaluations;
    relative_ = scorer.relative();
    key_ = relative_ ? 0.0 : kNegInf;
    best_key_ = key_;
    record("start", -1);
  }

  bool budget_left() const { return result_.search_evaluations < config_.max_evaluations; }
  bool has_neighbors() const {
    for (VarId v : vars_)
      if (scorer_.network().cardinality(v) > 1) return true;
    return false;
  }
  Rng& rng() { return rng_; }
  const Instantiation& state() const { return s_; }
  const std::vector<VarId>& vars() const { return vars_; }
  int card(std::size_t i) const { return scorer_.network().cardinality(vars_[i]); }
  double key() const { return key_; }

  void evaluate() {
    ev_ = scorer_.evaluate(s_);
    ++result_.search_evaluations;
    result_.flagged = result_.flagged || ev_.flagged;
    if (!relative_) {
      key_ = ev_.log_current;
      consider_best();
    }
    record("eval", -1);
  }

  double neighbor_key(std::size_t i, State x) const {
    return relative_ ? key_ + ev_.log_table[i][x] : ev_.log_table[i][x];
  }

  // Highest-keyed neighbor accepted by `allow`. Exact ties are broken
  // uniformly at random, so zero-probability plateaus are not swept in order.
  template <typename Allow>
  bool best_neighbor(std::size_t& bi, State& bx, double& bk, Allow allow) {
    bool found = false;
    std::uint64_t ties = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i)
      for (State x = 0; x < card(i); ++x) {
        if (x == s_[vars_[i]] || !allow(i, x)) continue;
        const double k = neighbor_key(i, x);
        if (found && k == bk) {
          if (rng_.below(++ties) != 0) continue;
        } else if (!found || k > bk) {
          ties = 1;
        } else {
          continue;
        }
        found = true;
        bi = i;
        bx = x;
        bk = k;
      }
    return found;
  }

  void random_neighbor(std::size_t& bi, State& bx) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) total += static_cast<std::uint64_t>(card(i) - 1);
    std::uint64_t r = rng_.below(total);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      const auto span = static_cast<std::uint64_t>(card(i) - 1);
      if (r < span) {
        bi = i;
        const State x = static_cast<State>(r);
        bx = x >= s_[vars_[i]] ? x + 1 : x;
        return;
      }
      r -= span;
    }
  }

  void move(std::size_t i, State x, const char* kind) {
    key_ = neighbor_key(i, x);
    s_.set(vars_[i], x);
    consider_best();
    record(kind, vars_[i]);
  }

  // Moves to an arbitrary state. A relative scorer estimates the new key to
  // first order from the last evaluation; an exact scorer learns it at the
  // next evaluation.
  void jump(const Instantiation& target, const char* kind) {
    double estimate = key_;
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (target[vars_[i]] != s_[vars_[i]]) estimate += relative_ ? ev_.log_table[i][target[vars_[i]]] : 0.0;
    key_ = relative_ ? estimate : kNegInf;
    s_ = target;
    record(kind, -1);
  }

  void new_climb() { ++climb_; }
  void peak() { ++result_.peaks_found; }

  // No neighbor scores above the current state.
  bool at_peak() const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      for (State x = 0; x < card(i); ++x)
        if (x != s_[vars_[i]] && neighbor_key(i, x) > key()) return false;
    return true;
  }

  SearchResult finish() {
    if (relative_) {
      result_.best_log_score = best_key_;
      result_.approximate = true;
    } else {
      const auto exact = scorer_.exact_log_score(result_.best);
      result_.best_log_score = exact ? *exact : best_key_;
    }
    return std::move(result_);
  }

 private:
  void consider_best() {
    if (!(key_ > best_key_)) return;
    if (!(s_ == result_.best)) {
      result_.best = s_;
      result_.evaluations_to_best = result_.init_evaluations + result_.search_evaluations;
      result_.best_climb = climb_;
    }
    best_key_ = key_;
  }

  void record(const char* kind, VarId var) {
    if (!config_.record_trace) return;
    result_.trace.push_back({result_.search_evaluations, kind, var, s_, key_, best_key_});
  }

  Scorer& scorer_;
  const std::vector<VarId>& vars_;
  const SearchConfig& config_;
  Rng rng_;
  Instantiation s_;
  Evaluation ev_;
  bool relative_ = false;
  double key_ = 0.0;
  double best_key_ = 0.0;
  int climb_ = 0;
  SearchResult result_;
};

std::vector<State> states_over(const Instantiation& s, const std::vector<VarId>& vars) {
  std::vector<State> out;
  out.reserve(vars.size());
  for (VarId v : vars) out.push_back(s[v]);
  return out;
}

}  // namespace

ExactScorer::ExactScorer(const BayesianNetwork& net, Instantiation e, std::vector<VarId> map_vars,
                         std::size_t cell_budget)
    : net_(net), e_(std::move(e)), map_vars_(std::move(map_vars)), jt_(build_jointree(net, cell_budget)) {
  check_instantiation(net_, e_);
  std::sort(map_vars_.begin(), map_vars_.end());
  map_vars_.erase(std::unique(map_vars_.begin(), map_vars_.end()), map_vars_.end());
  for (VarId v : map_vars_) {
    if (v < 0 || static_cast<std::size_t>(v) >= net_.size()) throw ValidationError("unknown MAP variable");
    if (e_.has(v)) throw ValidationError("MAP variable '" + net_.variable(v).name + "' is also evidence");
  }
  log_pe_ = log_probability(jt_, propagate(jt_, e_));
  if (log_pe_ == kNegInf) throw ValidationError("impossible evidence");
}

Evaluation ExactScorer::evaluate(const Instantiation& s) {
  Instantiation restricted;
  for (VarId v : map_vars_) {
    if (!s.has(v)) throw ValidationError("state does not assign MAP variable '" + net_.variable(v).name + "'");
    restricted.set(v, s[v]);
  }
  NeighborScores ns = score_all_neighbors(jt_, restricted, e_);
  return {ns.log_current, std::move(ns.log_table), false};
}

std::vector<std::vector<double>> ExactScorer::log_conditionals(const Instantiation& y, std::span<const VarId> vars) {
  const Propagation prop = propagate(jt_, y.merged(e_));
  std::vector<std::vector<double>> out;
  for (VarId v : vars) {
    std::vector<double> p = log_projection(jt_, prop, v);
    const double z = log_sum(p);
    if (z == kNegInf) throw ValidationError("impossible evidence");
    for (double& x : p) x -= z;
    out.push_back(std::move(p));
  }
  return out;
}

std::optional<double> ExactScorer::exact_log_score(const Instantiation& s) {
  Instantiation restricted;
  for (VarId v : map_vars_)
    if (s.has(v)) restricted.set(v, s[v]);
  return log_probability(jt_, propagate(jt_, restricted.merged(e_)));
}

std::string to_string(InitMode m) {
  switch (m) {
    case InitMode::Rand: return "rand";
    case InitMode::Mpe: return "mpe";
    case InitMode::Ml: return "ml";
    case InitMode::Seq: return "seq";
  }
  return "";
}

std::string to_string(SearchMethod m) {
  switch (m) {
    case SearchMethod::StochasticHill: return "shill";
    case SearchMethod::PureHill: return "hill";
    case SearchMethod::Taboo: return "taboo";
  }
  return "";
}

std::optional<InitMode> parse_init_mode(const std::string& s) {
  for (InitMode m : {InitMode::Rand, InitMode::Mpe, InitMode::Ml, InitMode::Seq})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::optional<SearchMethod> parse_search_method(const std::string& s) {
  for (SearchMethod m : {SearchMethod::StochasticHill, SearchMethod::PureHill, SearchMethod::Taboo})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

Initialization initialize(Scorer& scorer, InitMode mode, Rng& rng) {
  const BayesianNetwork& net = scorer.network();
  const std::vector<VarId>& vars = scorer.map_vars();
  Initialization init;
  switch (mode) {
    case InitMode::Rand:
      for (VarId v : vars) init.state.set(v, static_cast<State>(rng.below(net.cardinality(v))));
      break;
    case InitMode::Mpe: {
      const EliminationResult r = most_probable_explanation(net, scorer.evidence());
      if (r.zero_evidence) throw ValidationError("impossible evidence");
      for (VarId v : vars) init.state.set(v, r.assignment[v]);
      init.evaluations = 1;
      break;
    }
    case InitMode::Ml: {
      const auto conds = scorer.log_conditionals(Instantiation(), vars);
      for (std::size_t i = 0; i < vars.size(); ++i) {
        const auto& c = conds[i];
        init.state.set(vars[i], static_cast<State>(std::max_element(c.begin(), c.end()) - c.begin()));
      }
      init.evaluations = 1;
      break;
    }
    case InitMode::Seq: {
      std::vector<VarId> open = vars;
      while (!open.empty()) {
        const auto conds = scorer.log_conditionals(init.state, open);
        ++init.evaluations;
        std::size_t bi = 0;
        State bx = 0;
        double bv = kNegInf;
        bool found = false;
        for (std::size_t i = 0; i < open.size(); ++i)
          for (State x = 0; x < static_cast<State>(conds[i].size()); ++x)
            if (!found || conds[i][x] > bv) {
              found = true;
              bi = i;
              bx = x;
              bv = conds[i][x];
            }
        init.state.set(open[bi], bx);
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(bi));
      }
      break;
    }
  }
  return init;
}

SearchResult stochastic_hill_climb(Scorer& scorer, const Instantiation& s0, const SearchConfig& config,
                                   int init_evaluations) {
  Walk w(scorer, s0, config, init_evaluations);
  const bool movable = w.has_neighbors();
  while (w.budget_left()) {
    w.evaluate();
    if (!movable) break;
    std::size_t i = 0;
    State x = 0;
    if (w.rng().bernoulli(config.p_f)) {
      w.random_neighbor(i, x);
      w.move(i, x, "random");
      continue;
    }
    double k = 0;
    w.best_neighbor(i, x, k, [](std::size_t, State) { return true; });
    if (k > w.key()) {
      w.move(i, x, "greedy");
    } else {
      w.peak();
      w.random_neighbor(i, x);
      w.move(i, x, "random");
    }
  }
  return w.finish();
}

SearchResult pure_hill_climb_restart(Scorer& scorer, const Instantiation& s0, const SearchConfig& config,
                                     int init_evaluations) {
  Walk w(scorer, s0, config, init_evaluations);
  const bool movable = w.has_neighbors();
  while (w.budget_left()) {
    w.evaluate();
    std::size_t i = 0;
    State x = 0;
    double k = 0;
    if (movable && w.best_neighbor(i, x, k, [](std::size_t, State) { return true; }) && k > w.key()) {
      w.move(i, x, "greedy");
      continue;
    }
    w.peak();
    if (!config.restart_on_peak || !movable) break;
    // Random-walk restart: flip each variable with the configured probability, at least one.
    Instantiation next = w.state();
    const auto& vars = w.vars();
    bool flipped = false;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (w.card(j) < 2 || !w.rng().bernoulli(config.restart_flip_prob)) continue;
      const State other = static_cast<State>(w.rng().below(w.card(j) - 1));
      next.set(vars[j], other >= w.state()[vars[j]] ? other + 1 : other);
      flipped = true;
    }
    if (!flipped) {
      w.random_neighbor(i, x);
      next.set(vars[i], x);
    }
    w.new_climb();
    w.jump(next, "restart");
  }
  return w.finish();
}

SearchResult taboo_search(Scorer& scorer, const Instantiation& s0, const SearchConfig& config, int init_evaluations) {
  Walk w(scorer, s0, config, init_evaluations);
  const auto& vars = w.vars();
  std::set<std::vector<State>> visited{states_over(s0, vars)};
  const bool movable = w.has_neighbors();
  while (w.budget_left()) {
    w.evaluate();
    if (!movable) break;
    std::size_t i = 0;
    State x = 0;
    double k = 0;
    if (w.at_peak()) w.peak();
    std::vector<State> probe = states_over(w.state(), vars);
    const bool found = w.best_neighbor(i, x, k, [&](std::size_t j, State y) {
      const State keep = probe[j];
      probe[j] = y;
      const bool fresh = !visited.count(probe);
      probe[j] = keep;
      return fresh;
    });
    if (found) {
      w.move(i, x, "taboo");
      visited.insert(states_over(w.state(), vars));
      continue;
    }
    // Every neighbor has been seen: take a few random steps.
    Instantiation next = w.state();
    for (int step = 0; step < config.taboo_random_kick; ++step) {
      const std::uint64_t j = w.rng().below(vars.size());
      const State other = static_cast<State>(w.rng().below(w.card(j) - 1));
      next.set(vars[j], other >= next[vars[j]] ? other + 1 : other);
      visited.insert(states_over(next, vars));
    }
    w.jump(next, "kick");
  }
  return w.finish();
}

SearchResult run_search(SearchMethod method, Scorer& scorer, const Instantiation& s0, const SearchConfig& config,
                        int init_evaluations) {
  switch (method) {
    case SearchMethod::StochasticHill: return stochastic_hill_climb(scorer, s0, config, init_evaluations);
    case SearchMethod::PureHill: return pure_hill_climb_restart(scorer, s0, config, init_evaluations);
    case SearchMethod::Taboo: return taboo_search(scorer, s0, config, init_evaluations);
  }
  return {};
}

}  // namespace bnmap
