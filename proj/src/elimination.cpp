#include "bnmap/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/dynamic_bitset.hpp>

#include "bnmap/error.hpp"
#include "bnmap/rng.hpp"

namespace bnmap {

namespace {

using Bits = boost::dynamic_bitset<>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Bits bits_of(std::size_t n, std::span<const VarId> vars) {
  Bits b(n);
  for (VarId v : vars) {
    if (v < 0 || static_cast<std::size_t>(v) >= n)
      throw ValidationError("variable id " + std::to_string(v) + " out of range");
    b.set(static_cast<std::size_t>(v));
  }
  return b;
}

std::vector<VarId> vars_of(const Bits& b) {
  std::vector<VarId> out;
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.push_back(static_cast<VarId>(i));
  return out;
}

Bits family_bits(const BayesianNetwork& net, VarId v) {
  Bits b(net.size());
  b.set(static_cast<std::size_t>(v));
  for (VarId p : net.parents(v)) b.set(static_cast<std::size_t>(p));
  return b;
}

void require_permutation(const BayesianNetwork& net, std::span<const VarId> order) {
  if (order.size() != net.size()) throw ValidationError("elimination order is not a permutation");
  Bits seen(net.size());
  for (VarId v : order) {
    if (v < 0 || static_cast<std::size_t>(v) >= net.size() || seen.test(static_cast<std::size_t>(v)))
      throw ValidationError("elimination order is not a permutation");
    seen.set(static_cast<std::size_t>(v));
  }
}

std::string describe_scope(const BayesianNetwork& net, const std::vector<VarId>& scope) {
  std::string s = "{";
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (i) s += ",";
    s += net.variable(scope[i]).name;
  }
  return s + "}";
}

}  // namespace

EliminationOrder min_fill_order(const BayesianNetwork& net, std::span<const VarId> last, Rng* tie_breaker) {
  const std::size_t n = net.size();
  std::vector<Bits> adj(n, Bits(n));
  for (std::size_t v = 0; v < n; ++v) {
    const Bits fam = family_bits(net, static_cast<VarId>(v));
    for (auto a = fam.find_first(); a != Bits::npos; a = fam.find_next(a)) {
      adj[a] |= fam;
      adj[a].reset(a);
    }
  }
  const Bits is_last = bits_of(n, last);
  Bits alive(n);
  alive.set();
  Bits free_alive = alive - is_last;

  EliminationOrder result;
  result.constrained_last.assign(last.begin(), last.end());
  std::sort(result.constrained_last.begin(), result.constrained_last.end());
  result.order.reserve(n);

  std::vector<std::size_t> tied;
  while (alive.any()) {
    const Bits& pool = free_alive.any() ? free_alive : alive;
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    tied.clear();
    for (auto v = pool.find_first(); v != Bits::npos; v = pool.find_next(v)) {
      const Bits& nb = adj[v];
      std::size_t missing = 0;
      for (auto a = nb.find_first(); a != Bits::npos && missing / 2 <= best_fill; a = nb.find_next(a))
        missing += (nb - adj[a]).count() - 1;  // a itself is in nb but not adj[a]
      const std::size_t fill = missing / 2;
      if (fill < best_fill) {
        best_fill = fill;
        tied.assign(1, v);
      } else if (fill == best_fill) {
        tied.push_back(v);
      }
    }
    const std::size_t v = tie_breaker ? tied[tie_breaker->below(tied.size())] : tied.front();
    const Bits nb = adj[v];
    for (auto a = nb.find_first(); a != Bits::npos; a = nb.find_next(a)) {
      adj[a] |= nb;
      adj[a].reset(a);
      adj[a].reset(v);
    }
    adj[v].reset();
    alive.reset(v);
    free_alive.reset(v);
    result.order.push_back(static_cast<VarId>(v));
  }
  return result;
}

WidthReport order_width(const BayesianNetwork& net, std::span<const VarId> order,
                        std::span<const VarId> evidence_vars) {
  require_permutation(net, order);
  const std::size_t n = net.size();
  const Bits clamped = bits_of(n, evidence_vars);
  std::vector<double> log2card(n);
  for (std::size_t v = 0; v < n; ++v)
    log2card[v] = clamped.test(v) ? 0.0 : std::log2(static_cast<double>(net.cardinality(static_cast<VarId>(v))));

  std::vector<Bits> pool;
  for (std::size_t v = 0; v < n; ++v) pool.push_back(family_bits(net, static_cast<VarId>(v)));

  WidthReport report;
  double best = -1.0;
  for (VarId x : order) {
    Bits merged(n);
    std::vector<Bits> rest;
    rest.reserve(pool.size());
    for (Bits& b : pool) {
      if (b.test(static_cast<std::size_t>(x)))
        merged |= b;
      else
        rest.push_back(std::move(b));
    }
    double size = 0.0;
    for (auto i = merged.find_first(); i != Bits::npos; i = merged.find_next(i)) size += log2card[i];
    report.step_log2_sizes.push_back(size);
    if (size > best) {
      best = size;
      report.largest_scope = vars_of(merged);
    }
    merged.reset(static_cast<std::size_t>(x));
    if (merged.any()) rest.push_back(std::move(merged));
    pool = std::move(rest);
  }
  report.width = order.empty() ? -1.0 : best - 1.0;
  return report;
}

EvaluationTree build_evaluation_tree(const BayesianNetwork& net, std::span<const VarId> order) {
  require_permutation(net, order);
  const std::size_t n = net.size();
  struct Item {
    Bits scope;
    int origin_step;  // -1: a CPT leaf
    VarId cpt;
  };
  std::vector<Item> pool;
  for (std::size_t v = 0; v < n; ++v) pool.push_back({family_bits(net, static_cast<VarId>(v)), -1, static_cast<VarId>(v)});

  EvaluationTree tree;
  tree.order.assign(order.begin(), order.end());
  tree.step_scope.resize(n);
  tree.leaf_cpts.resize(n);
  tree.child_steps.resize(n);
  tree.parent_step.assign(n, -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto x = static_cast<std::size_t>(order[i]);
    Bits merged(n);
    std::vector<Item> rest;
    for (Item& it : pool) {
      if (!it.scope.test(x)) {
        rest.push_back(std::move(it));
        continue;
      }
      merged |= it.scope;
      if (it.origin_step >= 0) {
        tree.child_steps[i].push_back(it.origin_step);
        tree.parent_step[it.origin_step] = static_cast<int>(i);
      } else {
        tree.leaf_cpts[i].push_back(it.cpt);
      }
    }
    tree.step_scope[i] = vars_of(merged);
    merged.reset(x);
    rest.push_back({std::move(merged), static_cast<int>(i), -1});
    pool = std::move(rest);
  }
  return tree;
}

bool validate_map_order(const BayesianNetwork& net, std::span<const VarId> order, std::span<const VarId> q_vars,
                        std::span<const VarId> evidence_vars) {
  const EvaluationTree tree = build_evaluation_tree(net, order);
  const Bits q = bits_of(net.size(), q_vars);
  const Bits allowed = q | bits_of(net.size(), evidence_vars);
  for (std::size_t i = 0; i < tree.order.size(); ++i) {
    if (!q.test(static_cast<std::size_t>(tree.order[i]))) continue;
    for (VarId v : tree.step_scope[i])
      if (!allowed.test(static_cast<std::size_t>(v))) return false;
  }
  return true;
}

EliminationOrder push_q_last(const BayesianNetwork& net, std::span<const VarId> order, std::span<const VarId> q_vars) {
  if (!validate_map_order(net, order, q_vars)) throw ValidationError("order not valid for MAP");
  const Bits q = bits_of(net.size(), q_vars);
  EliminationOrder out;
  out.constrained_last.assign(q_vars.begin(), q_vars.end());
  std::sort(out.constrained_last.begin(), out.constrained_last.end());
  for (VarId v : order)
    if (!q.test(static_cast<std::size_t>(v))) out.order.push_back(v);
  for (VarId v : order)
    if (q.test(static_cast<std::size_t>(v))) out.order.push_back(v);
  if (order_width(net, out.order).width != order_width(net, order).width)
    throw std::logic_error("push_q_last changed the order width");
  return out;
}

EliminationResult eliminate(const BayesianNetwork& net, const Instantiation& e, std::span<const VarId> order,
                            QueryMode mode, std::span<const VarId> map_vars, const EliminationOptions& options) {
  check_instantiation(net, e);
  require_permutation(net, order);
  const std::size_t n = net.size();
  const std::vector<VarId> evidence_vars = e.vars();

  std::vector<bool> maximize(n, false);
  if (mode == QueryMode::Mpe) {
    for (std::size_t v = 0; v < n; ++v) maximize[v] = !e.has(static_cast<VarId>(v));
  } else if (mode == QueryMode::Map) {
    for (VarId v : map_vars) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw ValidationError("unknown MAP variable");
      if (e.has(v)) throw ValidationError("MAP variable '" + net.variable(v).name + "' is also evidence");
      maximize[v] = true;
    }
    if (!validate_map_order(net, order, map_vars, evidence_vars)) throw ValidationError("order not valid for MAP");
  }

  std::vector<Potential> pool;
  pool.reserve(2 * n);
  for (const Potential& cpt : net.cpts()) pool.push_back(reduce_by_evidence(cpt, e));

  struct MaxStep {
    VarId var;
    MaxOutResult result;
  };
  std::vector<MaxStep> max_steps;

  for (VarId x : order) {
    std::vector<Potential> rest;
    std::vector<const Potential*> picked;
    std::vector<VarId> scope;
    double log2_cells = 0.0;
    for (const Potential& p : pool) {
      if (!p.contains(x)) continue;
      picked.push_back(&p);
      for (std::size_t i = 0; i < p.scope().size(); ++i) {
        if (std::find(scope.begin(), scope.end(), p.scope()[i]) == scope.end()) {
          scope.push_back(p.scope()[i]);
          log2_cells += std::log2(static_cast<double>(p.cards()[i]));
        }
      }
    }
    if (log2_cells > std::log2(static_cast<double>(options.cell_budget)))
      throw ResourceError("elimination step for '" + net.variable(x).name + "' needs a table over " +
                          describe_scope(net, scope) + " exceeding the cell budget");
    Potential product;
    for (const Potential* p : picked) product = multiply(product, *p);
    for (Potential& p : pool)
      if (!p.contains(x)) rest.push_back(std::move(p));
    const VarId one[] = {x};
    if (maximize[x]) {
      MaxOutResult r = maximize_out(product, one);
      rest.push_back(r.potential);
      max_steps.push_back({x, std::move(r)});
    } else {
      rest.push_back(sum_out(product, one));
    }
    pool = std::move(rest);
  }

  EliminationResult out;
  out.log_value = 0.0;
  for (const Potential& p : pool) out.log_value += p.log_scalar();
  if (out.log_value == kNegInf) {
    out.zero_evidence = true;
    out.value = 0.0;
    return out;
  }
  out.value = std::exp(out.log_value);
  if (mode == QueryMode::Pr) return out;

  Instantiation x = e;
  out.assignment = Instantiation(n);
  for (auto it = max_steps.rbegin(); it != max_steps.rend(); ++it) {
    const Potential& reduced = it->result.potential;
    const std::size_t cell = reduced.scope().empty() ? 0 : reduced.index_of(x);
    const State s = it->result.argmax(cell)[0];
    x.set(it->var, s);
    out.assignment.set(it->var, s);
  }
  return out;
}

double log_probability_of_evidence(const BayesianNetwork& net, const Instantiation& e,
                                   const EliminationOptions& options) {
  const EliminationOrder order = min_fill_order(net);
  return eliminate(net, e, order.order, QueryMode::Pr, {}, options).log_value;
}

double probability_of_evidence(const BayesianNetwork& net, const Instantiation& e, const EliminationOptions& options) {
  const double l = log_probability_of_evidence(net, e, options);
  return l == kNegInf ? 0.0 : std::exp(l);
}

EliminationResult most_probable_explanation(const BayesianNetwork& net, const Instantiation& e,
                                            const EliminationOptions& options) {
  const EliminationOrder order = min_fill_order(net);
  return eliminate(net, e, order.order, QueryMode::Mpe, {}, options);
}

EliminationResult exact_map(const BayesianNetwork& net, const Instantiation& e, std::span<const VarId> map_vars,
                            const EliminationOptions& options) {
  std::vector<VarId> last(map_vars.begin(), map_vars.end());
  const EliminationOrder order = min_fill_order(net, last);
  return eliminate(net, e, order.order, QueryMode::Map, map_vars, options);
}

WidthStats summarize_widths(std::span<const double> widths) {
  WidthStats s;
  if (widths.empty()) return s;
  s.min = *std::min_element(widths.begin(), widths.end());
  s.max = *std::max_element(widths.begin(), widths.end());
  s.mean = std::accumulate(widths.begin(), widths.end(), 0.0) / static_cast<double>(widths.size());
  double acc = 0.0;
  for (double w : widths) acc += std::exp2(w - s.max);
  s.weighted_mean = s.max + std::log2(acc / static_cast<double>(widths.size()));
  return s;
}

std::vector<WidthReport> width_profile(const BayesianNetwork& net, std::span<const std::vector<VarId>> q_schedule) {
  std::vector<WidthReport> out;
  out.reserve(q_schedule.size());
  for (const auto& q : q_schedule) out.push_back(order_width(net, min_fill_order(net, q).order));
  return out;
}

std::vector<std::vector<VarId>> growing_q_schedule(std::size_t n, std::size_t step, Rng& rng) {
  if (step == 0) step = 1;
  std::vector<VarId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  std::vector<std::vector<VarId>> schedule;
  for (std::size_t k = 0;; k += step) {
    const std::size_t take = std::min(k, n);
    std::vector<VarId> q(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(q.begin(), q.end());
    schedule.push_back(std::move(q));
    if (take == n) break;
  }
  return schedule;
}

}  // namespace bnmap
