#include "bnmap/loopy_bp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "bnmap/error.hpp"
#include "bnmap/jointree.hpp"

namespace bnmap {

namespace {

// CPT rows of one variable with the parent states of each row decoded.
struct VarTable {
  std::vector<double> theta;
  std::vector<State> row_states;  // parents.size() states per row
};

VarTable table_of(const BayesianNetwork& net, VarId x) {
  VarTable t;
  t.theta = net.cpt(x).linear_values();
  const auto& ps = net.parents(x);
  const std::size_t rows = t.theta.size() / static_cast<std::size_t>(net.cardinality(x));
  std::vector<State> st(ps.size(), 0);
  for (std::size_t r = 0; r < rows; ++r) {
    t.row_states.insert(t.row_states.end(), st.begin(), st.end());
    for (std::size_t i = ps.size(); i-- > 0;) {
      if (++st[i] < net.cardinality(ps[i])) break;
      st[i] = 0;
    }
  }
  return t;
}

// Per-variable tables reused by every node update.
struct Layout {
  std::vector<VarTable> tables;
  std::vector<std::vector<int>> pos_in_child;   // X's index among parents(children[X][j])
  std::vector<std::vector<int>> pos_in_parent;  // X's index among children(parents[X][i])

  explicit Layout(const BayesianNetwork& net) {
    const std::size_t n = net.size();
    pos_in_child.resize(n);
    pos_in_parent.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      const auto x = static_cast<VarId>(v);
      tables.push_back(table_of(net, x));
      for (VarId c : net.children(x)) {
        const auto& cp = net.parents(c);
        pos_in_child[v].push_back(static_cast<int>(std::find(cp.begin(), cp.end(), x) - cp.begin()));
      }
      for (VarId p : net.parents(x)) {
        const auto& ch = net.children(p);
        pos_in_parent[v].push_back(static_cast<int>(std::find(ch.begin(), ch.end(), x) - ch.begin()));
      }
    }
  }
};

double indicator(const Instantiation& e, VarId x, State s) { return !e.has(x) || e[x] == s ? 1.0 : 0.0; }

// Normalizes in place; an all-zero vector becomes uniform and returns false.
bool normalize(std::vector<double>& m) {
  double total = 0;
  for (double x : m) total += x;
  if (!(total > 0)) {
    std::fill(m.begin(), m.end(), 1.0 / static_cast<double>(m.size()));
    return false;
  }
  for (double& x : m) x /= total;
  return true;
}

// Causal support pi(x) = sum_u Pr(x | u) prod_i pi_i(u_i).
std::vector<double> causal_support(const MessageStore& store, const VarTable& table, VarId x) {
  const BayesianNetwork& net = *store.net;
  const int k = net.cardinality(x);
  const std::size_t np = net.parents(x).size();
  const auto& theta = table.theta;
  const auto& rs = table.row_states;
  const std::size_t rows = theta.size() / static_cast<std::size_t>(k);
  std::vector<double> out(k, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double w = 1.0;
    for (std::size_t i = 0; i < np && w != 0.0; ++i) w *= store.pi[x][i][rs[r * np + i]];
    if (w == 0.0) continue;
    for (int s = 0; s < k; ++s) out[s] += w * theta[r * k + s];
  }
  return out;
}

// Product of pi(x) and the child messages, with or without X's evidence.
std::vector<double> belief(const MessageStore& store, VarId x, bool with_evidence) {
  std::vector<double> b = causal_support(store, table_of(*store.net, x), x);
  for (const auto& m : store.lambda[x])
    for (std::size_t s = 0; s < b.size(); ++s) b[s] *= m[s];
  if (with_evidence)
    for (std::size_t s = 0; s < b.size(); ++s) b[s] *= indicator(store.evidence, x, static_cast<State>(s));
  return b;
}

double update_node(MessageStore& store, const Layout& layout, VarId x) {
  const BayesianNetwork& net = *store.net;
  const int k = net.cardinality(x);
  const auto& parents = net.parents(x);
  const auto& children = net.children(x);
  const std::size_t np = parents.size();
  double change = 0.0;

  auto commit = [&](std::vector<double>& slot, std::vector<double>& fresh) {
    if (!normalize(fresh)) ++store.zero_messages;
    for (std::size_t s = 0; s < fresh.size(); ++s) change = std::max(change, std::abs(fresh[s] - slot[s]));
    slot.swap(fresh);
  };

  const std::vector<double> pi_x = causal_support(store, layout.tables[x], x);
  std::vector<double> ind(k);
  for (int s = 0; s < k; ++s) ind[s] = indicator(store.evidence, x, s);

  for (std::size_t j = 0; j < children.size(); ++j) {
    std::vector<double> m(k);
    for (int s = 0; s < k; ++s) {
      double v = ind[s] * pi_x[s];
      for (std::size_t l = 0; l < children.size(); ++l)
        if (l != j) v *= store.lambda[x][l][s];
      m[s] = v;
    }
    commit(store.pi[children[j]][layout.pos_in_child[x][j]], m);
  }

  if (np == 0) return change;
  std::vector<double> lam(k);
  for (int s = 0; s < k; ++s) {
    double v = ind[s];
    for (const auto& m : store.lambda[x]) v *= m[s];
    lam[s] = v;
  }
  const auto& theta = layout.tables[x].theta;
  const auto& rs = layout.tables[x].row_states;
  const std::size_t rows = theta.size() / static_cast<std::size_t>(k);
  for (std::size_t i = 0; i < np; ++i) {
    std::vector<double> m(net.cardinality(parents[i]), 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      double w = 1.0;
      for (std::size_t q = 0; q < np && w != 0.0; ++q)
        if (q != i) w *= store.pi[x][q][rs[r * np + q]];
      if (w == 0.0) continue;
      double inner = 0.0;
      for (int s = 0; s < k; ++s) inner += theta[r * k + s] * lam[s];
      m[rs[r * np + i]] += w * inner;
    }
    commit(store.lambda[parents[i]][layout.pos_in_parent[x][i]], m);
  }
  return change;
}

}  // namespace

MessageStore bp_run(const BayesianNetwork& net, const Instantiation& e, const BpConfig& config) {
  check_instantiation(net, e);
  if (!(config.tolerance > 0)) throw ValidationError("BP tolerance must be positive");
  const std::vector<VarId>& order = config.order.empty() ? net.topological_order() : config.order;
  if (order.size() != net.size()) throw ValidationError("BP order must list every variable once");

  MessageStore store;
  store.net = &net;
  store.evidence = e;
  const std::size_t n = net.size();
  store.pi.resize(n);
  store.lambda.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto x = static_cast<VarId>(v);
    for (VarId p : net.parents(x)) store.pi[v].emplace_back(net.cardinality(p), 1.0);
    store.lambda[v].assign(net.children(x).size(), std::vector<double>(net.cardinality(x), 1.0));
  }
  const Layout layout(net);
  while (store.sweeps < config.max_sweeps) {
    double residual = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) residual = std::max(residual, update_node(store, layout, *it));
    for (VarId x : order) residual = std::max(residual, update_node(store, layout, x));
    ++store.sweeps;
    store.residual = residual;
    if (residual < config.tolerance) {
      store.converged = true;
      break;
    }
  }
  return store;
}

std::vector<double> bp_marginal(const MessageStore& store, VarId x) {
  std::vector<double> b = belief(store, x, true);
  if (!normalize(b)) throw ValidationError("contradictory evidence at " + store.net->variable(x).name);
  return b;
}

std::vector<double> bp_retracted_marginal(const MessageStore& store, VarId x) {
  std::vector<double> b = belief(store, x, false);
  if (!normalize(b)) throw ValidationError("contradictory evidence at " + store.net->variable(x).name);
  return b;
}

NeighborRatios bp_neighbor_ratios(const BayesianNetwork& net, const Instantiation& e, const Instantiation& s,
                                  std::span<const VarId> map_vars, const BpConfig& config) {
  const MessageStore store = bp_run(net, s.merged(e), config);
  NeighborRatios out;
  out.converged = store.converged;
  out.sweeps = store.sweeps;
  for (VarId x : map_vars) {
    if (!s.has(x)) throw ValidationError("state does not assign MAP variable '" + net.variable(x).name + "'");
    const std::vector<double> r = belief(store, x, false);
    const double self = r[s[x]];
    std::vector<double> row(r.size());
    for (std::size_t st = 0; st < r.size(); ++st) {
      if (static_cast<State>(st) == s[x])
        row[st] = 1.0;
      else
        row[st] = self > 0 ? r[st] / self : std::numeric_limits<double>::infinity();
    }
    out.vars.push_back(x);
    out.ratio.push_back(std::move(row));
    out.infinite.push_back(!(self > 0));
  }
  return out;
}

BpScorer::BpScorer(const BayesianNetwork& net, Instantiation e, std::vector<VarId> map_vars, BpConfig config)
    : net_(net), e_(std::move(e)), map_vars_(std::move(map_vars)), config_(std::move(config)) {
  check_instantiation(net_, e_);
  std::sort(map_vars_.begin(), map_vars_.end());
  map_vars_.erase(std::unique(map_vars_.begin(), map_vars_.end()), map_vars_.end());
  for (VarId v : map_vars_) {
    if (v < 0 || static_cast<std::size_t>(v) >= net_.size()) throw ValidationError("unknown MAP variable");
    if (e_.has(v)) throw ValidationError("MAP variable '" + net_.variable(v).name + "' is also evidence");
  }
}

Evaluation BpScorer::evaluate(const Instantiation& s) {
  const NeighborRatios nr = bp_neighbor_ratios(net_, e_, s, map_vars_, config_);
  ++runs_;
  if (!nr.converged) ++unconverged_;
  Evaluation ev;
  for (std::size_t i = 0; i < nr.vars.size(); ++i) {
    std::vector<double> row(nr.ratio[i].size(), 0.0);
    if (nr.infinite[i])
      ev.flagged = true;
    else
      for (std::size_t st = 0; st < row.size(); ++st) row[st] = std::log(nr.ratio[i][st]);
    ev.log_table.push_back(std::move(row));
  }
  return ev;
}

std::vector<std::vector<double>> BpScorer::log_conditionals(const Instantiation& y, std::span<const VarId> vars) {
  const MessageStore store = bp_run(net_, y.merged(e_), config_);
  ++runs_;
  if (!store.converged) ++unconverged_;
  std::vector<std::vector<double>> out;
  for (VarId v : vars) {
    std::vector<double> b = belief(store, v, true);
    normalize(b);
    for (double& x : b) x = std::log(x);
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<std::pair<double, double>> retracted_scatter(const BayesianNetwork& net, const Instantiation& e,
                                                         const BpConfig& config) {
  const Jointree jt = build_jointree(net);
  const Propagation prop = propagate(jt, e);
  const MessageStore store = bp_run(net, e, config);
  std::vector<std::pair<double, double>> points;
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto x = static_cast<VarId>(v);
    std::vector<double> exact = log_projection(jt, prop, x);
    for (double& l : exact) l = std::exp(l);
    if (!normalize(exact)) throw ValidationError("impossible evidence");
    const std::vector<double> approx = bp_retracted_marginal(store, x);
    for (std::size_t s = 0; s < exact.size(); ++s) points.emplace_back(exact[s], approx[s]);
  }
  return points;
}

void write_scatter(std::ostream& out, std::span<const std::pair<double, double>> points) {
  const auto old = out.precision(17);
  for (const auto& [a, b] : points) out << a << ' ' << b << '\n';
  out.precision(old);
}

}  // namespace bnmap
