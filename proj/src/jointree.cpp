#include "bnmap/jointree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "bnmap/elimination.hpp"
#include "bnmap/error.hpp"

namespace bnmap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_subset(const std::vector<VarId>& a, const std::vector<VarId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<VarId> intersect(const std::vector<VarId>& a, const std::vector<VarId>& b) {
  std::vector<VarId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

int smallest_containing(const std::vector<std::vector<VarId>>& clusters, const std::vector<VarId>& scope) {
  int best = -1;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (!is_subset(scope, clusters[c])) continue;
    if (best < 0 || clusters[c].size() < clusters[best].size()) best = static_cast<int>(c);
  }
  return best;
}

// Cluster table with the hosted indicators set from `setting`, skipping `skip`.
Potential local_table(const Jointree& jt, int c, const Instantiation& setting, VarId skip) {
  Instantiation clamp;
  for (VarId v : jt.hosted_indicators[c])
    if (v != skip && setting.has(v)) clamp.set(v, setting[v]);
  if (clamp.empty()) return jt.cluster_base[c];
  return reduce_by_evidence(jt.cluster_base[c], clamp);
}

// Product of `local` with every message into cluster c except the one over `skip_edge`.
Potential gather(const Jointree& jt, const Propagation& prop, int c, Potential local, int skip_edge) {
  for (int e : jt.child_edges[c])
    if (e != skip_edge) local = multiply(local, prop.up[e]);
  const int pe = jt.parent_edge[c];
  if (pe >= 0 && pe != skip_edge) local = multiply(local, prop.down[pe]);
  return local;
}

}  // namespace

std::size_t Jointree::largest_cluster() const {
  std::size_t best = 0;
  for (const auto& c : clusters) best = std::max(best, c.size());
  return best;
}

Jointree build_jointree(const BayesianNetwork& net, std::span<const VarId> order, std::size_t cell_budget) {
  const std::size_t n = net.size();
  if (n == 0) throw ValidationError("network has no variables");
  const EvaluationTree tree = build_evaluation_tree(net, order);

  std::vector<std::vector<VarId>> raw = tree.step_scope;
  std::vector<std::set<int>> adj(n);
  int previous_root = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const int p = tree.parent_step[i];
    if (p >= 0) {
      adj[i].insert(p);
      adj[p].insert(static_cast<int>(i));
    } else {
      if (previous_root >= 0) {
        adj[i].insert(previous_root);
        adj[previous_root].insert(static_cast<int>(i));
      }
      previous_root = static_cast<int>(i);
    }
  }

  // Fold every cluster contained in a neighbor into that neighbor.
  std::vector<bool> alive(n, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n && !changed; ++i) {
      if (!alive[i]) continue;
      for (int j : adj[i]) {
        if (!is_subset(raw[i], raw[j])) continue;
        for (int k : adj[i]) {
          if (k == j) continue;
          adj[k].erase(static_cast<int>(i));
          adj[k].insert(j);
          adj[j].insert(k);
        }
        adj[j].erase(static_cast<int>(i));
        adj[i].clear();
        alive[i] = false;
        changed = true;
        break;
      }
    }
  }

  Jointree jt;
  jt.num_vars = n;
  for (std::size_t v = 0; v < n; ++v) jt.cards.push_back(net.cardinality(static_cast<VarId>(v)));
  std::vector<int> renumber(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) {
      renumber[i] = static_cast<int>(jt.clusters.size());
      jt.clusters.push_back(raw[i]);
    }
  const std::size_t m = jt.clusters.size();
  std::vector<std::vector<int>> nbrs(m);
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i])
      for (int j : adj[i]) nbrs[renumber[i]].push_back(renumber[j]);

  for (std::size_t c = 0; c < m; ++c) {
    double cells = 1;
    for (VarId v : jt.clusters[c]) cells *= jt.cards[v];
    if (cells > static_cast<double>(cell_budget)) {
      std::string names;
      for (VarId v : jt.clusters[c]) names += (names.empty() ? "" : ",") + net.variable(v).name;
      throw ResourceError("jointree cluster {" + names + "} needs " + std::to_string(cells) +
                          " cells, over the budget of " + std::to_string(cell_budget));
    }
  }

  // Root at cluster 0; record edges as (child, parent) in preorder.
  jt.parent_edge.assign(m, -1);
  jt.child_edges.assign(m, {});
  std::vector<bool> seen(m, false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    jt.preorder.push_back(c);
    std::vector<int> kids = nbrs[c];
    std::sort(kids.rbegin(), kids.rend());
    for (int k : kids) {
      if (seen[k]) continue;
      seen[k] = true;
      const int e = static_cast<int>(jt.edges.size());
      jt.edges.emplace_back(k, c);
      jt.separators.push_back(intersect(jt.clusters[k], jt.clusters[c]));
      jt.parent_edge[k] = e;
      jt.child_edges[c].push_back(e);
      stack.push_back(k);
    }
  }

  jt.cpt_host.resize(n);
  jt.indicator_host.resize(n);
  jt.hosted_indicators.assign(m, {});
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<int> cards;
    for (VarId v : jt.clusters[c]) cards.push_back(jt.cards[v]);
    jt.cluster_base.push_back(Potential::ones(jt.clusters[c], cards));
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<VarId> family = net.cpt(static_cast<VarId>(v)).scope();
    std::sort(family.begin(), family.end());
    const int host = smallest_containing(jt.clusters, family);
    jt.cpt_host[v] = host;
    jt.cluster_base[host] = multiply(jt.cluster_base[host], net.cpt(static_cast<VarId>(v)));
    const int ihost = smallest_containing(jt.clusters, {static_cast<VarId>(v)});
    jt.indicator_host[v] = ihost;
    jt.hosted_indicators[ihost].push_back(static_cast<VarId>(v));
  }
  return jt;
}

Jointree build_jointree(const BayesianNetwork& net, std::size_t cell_budget) {
  return build_jointree(net, min_fill_order(net).order, cell_budget);
}

bool has_running_intersection(const Jointree& jt) {
  const std::size_t m = jt.clusters.size();
  if (jt.edges.size() + 1 != m) return false;
  for (std::size_t v = 0; v < jt.num_vars; ++v) {
    // Clusters with v must be connected through edges whose separator holds v.
    std::vector<int> holding;
    for (std::size_t c = 0; c < m; ++c)
      if (std::binary_search(jt.clusters[c].begin(), jt.clusters[c].end(), static_cast<VarId>(v)))
        holding.push_back(static_cast<int>(c));
    if (holding.empty()) return false;
    std::vector<bool> reached(m, false);
    std::vector<int> stack{holding.front()};
    reached[holding.front()] = true;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (std::size_t e = 0; e < jt.edges.size(); ++e) {
        const auto [a, b] = jt.edges[e];
        if (a != c && b != c) continue;
        const int o = a == c ? b : a;
        if (reached[o]) continue;
        if (!std::binary_search(jt.separators[e].begin(), jt.separators[e].end(), static_cast<VarId>(v))) continue;
        reached[o] = true;
        stack.push_back(o);
      }
    }
    for (int c : holding)
      if (!reached[c]) return false;
  }
  return true;
}

Propagation propagate(const Jointree& jt, const Instantiation& setting) {
  const std::size_t m = jt.clusters.size();
  Propagation prop;
  prop.setting = setting;
  prop.up.resize(jt.edges.size());
  prop.down.resize(jt.edges.size());
  std::vector<Potential> local;
  local.reserve(m);
  for (std::size_t c = 0; c < m; ++c) local.push_back(local_table(jt, static_cast<int>(c), setting, -1));

  for (auto it = jt.preorder.rbegin(); it != jt.preorder.rend(); ++it) {
    const int c = *it;
    const int pe = jt.parent_edge[c];
    if (pe < 0) continue;
    prop.up[pe] = marginalize_onto(gather(jt, prop, c, local[c], pe), jt.separators[pe]);
    ++prop.messages;
  }
  for (int c : jt.preorder) {
    for (int e : jt.child_edges[c]) {
      prop.down[e] = marginalize_onto(gather(jt, prop, c, local[c], e), jt.separators[e]);
      ++prop.messages;
    }
  }
  return prop;
}

double log_probability(const Jointree& jt, const Propagation& prop) {
  const Potential all = gather(jt, prop, 0, local_table(jt, 0, prop.setting, -1), -1);
  double total = kNegInf;
  for (double x : all.log_values()) total = log_add(total, x);
  return total;
}

std::vector<double> log_projection(const Jointree& jt, const Propagation& prop, VarId v) {
  const int host = jt.indicator_host.at(v);
  const Potential all = gather(jt, prop, host, local_table(jt, host, prop.setting, v), -1);
  const std::vector<VarId> keep{v};
  const Potential p = marginalize_onto(all, keep);
  return {p.log_values().begin(), p.log_values().end()};
}

NeighborScores score_all_neighbors(const Jointree& jt, const Instantiation& s, const Instantiation& e) {
  for (VarId v : s.vars())
    if (e.has(v)) throw ValidationError("MAP and evidence instantiations overlap");
  const Instantiation setting = s.merged(e);
  const Propagation prop = propagate(jt, setting);
  NeighborScores out;
  out.messages = prop.messages;
  out.log_current = log_probability(jt, prop);
  out.vars = s.vars();
  for (VarId v : out.vars) out.log_table.push_back(log_projection(jt, prop, v));
  return out;
}

}  // namespace bnmap
