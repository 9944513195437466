#pragma once

// Small hand-built networks and a test-local random network builder.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bnmap/network.hpp"
#include "bnmap/rng.hpp"

namespace fixtures {

using bnmap::BayesianNetwork;
using bnmap::VarId;

inline std::vector<bnmap::Variable> binary_vars(const std::vector<std::string>& names) {
  std::vector<bnmap::Variable> vars;
  for (const auto& n : names) vars.push_back({n, 2, {}});
  return vars;
}

// A -> B with Pr(A=0) = 0.6 and Pr(B=0 | A=0) = 0.7.
inline BayesianNetwork chain_ab() {
  return BayesianNetwork("chain", binary_vars({"A", "B"}), {{}, {0}}, {{0.6, 0.4}, {0.7, 0.3, 0.2, 0.8}});
}

// A -> B -> C.
inline BayesianNetwork chain_abc() {
  return BayesianNetwork("chain3", binary_vars({"A", "B", "C"}), {{}, {0}, {1}},
                         {{0.3, 0.7}, {0.9, 0.1, 0.4, 0.6}, {0.25, 0.75, 0.5, 0.5}});
}

// Diamond: A -> B, A -> C, {B, C} -> D.
inline BayesianNetwork diamond() {
  return BayesianNetwork("diamond", binary_vars({"A", "B", "C", "D"}), {{}, {0}, {0}, {1, 2}},
                         {{0.35, 0.65},
                          {0.8, 0.2, 0.3, 0.7},
                          {0.6, 0.4, 0.1, 0.9},
                          {0.99, 0.01, 0.4, 0.6, 0.25, 0.75, 0.05, 0.95}});
}

// A -> B -> D and A -> C -> E: two branches off a common root.
inline BayesianNetwork branching() {
  return BayesianNetwork("branching", binary_vars({"A", "B", "C", "D", "E"}), {{}, {0}, {0}, {1}, {2}},
                         {{0.45, 0.55},
                          {0.7, 0.3, 0.2, 0.8},
                          {0.15, 0.85, 0.6, 0.4},
                          {0.5, 0.5, 0.9, 0.1},
                          {0.3, 0.7, 0.75, 0.25}});
}

// Random DAG over an id order (edge i->j, i<j, with probability p), random
// rows, optional cardinality spread.
inline BayesianNetwork random_net(bnmap::Rng& rng, int n, double p, int max_card = 2, int max_parents = 4,
                                  double zero_prob = 0.0) {
  std::vector<bnmap::Variable> vars;
  for (int i = 0; i < n; ++i) vars.push_back({"V" + std::to_string(i), 2 + static_cast<int>(rng.below(max_card - 1)), {}});
  std::vector<std::vector<VarId>> parents(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (static_cast<int>(parents[j].size()) < max_parents && rng.bernoulli(p)) parents[j].push_back(i);
  std::vector<std::vector<double>> cpts(n);
  for (int v = 0; v < n; ++v) {
    std::size_t rows = 1;
    for (VarId u : parents[v]) rows *= vars[u].cardinality;
    const int k = vars[v].cardinality;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(k);
      double sum = 0;
      for (int s = 0; s < k; ++s) {
        row[s] = (rng.bernoulli(zero_prob) ? 0.0 : 0.05 + rng.uniform());
        sum += row[s];
      }
      if (sum == 0) {
        row[0] = 1;
        sum = 1;
      }
      for (double& x : row) cpts[v].push_back(x / sum);
    }
  }
  return BayesianNetwork("random", vars, parents, cpts);
}

// Random polytree: each node after the first attaches to one or two earlier
// nodes from different components.
inline BayesianNetwork random_polytree(bnmap::Rng& rng, int n, int max_card = 2) {
  std::vector<int> comp(n);
  for (int i = 0; i < n; ++i) comp[i] = i;
  std::function<int(int)> find = [&](int a) { return comp[a] == a ? a : comp[a] = find(comp[a]); };
  std::vector<std::vector<VarId>> parents(n);
  for (int j = 1; j < n; ++j) {
    const int tries = 1 + static_cast<int>(rng.below(2));
    for (int t = 0; t < tries; ++t) {
      const int i = static_cast<int>(rng.below(j));
      if (find(i) == find(j)) continue;
      comp[find(i)] = find(j);
      // Orient either way while keeping ids topological.
      parents[j].push_back(i);
    }
  }
  std::vector<bnmap::Variable> vars;
  for (int i = 0; i < n; ++i) vars.push_back({"P" + std::to_string(i), 2 + static_cast<int>(rng.below(max_card - 1)), {}});
  std::vector<std::vector<double>> cpts(n);
  for (int v = 0; v < n; ++v) {
    std::size_t rows = 1;
    for (VarId u : parents[v]) rows *= vars[u].cardinality;
    const int k = vars[v].cardinality;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(k);
      double sum = 0;
      for (int s = 0; s < k; ++s) sum += row[s] = 0.05 + rng.uniform();
      for (double& x : row) cpts[v].push_back(x / sum);
    }
  }
  return BayesianNetwork("polytree", vars, parents, cpts);
}

// Calls f on every complete world.
inline void for_each_world(const BayesianNetwork& net, const std::function<void(const bnmap::Instantiation&)>& f) {
  bnmap::Instantiation x(net.size());
  const std::size_t n = net.size();
  for (std::size_t v = 0; v < n; ++v) x.set(static_cast<VarId>(v), 0);
  while (true) {
    f(x);
    std::size_t v = n;
    while (v-- > 0) {
      const VarId id = static_cast<VarId>(v);
      if (x[id] + 1 < net.cardinality(id)) {
        x.set(id, x[id] + 1);
        break;
      }
      x.set(id, 0);
    }
    if (v == static_cast<std::size_t>(-1)) return;
  }
}

inline bool rel_close(double a, double b, double tol = 1e-9) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace fixtures
