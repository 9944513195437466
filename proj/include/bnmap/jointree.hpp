#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bnmap/network.hpp"
#include "bnmap/potential.hpp"

namespace bnmap {

/// Cluster tree built from an elimination order. Every CPT and every
/// evidence indicator is hosted by exactly one cluster containing its scope
/// (the smallest such cluster, ties to the lowest index). The rooted
/// structure (root 0) is fixed at build time.
struct Jointree {
  std::size_t num_vars = 0;
  std::vector<int> cards;
  std::vector<std::vector<VarId>> clusters;  // sorted ids
  std::vector<std::pair<int, int>> edges;    // (child, parent) in the rooted tree
  std::vector<std::vector<VarId>> separators;
  std::vector<int> cpt_host;
  std::vector<int> indicator_host;
  std::vector<std::vector<VarId>> hosted_indicators;  // per cluster
  std::vector<Potential> cluster_base;  // product of hosted CPTs over the full cluster scope
  std::vector<int> parent_edge;         // per cluster, -1 at the root
  std::vector<std::vector<int>> child_edges;
  std::vector<int> preorder;

  std::size_t largest_cluster() const;
};

/// Builds a jointree from `order`, contracting clusters contained in a
/// neighbor. Disconnected pieces are chained with empty separators.
/// Throws ResourceError naming the cluster when one exceeds `cell_budget`.
Jointree build_jointree(const BayesianNetwork& net, std::span<const VarId> order,
                        std::size_t cell_budget = std::size_t{1} << 26);
/// Same, with an unconstrained min-fill order.
Jointree build_jointree(const BayesianNetwork& net, std::size_t cell_budget = std::size_t{1} << 26);

/// For every variable, the clusters containing it form a connected subtree.
bool has_running_intersection(const Jointree& jt);

/// Messages of one two-phase pass with indicators set from `setting`
/// (variables it assigns are clamped, the rest are free).
struct Propagation {
  Instantiation setting;
  std::vector<Potential> up;    // per edge, child -> parent
  std::vector<Potential> down;  // per edge, parent -> child
  std::size_t messages = 0;
};

Propagation propagate(const Jointree& jt, const Instantiation& setting);

/// log Pr(setting).
double log_probability(const Jointree& jt, const Propagation& prop);

/// Natural-log table over the states of `v`: entry x is log Pr(setting - v, v = x).
/// Computed at v's indicator host with v's own indicator left out.
std::vector<double> log_projection(const Jointree& jt, const Propagation& prop, VarId v);

/// Current score and every single-variable neighbor score, from one propagation.
struct NeighborScores {
  double log_current = 0.0;                  // log Pr(s, e)
  std::vector<VarId> vars;                   // variables of s, increasing id
  std::vector<std::vector<double>> log_table;  // per var, per state: log Pr(s - X, x, e)
  std::size_t messages = 0;
};

/// Requires s and e disjoint.
NeighborScores score_all_neighbors(const Jointree& jt, const Instantiation& s, const Instantiation& e);

}  // namespace bnmap
