#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bnmap/instantiation.hpp"
#include "bnmap/potential.hpp"

namespace bnmap {

struct Variable {
  std::string name;
  int cardinality = 2;
  std::vector<std::string> state_names;  // empty, or one per state
};

/// A discrete Bayesian network: a DAG with one CPT per variable.
///
/// Each CPT is a Potential over (parents..., child) in that order, so a row
/// of `cardinality` consecutive cells is the child distribution for one
/// parent instantiation (last parent varying fastest). The constructor
/// validates acyclicity, cell ranges, and row sums: rows within 1e-9 of one
/// are renormalized, rows further off are rejected.
class BayesianNetwork {
 public:
  static constexpr double kRowTolerance = 1e-9;

  BayesianNetwork() = default;
  BayesianNetwork(std::string name, std::vector<Variable> variables,
                  std::vector<std::vector<VarId>> parents,
                  std::vector<std::vector<double>> cpt_values);

  const std::string& name() const { return name_; }
  std::size_t size() const { return variables_.size(); }

  const Variable& variable(VarId v) const { return variables_.at(v); }
  const std::vector<Variable>& variables() const { return variables_; }
  int cardinality(VarId v) const { return variables_.at(v).cardinality; }
  const std::vector<VarId>& parents(VarId v) const { return parents_.at(v); }
  const std::vector<VarId>& children(VarId v) const { return children_.at(v); }
  const Potential& cpt(VarId v) const { return cpts_.at(v); }
  const std::vector<Potential>& cpts() const { return cpts_; }
  /// Linear CPT cells as validated, in the Potential's layout.
  const std::vector<double>& cpt_values(VarId v) const { return cpt_values_.at(v); }

  bool is_root(VarId v) const { return parents_.at(v).empty(); }
  bool is_leaf(VarId v) const { return children_.at(v).empty(); }

  /// Parents before children; ties by lowest id.
  const std::vector<VarId>& topological_order() const { return topo_; }

  std::optional<VarId> find(const std::string& name) const;
  /// Parses a state token: a declared state name or a decimal index.
  std::optional<State> find_state(VarId v, const std::string& token) const;
  std::string state_label(VarId v, State s) const;

  /// Linear CPT entry theta(x | u) for a complete-enough instantiation.
  double theta(VarId v, const Instantiation& x) const;

  /// True when the undirected skeleton has no cycle.
  bool is_polytree() const;

 private:
  std::string name_;
  std::vector<Variable> variables_;
  std::vector<std::vector<VarId>> parents_;
  std::vector<std::vector<VarId>> children_;
  std::vector<Potential> cpts_;
  std::vector<std::vector<double>> cpt_values_;
  std::vector<VarId> topo_;
};

/// Product of the CPT entries compatible with a complete instantiation.
double joint_probability(const BayesianNetwork& net, const Instantiation& x);
double log_joint_probability(const BayesianNetwork& net, const Instantiation& x);

/// Throws ValidationError unless every evidence variable exists and every
/// state index is within range.
void check_instantiation(const BayesianNetwork& net, const Instantiation& x);

}  // namespace bnmap
