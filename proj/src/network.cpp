#include "bnmap/network.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>

#include "bnmap/error.hpp"

namespace bnmap {

BayesianNetwork::BayesianNetwork(std::string name, std::vector<Variable> variables,
                                 std::vector<std::vector<VarId>> parents,
                                 std::vector<std::vector<double>> cpt_values)
    : name_(std::move(name)), variables_(std::move(variables)), parents_(std::move(parents)) {
  const std::size_t n = variables_.size();
  if (parents_.size() != n || cpt_values.size() != n)
    throw ValidationError("network needs one parent list and one CPT per variable");

  std::set<std::string> names;
  for (const Variable& v : variables_) {
    if (v.cardinality < 2) throw ValidationError("variable '" + v.name + "' needs at least two states");
    if (!v.state_names.empty() && v.state_names.size() != static_cast<std::size_t>(v.cardinality))
      throw ValidationError("variable '" + v.name + "' state name count differs from cardinality");
    if (!names.insert(v.name).second) throw ValidationError("duplicate variable name '" + v.name + "'");
  }

  children_.assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    std::set<VarId> seen;
    for (VarId p : parents_[v]) {
      if (p < 0 || static_cast<std::size_t>(p) >= n)
        throw ValidationError("variable '" + variables_[v].name + "' has an unknown parent");
      if (p == static_cast<VarId>(v) || !seen.insert(p).second)
        throw ValidationError("variable '" + variables_[v].name + "' has a repeated or self parent");
      children_[p].push_back(static_cast<VarId>(v));
    }
  }

  // Kahn's algorithm with a min-heap gives the lowest-id topological order.
  std::vector<int> indegree(n);
  for (std::size_t v = 0; v < n; ++v) indegree[v] = static_cast<int>(parents_[v].size());
  std::priority_queue<VarId, std::vector<VarId>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(static_cast<VarId>(v));
  while (!ready.empty()) {
    const VarId v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (VarId c : children_[v])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (topo_.size() != n) throw ValidationError("parent graph has a directed cycle");

  cpts_.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<VarId> scope = parents_[v];
    scope.push_back(static_cast<VarId>(v));
    std::vector<int> cards;
    for (VarId s : scope) cards.push_back(variables_[s].cardinality);
    std::vector<double>& values = cpt_values[v];
    const std::size_t expected =
        std::accumulate(cards.begin(), cards.end(), std::size_t{1},
                        [](std::size_t a, int c) { return a * static_cast<std::size_t>(c); });
    if (values.size() != expected)
      throw ValidationError("CPT of '" + variables_[v].name + "' has " + std::to_string(values.size()) +
                            " entries, expected " + std::to_string(expected));
    const std::size_t k = static_cast<std::size_t>(variables_[v].cardinality);
    for (std::size_t row = 0; row < expected / k; ++row) {
      double sum = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const double x = values[row * k + j];
        if (!(x >= 0.0 && x <= 1.0))
          throw ValidationError("CPT of '" + variables_[v].name + "' has an entry outside [0,1]");
        sum += x;
      }
      if (std::abs(sum - 1.0) > kRowTolerance)
        throw ValidationError("CPT row of '" + variables_[v].name + "' sums to " + std::to_string(sum));
      // Leave rows that only differ from one by summation roundoff untouched,
      // so canonical files round-trip bit-exactly.
      if (std::abs(sum - 1.0) > 8 * k * std::numeric_limits<double>::epsilon())
        for (std::size_t j = 0; j < k; ++j) values[row * k + j] /= sum;
    }
    cpts_.push_back(Potential::from_linear(std::move(scope), std::move(cards), values));
    cpt_values_.push_back(std::move(values));
  }
}

std::optional<VarId> BayesianNetwork::find(const std::string& name) const {
  for (std::size_t v = 0; v < variables_.size(); ++v)
    if (variables_[v].name == name) return static_cast<VarId>(v);
  return std::nullopt;
}

std::optional<State> BayesianNetwork::find_state(VarId v, const std::string& token) const {
  const Variable& var = variable(v);
  for (std::size_t s = 0; s < var.state_names.size(); ++s)
    if (var.state_names[s] == token) return static_cast<State>(s);
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  const long s = std::stol(token);
  if (s < 0 || s >= var.cardinality) return std::nullopt;
  return static_cast<State>(s);
}

std::string BayesianNetwork::state_label(VarId v, State s) const {
  const Variable& var = variable(v);
  if (!var.state_names.empty()) return var.state_names.at(s);
  return std::to_string(s);
}

double BayesianNetwork::theta(VarId v, const Instantiation& x) const { return cpt(v).at(cpt(v).index_of(x)); }

bool BayesianNetwork::is_polytree() const {
  // Union-find over the skeleton: a polytree never joins two already-connected nodes.
  std::vector<int> root(size());
  std::iota(root.begin(), root.end(), 0);
  auto find_root = [&](int a) {
    while (root[a] != a) a = root[a] = root[root[a]];
    return a;
  };
  for (std::size_t v = 0; v < size(); ++v) {
    for (VarId p : parents_[v]) {
      const int a = find_root(static_cast<int>(v));
      const int b = find_root(p);
      if (a == b) return false;
      root[a] = b;
    }
  }
  return true;
}

void check_instantiation(const BayesianNetwork& net, const Instantiation& x) {
  for (VarId v : x.vars()) {
    if (static_cast<std::size_t>(v) >= net.size())
      throw ValidationError("instantiation mentions unknown variable " + std::to_string(v));
    if (x[v] >= net.cardinality(v))
      throw ValidationError("state " + std::to_string(x[v]) + " out of range for '" + net.variable(v).name + "'");
  }
}

double log_joint_probability(const BayesianNetwork& net, const Instantiation& x) {
  for (std::size_t v = 0; v < net.size(); ++v)
    if (!x.has(static_cast<VarId>(v))) throw ValidationError("incomplete world");
  check_instantiation(net, x);
  double total = 0.0;
  for (std::size_t v = 0; v < net.size(); ++v) {
    const Potential& cpt = net.cpt(static_cast<VarId>(v));
    total += cpt.log_at(cpt.index_of(x));
  }
  return total;
}

double joint_probability(const BayesianNetwork& net, const Instantiation& x) {
  const double l = log_joint_probability(net, x);
  return l == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(l);
}

}  // namespace bnmap
