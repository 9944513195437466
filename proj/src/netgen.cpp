#include "bnmap/netgen.hpp"

#include <algorithm>

#include "bnmap/elimination.hpp"
#include "bnmap/error.hpp"
#include "bnmap/rng.hpp"

namespace bnmap {

namespace {

constexpr std::uint64_t kStructureStream = 1;
constexpr std::uint64_t kQuantifyStream = 2;

}  // namespace

void validate(const GenSpec& spec) {
  if (spec.num_vars < 1) throw ValidationError("generator needs at least one variable");
  if (spec.method == StructureMethod::One && spec.connectivity < 1)
    throw ValidationError("connectivity must be at least 1");
  if (spec.method == StructureMethod::Two && !(spec.edge_probability >= 0.0 && spec.edge_probability <= 1.0))
    throw ValidationError("edge probability must lie in [0, 1]");
  if (!(spec.bias >= 0.0 && spec.bias <= 0.5)) throw ValidationError("bias must lie in [0, 0.5]");
}

std::size_t Dag::edge_count() const {
  std::size_t n = 0;
  for (const auto& p : parents) n += p.size();
  return n;
}

Dag gen_structure(const GenSpec& spec) {
  validate(spec);
  Rng rng = Rng::stream(spec.seed, kStructureStream);
  const int n = spec.num_vars;
  Dag dag;
  dag.parents.assign(n, {});

  if (spec.method == StructureMethod::Two) {
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i)
        if (rng.bernoulli(spec.edge_probability)) dag.parents[j].push_back(i);
    return dag;
  }

  const int c = spec.connectivity;
  const int max_parents = std::max(1, c / 3);
  for (int i = 1; i < n; ++i) {
    std::vector<VarId> window;
    for (int j = std::max(0, i - 2 * c); j < i; ++j) window.push_back(j);
    const auto want = static_cast<std::size_t>(rng.below(max_parents + 1));
    dag.parents[i] = choose_subset(std::move(window), want, rng);
  }
  return dag;
}

BayesianNetwork quantify_bias(const Dag& dag, double bias, std::uint64_t seed, const std::string& name) {
  if (!(bias >= 0.0 && bias <= 0.5)) throw ValidationError("bias must lie in [0, 0.5]");
  Rng rng = Rng::stream(seed, kQuantifyStream);
  const std::size_t n = dag.size();
  std::vector<Variable> vars;
  std::vector<std::vector<double>> cpts(n);
  for (std::size_t v = 0; v < n; ++v) {
    vars.push_back({"X" + std::to_string(v + 1), 2, {}});
    const std::size_t rows = std::size_t{1} << dag.parents[v].size();
    auto& cells = cpts[v];
    cells.reserve(2 * rows);
    for (std::size_t r = 0; r < rows; ++r) {
      if (dag.parents[v].empty()) {
        const double u = rng.uniform();
        cells.push_back(u);
        cells.push_back(1.0 - u);
      } else {
        const double val = rng.uniform() * bias;
        if (rng.bernoulli(0.5)) {
          cells.push_back(val);
          cells.push_back(1.0 - val);
        } else {
          cells.push_back(1.0 - val);
          cells.push_back(val);
        }
      }
    }
  }
  return BayesianNetwork(name, std::move(vars), dag.parents, std::move(cpts));
}

BayesianNetwork generate_network(const GenSpec& spec) {
  const Dag dag = gen_structure(spec);
  std::string name = spec.method == StructureMethod::One
                         ? "one_n" + std::to_string(spec.num_vars) + "_c" + std::to_string(spec.connectivity)
                         : "two_n" + std::to_string(spec.num_vars);
  name += "_s" + std::to_string(spec.seed);
  return quantify_bias(dag, spec.bias, spec.seed, name);
}

Instantiation forward_sample(const BayesianNetwork& net, Rng& rng) {
  Instantiation world(net.size());
  for (VarId v : net.topological_order()) {
    const int k = net.cardinality(v);
    // CPT rows are contiguous with the child varying fastest.
    std::size_t row = 0;
    for (VarId p : net.parents(v)) row = row * net.cardinality(p) + world[p];
    const Potential& cpt = net.cpt(v);
    const double u = rng.uniform();
    double acc = 0.0;
    State pick = -1;
    for (int s = 0; s < k; ++s) {
      const double p = cpt.at(row * k + s);
      if (p <= 0.0) continue;
      pick = s;
      acc += p;
      if (u < acc) break;
    }
    world.set(v, pick);
  }
  return world;
}

Instantiation sample_leaf_evidence(const BayesianNetwork& net, Rng& rng, std::vector<VarId> leaves) {
  if (leaves.empty()) leaves = leaf_variables(net);
  const Instantiation world = forward_sample(net, rng);
  Instantiation e(net.size());
  for (VarId v : leaves) e.set(v, world[v]);
  return e;
}

std::optional<Instantiation> rejection_leaf_evidence(const BayesianNetwork& net, Rng& rng,
                                                     std::vector<VarId> leaves, int max_tries) {
  if (leaves.empty()) leaves = leaf_variables(net);
  for (int t = 0; t < max_tries; ++t) {
    Instantiation e(net.size());
    for (VarId v : leaves) e.set(v, static_cast<State>(rng.below(net.cardinality(v))));
    if (probability_of_evidence(net, e) > 0.0) return e;
  }
  return std::nullopt;
}

std::vector<VarId> leaf_variables(const BayesianNetwork& net) {
  std::vector<VarId> out;
  for (std::size_t v = 0; v < net.size(); ++v)
    if (net.is_leaf(static_cast<VarId>(v))) out.push_back(static_cast<VarId>(v));
  return out;
}

std::vector<VarId> root_variables(const BayesianNetwork& net) {
  std::vector<VarId> out;
  for (std::size_t v = 0; v < net.size(); ++v)
    if (net.is_root(static_cast<VarId>(v))) out.push_back(static_cast<VarId>(v));
  return out;
}

std::vector<VarId> choose_subset(std::vector<VarId> pool, std::size_t count, Rng& rng) {
  if (pool.size() > count) {
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
  }
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace bnmap
