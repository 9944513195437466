#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bnmap/network.hpp"

namespace bnmap {

class Rng;

enum class StructureMethod { One, Two };

/// Random network recipe. Method One uses `connectivity`, method Two uses
/// `edge_probability`.
struct GenSpec {
  StructureMethod method = StructureMethod::Two;
  int num_vars = 10;
  int connectivity = 12;
  double edge_probability = 0.25;
  double bias = 0.5;
  std::uint64_t seed = 0;
};

void validate(const GenSpec& spec);

/// Parent lists over variables 0..N-1; every parent precedes its child.
struct Dag {
  std::vector<std::vector<VarId>> parents;

  std::size_t size() const { return parents.size(); }
  std::size_t edge_count() const;
};

/// Method Two: each pair (i, j), i < j, is an edge i -> j with probability p.
/// Method One: variable i takes a parent count drawn uniformly from
/// {0, ..., max(1, c/3)}, with the parents drawn without replacement from
/// the 2c variables immediately preceding it.
Dag gen_structure(const GenSpec& spec);

/// Binary CPTs. Root rows are {u, 1-u} with u uniform in [0, 1). Every other
/// row puts v ~ U[0, b) on one state, picked by a fair coin, and 1-v on the
/// other.
BayesianNetwork quantify_bias(const Dag& dag, double bias, std::uint64_t seed, const std::string& name = "random");

/// gen_structure then quantify_bias on independent streams of `spec.seed`.
BayesianNetwork generate_network(const GenSpec& spec);

/// Draws a complete world by ancestral sampling.
Instantiation forward_sample(const BayesianNetwork& net, Rng& rng);

/// Evidence on `leaves` (all leaves when empty) read off a forward-sampled
/// world, so Pr(e) > 0 always holds.
Instantiation sample_leaf_evidence(const BayesianNetwork& net, Rng& rng, std::vector<VarId> leaves = {});

/// Evidence on `leaves` drawn uniformly and independently, retried until
/// Pr(e) > 0. Returns nullopt once `max_tries` draws all had probability zero.
std::optional<Instantiation> rejection_leaf_evidence(const BayesianNetwork& net, Rng& rng,
                                                     std::vector<VarId> leaves = {}, int max_tries = 1000);

std::vector<VarId> leaf_variables(const BayesianNetwork& net);
std::vector<VarId> root_variables(const BayesianNetwork& net);

/// `count` distinct elements of `pool` chosen uniformly, returned sorted.
/// Returns all of `pool` (sorted) when it holds no more than `count`.
std::vector<VarId> choose_subset(std::vector<VarId> pool, std::size_t count, Rng& rng);

}  // namespace bnmap
