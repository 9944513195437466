#pragma once

#include <cstddef>
#include <span>

#include "bnmap/network.hpp"

namespace bnmap {

struct BruteForceResult {
  double value = 0.0;
  Instantiation assignment;  // over the MAP variables only
};

/// Largest joint state space brute_force_map will enumerate.
inline constexpr double kBruteForceLimit = 16777216.0;  // 2^24

/// Exhaustive MAP by world enumeration: for each instantiation q of `q_vars`,
/// sums joint_probability over the worlds compatible with q and e. Ties go
/// to the lexicographically smallest q (variables in the given order).
/// With empty `q_vars` the value is Pr(e).
BruteForceResult brute_force_map(const BayesianNetwork& net, const Instantiation& e, std::span<const VarId> q_vars);

/// Pr(e) by world enumeration.
double brute_force_probability(const BayesianNetwork& net, const Instantiation& e);

}  // namespace bnmap
