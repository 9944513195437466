#include "bnmap/oracle.hpp"

#include <cmath>
#include <vector>

#include "bnmap/error.hpp"

namespace bnmap {

BruteForceResult brute_force_map(const BayesianNetwork& net, const Instantiation& e, std::span<const VarId> q_vars) {
  check_instantiation(net, e);
  double space = 1.0;
  for (std::size_t v = 0; v < net.size(); ++v) space *= net.cardinality(static_cast<VarId>(v));
  if (space > kBruteForceLimit) throw ResourceError("brute-force enumeration exceeds 2^24 worlds");

  std::size_t q_space = 1;
  for (VarId q : q_vars) q_space *= static_cast<std::size_t>(net.cardinality(q));
  std::vector<double> totals(q_space, 0.0);

  // Only worlds compatible with e are visited: evidence variables stay fixed.
  const std::size_t n = net.size();
  Instantiation world(n);
  std::vector<VarId> free_vars;
  for (std::size_t v = 0; v < n; ++v) {
    const VarId id = static_cast<VarId>(v);
    if (e.has(id)) {
      world.set(id, e[id]);
    } else {
      world.set(id, 0);
      free_vars.push_back(id);
    }
  }
  std::vector<State> counter(n, 0);
  for (bool more = true; more;) {
    std::size_t qi = 0;
    for (VarId q : q_vars) qi = qi * static_cast<std::size_t>(net.cardinality(q)) + static_cast<std::size_t>(world[q]);
    totals[qi] += joint_probability(net, world);
    more = false;
    for (std::size_t k = free_vars.size(); k-- > 0;) {
      const VarId id = free_vars[k];
      if (++counter[id] < net.cardinality(id)) {
        world.set(id, counter[id]);
        more = true;
        break;
      }
      counter[id] = 0;
      world.set(id, 0);
    }
  }

  BruteForceResult out;
  std::size_t best = 0;
  for (std::size_t i = 1; i < q_space; ++i)
    if (totals[i] > totals[best]) best = i;
  out.value = totals[best];
  out.assignment = Instantiation(n);
  for (std::size_t k = q_vars.size(); k-- > 0;) {
    const auto card = static_cast<std::size_t>(net.cardinality(q_vars[k]));
    out.assignment.set(q_vars[k], static_cast<State>(best % card));
    best /= card;
  }
  return out;
}

double brute_force_probability(const BayesianNetwork& net, const Instantiation& e) {
  return brute_force_map(net, e, {}).value;
}

}  // namespace bnmap
