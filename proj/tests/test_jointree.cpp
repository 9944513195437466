#include <doctest.h>

#include <cmath>

#include "bnmap/elimination.hpp"
#include "bnmap/error.hpp"
#include "bnmap/jointree.hpp"
#include "bnmap/rng.hpp"
#include "fixtures.hpp"

using namespace bnmap;

namespace {

double pr_by_elimination(const BayesianNetwork& net, const Instantiation& x) {
  return probability_of_evidence(net, x);
}

}  // namespace

TEST_CASE("chain jointree has two clusters") {
  BayesianNetwork net = fixtures::chain_abc();
  const std::vector<VarId> order{0, 1, 2};
  Jointree jt = build_jointree(net, order);
  REQUIRE(jt.clusters.size() == 2);
  CHECK(jt.clusters[0] == std::vector<VarId>{0, 1});
  CHECK(jt.clusters[1] == std::vector<VarId>{1, 2});
  CHECK(jt.separators[0] == std::vector<VarId>{1});
  CHECK(has_running_intersection(jt));
}

TEST_CASE("random networks give valid jointrees") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    BayesianNetwork net = fixtures::random_net(rng, 20, 0.15, 3, 3);
    Jointree jt = build_jointree(net);
    CHECK(has_running_intersection(jt));
    // Clusters never exceed the order's per-step scopes.
    const WidthReport w = order_width(net, min_fill_order(net).order);
    double worst = 0;
    for (const auto& c : jt.clusters) {
      double l = 0;
      for (VarId v : c) l += std::log2(net.cardinality(v));
      worst = std::max(worst, l);
    }
    CHECK(worst <= w.width + 1 + 1e-9);
    for (std::size_t v = 0; v < net.size(); ++v) {
      std::vector<VarId> fam = net.cpt(static_cast<VarId>(v)).scope();
      std::sort(fam.begin(), fam.end());
      const auto& host = jt.clusters[jt.cpt_host[v]];
      CHECK(std::includes(host.begin(), host.end(), fam.begin(), fam.end()));
    }
  }
}

TEST_CASE("disconnected networks are chained") {
  BayesianNetwork net("two", fixtures::binary_vars({"A", "B", "C"}), {{}, {0}, {}},
                      {{.3, .7}, {.6, .4, .1, .9}, {.2, .8}});
  Jointree jt = build_jointree(net);
  CHECK(jt.edges.size() + 1 == jt.clusters.size());
  CHECK(has_running_intersection(jt));
  Instantiation e;
  e.set(1, 1);
  e.set(2, 0);
  CHECK(std::exp(log_probability(jt, propagate(jt, e))) == doctest::Approx(pr_by_elimination(net, e)));
}

TEST_CASE("neighbor scores match independent elimination") {
  Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    BayesianNetwork net = fixtures::random_net(rng, 10, 0.3, 2 + trial % 2, 3, trial % 3 == 0 ? 0.15 : 0.0);
    Jointree jt = build_jointree(net);
    Instantiation e, s;
    for (std::size_t v = 0; v < net.size(); ++v) {
      const double u = rng.uniform();
      const State st = static_cast<State>(rng.below(net.cardinality(v)));
      if (u < 0.2)
        e.set(static_cast<VarId>(v), st);
      else if (u < 0.6)
        s.set(static_cast<VarId>(v), st);
    }
    NeighborScores ns = score_all_neighbors(jt, s, e);
    CHECK(ns.messages == 2 * jt.edges.size());
    const double current = pr_by_elimination(net, s.merged(e));
    CHECK(fixtures::rel_close(std::exp(ns.log_current), current, 1e-9));
    for (std::size_t i = 0; i < ns.vars.size(); ++i) {
      const VarId x = ns.vars[i];
      for (State st = 0; st < net.cardinality(x); ++st) {
        Instantiation nb = s.merged(e);
        nb.set(x, st);
        CHECK(fixtures::rel_close(std::exp(ns.log_table[i][st]), pr_by_elimination(net, nb), 1e-9));
      }
      CHECK(fixtures::rel_close(std::exp(ns.log_table[i][s[x]]), current, 1e-9));
    }
  }
}

TEST_CASE("empty setting projects onto prior marginals") {
  BayesianNetwork net = fixtures::diamond();
  Jointree jt = build_jointree(net);
  Propagation p = propagate(jt, Instantiation());
  CHECK(std::exp(log_probability(jt, p)) == doctest::Approx(1.0));
  for (VarId v = 0; v < 4; ++v) {
    double total = 0;
    for (double l : log_projection(jt, p, v)) total += std::exp(l);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Pr(A=0) is the root prior.
  CHECK(std::exp(log_projection(jt, p, 0)[0]) == doctest::Approx(0.35));
}

TEST_CASE("overlapping MAP and evidence are rejected") {
  BayesianNetwork net = fixtures::chain_ab();
  Jointree jt = build_jointree(net);
  Instantiation s, e;
  s.set(0, 0);
  e.set(0, 1);
  CHECK_THROWS_AS(score_all_neighbors(jt, s, e), ValidationError);
}

TEST_CASE("cluster budget is enforced") {
  BayesianNetwork net = fixtures::diamond();
  CHECK_THROWS_AS(build_jointree(net, 4), ResourceError);
}
