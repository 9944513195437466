#include <doctest.h>

#include <cmath>

#include "bnmap/error.hpp"
#include "bnmap/network.hpp"
#include "bnmap/oracle.hpp"
#include "fixtures.hpp"

using namespace bnmap;

TEST_CASE("joint probability of a two-node chain") {
  BayesianNetwork net = fixtures::chain_ab();
  Instantiation x;
  x.set(0, 0);
  x.set(1, 0);
  CHECK(joint_probability(net, x) == doctest::Approx(0.42));
  x.set(1, 1);
  CHECK(joint_probability(net, x) == doctest::Approx(0.18));
}

TEST_CASE("worlds sum to one") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    BayesianNetwork net = fixtures::random_net(rng, 7, 0.35, 3);
    double total = 0;
    fixtures::for_each_world(net, [&](const Instantiation& x) { total += joint_probability(net, x); });
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("joint probability rejects partial worlds and bad states") {
  BayesianNetwork net = fixtures::chain_ab();
  Instantiation x;
  x.set(0, 0);
  CHECK_THROWS_AS(joint_probability(net, x), ValidationError);
  x.set(1, 2);
  CHECK_THROWS_AS(joint_probability(net, x), ValidationError);
}

TEST_CASE("structure accessors") {
  BayesianNetwork net = fixtures::diamond();
  CHECK(net.size() == 4);
  CHECK(net.is_root(0));
  CHECK(net.is_leaf(3));
  CHECK(net.children(0) == std::vector<VarId>{1, 2});
  CHECK(net.parents(3) == std::vector<VarId>{1, 2});
  CHECK(net.cpt(3).scope() == std::vector<VarId>{1, 2, 3});
  CHECK(net.topological_order() == std::vector<VarId>{0, 1, 2, 3});
  CHECK(net.find("C") == 2);
  CHECK(!net.find("Z").has_value());
  CHECK(!net.is_polytree());
  CHECK(fixtures::branching().is_polytree());
}

TEST_CASE("topological order respects edges declared out of id order") {
  // Edge 2 -> 0.
  BayesianNetwork net("rev", fixtures::binary_vars({"X", "Y", "Z"}), {{2}, {}, {}},
                      {{0.5, 0.5, 0.1, 0.9}, {0.5, 0.5}, {0.3, 0.7}});
  CHECK(net.topological_order() == std::vector<VarId>{1, 2, 0});
}

TEST_CASE("state tokens accept names and indices") {
  BayesianNetwork net("named", {{"W", 3, {"lo", "mid", "hi"}}}, {{}}, {{0.2, 0.3, 0.5}});
  CHECK(net.find_state(0, "mid") == 1);
  CHECK(net.find_state(0, "2") == 2);
  CHECK(!net.find_state(0, "3").has_value());
  CHECK(!net.find_state(0, "x").has_value());
  CHECK(net.state_label(0, 2) == "hi");
}

TEST_CASE("validation rejects malformed networks") {
  auto vars = fixtures::binary_vars({"A", "B"});
  SUBCASE("cycle") {
    CHECK_THROWS_AS(BayesianNetwork("c", vars, {{1}, {0}}, {{.5, .5, .5, .5}, {.5, .5, .5, .5}}), ValidationError);
  }
  SUBCASE("row sum") {
    CHECK_THROWS_AS(BayesianNetwork("r", vars, {{}, {}}, {{.5, .6}, {.5, .5}}), ValidationError);
  }
  SUBCASE("negative entry") {
    CHECK_THROWS_AS(BayesianNetwork("n", vars, {{}, {}}, {{-.5, 1.5}, {.5, .5}}), ValidationError);
  }
  SUBCASE("wrong table size") {
    CHECK_THROWS_AS(BayesianNetwork("s", vars, {{}, {0}}, {{.5, .5}, {.5, .5}}), ValidationError);
  }
  SUBCASE("duplicate names") {
    auto dup = fixtures::binary_vars({"A", "A"});
    CHECK_THROWS_AS(BayesianNetwork("d", dup, {{}, {}}, {{.5, .5}, {.5, .5}}), ValidationError);
  }
  SUBCASE("unary variable") {
    CHECK_THROWS_AS(BayesianNetwork("u", {{"A", 1, {}}}, {{}}, {{1.0}}), ValidationError);
  }
}

TEST_CASE("rows within tolerance are renormalized") {
  auto vars = fixtures::binary_vars({"A"});
  BayesianNetwork net("t", vars, {{}}, {{0.3 + 5e-10, 0.7}});
  const auto v = net.cpt(0).linear_values();
  CHECK(v[0] + v[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("brute-force MAP on the chain") {
  BayesianNetwork net = fixtures::chain_ab();
  Instantiation e;
  e.set(1, 1);
  // Pr(A=0, B=1) = 0.18, Pr(A=1, B=1) = 0.32.
  const std::vector<VarId> q{0};
  BruteForceResult r = brute_force_map(net, e, q);
  CHECK(r.value == doctest::Approx(0.32));
  CHECK(r.assignment[0] == 1);
  CHECK(brute_force_probability(net, e) == doctest::Approx(0.5));
}
