#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bnmap/elimination.hpp"
#include "bnmap/error.hpp"
#include "bnmap/oracle.hpp"
#include "bnmap/rng.hpp"
#include "fixtures.hpp"

using namespace bnmap;

namespace {

std::vector<VarId> random_order(std::size_t n, Rng& rng) {
  std::vector<VarId> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

Instantiation random_evidence(const BayesianNetwork& net, Rng& rng, double p) {
  Instantiation e;
  for (std::size_t v = 0; v < net.size(); ++v)
    if (rng.bernoulli(p)) e.set(static_cast<VarId>(v), static_cast<State>(rng.below(net.cardinality(v))));
  return e;
}

std::vector<VarId> random_subset(const BayesianNetwork& net, const Instantiation& e, Rng& rng, double p) {
  std::vector<VarId> q;
  for (std::size_t v = 0; v < net.size(); ++v)
    if (!e.has(static_cast<VarId>(v)) && rng.bernoulli(p)) q.push_back(static_cast<VarId>(v));
  return q;
}

std::vector<VarId> ids(std::initializer_list<VarId> l) { return l; }

}  // namespace

TEST_CASE("probability of evidence agrees with enumeration") {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    BayesianNetwork net = fixtures::random_net(rng, 8, 0.3, 3, 3, 0.1);
    Instantiation e = random_evidence(net, rng, 0.3);
    const double expected = brute_force_probability(net, e);
    const auto order = random_order(net.size(), rng);
    EliminationResult r = eliminate(net, e, order, QueryMode::Pr);
    CHECK(fixtures::rel_close(r.value, expected, 1e-9));
    CHECK(r.zero_evidence == (expected == 0.0));
    CHECK(fixtures::rel_close(probability_of_evidence(net, e), expected, 1e-9));
  }
}

TEST_CASE("chain probability of evidence") {
  BayesianNetwork net = fixtures::chain_ab();
  Instantiation e;
  e.set(1, 0);
  // 0.6*0.7 + 0.4*0.2
  CHECK(probability_of_evidence(net, e) == doctest::Approx(0.5));
}

TEST_CASE("MPE agrees with enumeration over all free variables") {
  Rng rng(202);
  for (int trial = 0; trial < 40; ++trial) {
    BayesianNetwork net = fixtures::random_net(rng, 8, 0.3, 3, 3);
    Instantiation e = random_evidence(net, rng, 0.25);
    std::vector<VarId> free;
    for (std::size_t v = 0; v < net.size(); ++v)
      if (!e.has(static_cast<VarId>(v))) free.push_back(static_cast<VarId>(v));
    BruteForceResult expected = brute_force_map(net, e, free);
    EliminationResult r = most_probable_explanation(net, e);
    CHECK(fixtures::rel_close(r.value, expected.value, 1e-9));
    Instantiation world = r.assignment.merged(e);
    CHECK(fixtures::rel_close(joint_probability(net, world), r.value, 1e-9));
  }
}

TEST_CASE("MAP agrees with enumeration") {
  Rng rng(303);
  for (int trial = 0; trial < 60; ++trial) {
    BayesianNetwork net = fixtures::random_net(rng, 9, 0.3, 2 + trial % 2, 3);
    Instantiation e = random_evidence(net, rng, 0.2);
    std::vector<VarId> q = random_subset(net, e, rng, 0.4);
    BruteForceResult expected = brute_force_map(net, e, q);
    EliminationResult r = exact_map(net, e, q);
    CHECK(fixtures::rel_close(r.value, expected.value, 1e-9));
    // The returned assignment must attain the value.
    BruteForceResult check = brute_force_map(net, r.assignment.merged(e), {});
    CHECK(fixtures::rel_close(check.value, r.value, 1e-9));
    for (VarId v : q) CHECK(r.assignment.has(v));
  }
}

TEST_CASE("MAP ties resolve like the enumeration oracle") {
  // Uniform network: every q instantiation ties, so both pick all zeros.
  BayesianNetwork net("flat", fixtures::binary_vars({"A", "B", "C"}), {{}, {0}, {1}},
                      {{.5, .5}, {.5, .5, .5, .5}, {.5, .5, .5, .5}});
  const auto q = ids({0, 2});
  EliminationResult r = exact_map(net, Instantiation(), q);
  BruteForceResult b = brute_force_map(net, Instantiation(), q);
  CHECK(r.assignment[0] == b.assignment[0]);
  CHECK(r.assignment[2] == b.assignment[2]);
  CHECK(r.assignment[0] == 0);
}

TEST_CASE("MAP with any valid order gives the same value") {
  BayesianNetwork net = fixtures::branching();
  const auto q = ids({2, 3});
  Instantiation e;
  e.set(4, 1);
  const double expected = brute_force_map(net, e, q).value;
  for (auto order : {ids({0, 1, 3, 4, 2}), ids({0, 4, 1, 3, 2}), ids({4, 0, 1, 2, 3})}) {
    CHECK(validate_map_order(net, order, q));
    EliminationResult r = eliminate(net, e, order, QueryMode::Map, q);
    CHECK(fixtures::rel_close(r.value, expected, 1e-12));
  }
}

TEST_CASE("MAP order validity") {
  BayesianNetwork net = fixtures::branching();  // A B C D E = 0..4
  const auto q = ids({2, 3});
  CHECK(validate_map_order(net, ids({0, 1, 3, 4, 2}), q));
  CHECK(validate_map_order(net, ids({0, 4, 1, 3, 2}), q));
  CHECK(!validate_map_order(net, ids({2, 3, 0, 1, 4}), q));
  Instantiation e;
  CHECK_THROWS_AS(eliminate(net, e, ids({2, 3, 0, 1, 4}), QueryMode::Map, q), ValidationError);
  // Clamping the neighbors makes an early MAP step legal.
  CHECK(validate_map_order(net, ids({2, 3, 0, 1, 4}), q, ids({0, 1, 4})));
}

TEST_CASE("eliminate rejects orders that are not permutations") {
  BayesianNetwork net = fixtures::chain_abc();
  CHECK_THROWS_AS(eliminate(net, Instantiation(), ids({0, 1}), QueryMode::Pr), ValidationError);
  CHECK_THROWS_AS(eliminate(net, Instantiation(), ids({0, 1, 1}), QueryMode::Pr), ValidationError);
}

TEST_CASE("push_q_last keeps validity and width") {
  Rng rng(404);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    BayesianNetwork net = fixtures::random_net(rng, 10, 0.25, 2, 3);
    std::vector<VarId> q = random_subset(net, Instantiation(), rng, 0.4);
    const auto order = random_order(net.size(), rng);
    if (!validate_map_order(net, order, q)) {
      CHECK_THROWS_AS(push_q_last(net, order, q), ValidationError);
      continue;
    }
    ++checked;
    EliminationOrder pushed = push_q_last(net, order, q);
    CHECK(validate_map_order(net, pushed.order, q));
    CHECK(order_width(net, pushed.order).width == order_width(net, order).width);
    // Q variables occupy the tail.
    for (std::size_t i = 0; i < pushed.order.size(); ++i) {
      const bool in_q = std::find(q.begin(), q.end(), pushed.order[i]) != q.end();
      CHECK(in_q == (i >= pushed.order.size() - q.size()));
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("constrained min-fill puts MAP variables last and is valid") {
  Rng rng(505);
  for (int trial = 0; trial < 30; ++trial) {
    BayesianNetwork net = fixtures::random_net(rng, 12, 0.25, 2, 3);
    std::vector<VarId> q = random_subset(net, Instantiation(), rng, 0.3);
    EliminationOrder o = min_fill_order(net, q);
    CHECK(o.order.size() == net.size());
    CHECK(validate_map_order(net, o.order, q));
    std::vector<VarId> tail(o.order.end() - q.size(), o.order.end());
    std::sort(tail.begin(), tail.end());
    CHECK(tail == q);
    // Constraining can only cost width relative to the free heuristic on the same graph.
    CHECK(order_width(net, o.order).width >= 0);
  }
}

TEST_CASE("widths of small structures") {
  CHECK(order_width(fixtures::chain_ab(), ids({0, 1})).width == 1.0);
  CHECK(order_width(fixtures::chain_abc(), ids({0, 1, 2})).width == 1.0);
  // Eliminating the middle of a chain first joins its neighbors.
  CHECK(order_width(fixtures::chain_abc(), ids({1, 0, 2})).width == 2.0);
  // Diamond: D's family forces a table over B, C, D.
  BayesianNetwork d = fixtures::diamond();
  CHECK(order_width(d, min_fill_order(d).order).width == 2.0);
  // Clamped variables count with a single state.
  CHECK(order_width(fixtures::chain_abc(), ids({1, 0, 2}), ids({0})).width == 1.0);
}

TEST_CASE("width report records each step") {
  BayesianNetwork net = fixtures::branching();
  WidthReport w = order_width(net, ids({0, 1, 3, 4, 2}));
  CHECK(w.step_log2_sizes.size() == 5);
  CHECK(w.width == 2.0);
  CHECK(w.largest_scope.size() == 3);
}

TEST_CASE("evaluation tree links producers to consumers") {
  BayesianNetwork net = fixtures::chain_abc();
  EvaluationTree t = build_evaluation_tree(net, ids({0, 1, 2}));
  CHECK(t.parent_step == std::vector<int>{1, 2, -1});
  CHECK(t.step_scope[0] == ids({0, 1}));
  CHECK(t.leaf_cpts[0] == ids({0, 1}));
  CHECK(t.leaf_cpts[1] == ids({2}));
  CHECK(t.leaf_cpts[2].empty());
  CHECK(t.child_steps[2] == std::vector<int>{1});
}

TEST_CASE("cell budget is enforced") {
  BayesianNetwork net = fixtures::diamond();
  EliminationOptions tight;
  tight.cell_budget = 4;
  CHECK_THROWS_AS(eliminate(net, Instantiation(), ids({0, 1, 2, 3}), QueryMode::Pr, {}, tight), ResourceError);
}

TEST_CASE("zero-probability evidence is reported") {
  BayesianNetwork net("det", fixtures::binary_vars({"A", "B"}), {{}, {0}}, {{1.0, 0.0}, {1.0, 0.0, 0.0, 1.0}});
  Instantiation e;
  e.set(1, 1);
  EliminationResult r = exact_map(net, e, ids({0}));
  CHECK(r.value == 0.0);
  CHECK(r.zero_evidence);
}

TEST_CASE("width summary statistics") {
  const std::vector<double> w{10, 12};
  WidthStats s = summarize_widths(w);
  CHECK(s.min == 10);
  CHECK(s.max == 12);
  CHECK(s.mean == 11);
  // log2((2^10 + 2^12) / 2) = log2(2560)
  CHECK(s.weighted_mean == doctest::Approx(std::log2(2560.0)).epsilon(1e-12));
  const std::vector<double> big{300, 300};
  CHECK(summarize_widths(big).weighted_mean == doctest::Approx(300));
}

TEST_CASE("growing MAP schedules") {
  Rng rng(7);
  auto s = growing_q_schedule(23, 5, rng);
  REQUIRE(s.size() == 6);  // 0 5 10 15 20 23
  CHECK(s.front().empty());
  CHECK(s.back().size() == 23);
  for (std::size_t i = 1; i < s.size(); ++i)
    CHECK(std::includes(s[i].begin(), s[i].end(), s[i - 1].begin(), s[i - 1].end()));
  Rng rng2(7);
  CHECK(growing_q_schedule(23, 5, rng2) == s);
}
