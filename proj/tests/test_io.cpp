#include <cmath>
#include <cstdio>
#include <string>

#include "bnmap/elimination.hpp"
#include "bnmap/error.hpp"
#include "bnmap/io.hpp"
#include "bnmap/netgen.hpp"
#include "bnmap/oracle.hpp"
#include "bnmap/reductions.hpp"
#include "bnmap/rng.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bnmap;

namespace {

int error_line(const std::string& text) {
  try {
    parse_network_string(text);
  } catch (const ValidationError& e) {
    return e.line();
  }
  return -1;
}

const char* kChain =
    "net chain\n"
    "var A 2\n"
    "var B 2\n"
    "cpt A |\n"
    "0.59999999999999998 0.40000000000000002\n"
    "cpt B | A\n"
    "0.69999999999999996 0.29999999999999999\n"
    "0.20000000000000001 0.80000000000000004\n";

}  // namespace

TEST_CASE("the two-variable chain emits canonically and round-trips bit-exactly") {
  const BayesianNetwork net = fixtures::chain_ab();
  const std::string text = emit_network_string(net);
  CHECK(text == kChain);
  const BayesianNetwork back = parse_network_string(text);
  CHECK(emit_network_string(back) == text);
  for (VarId v : {0, 1}) CHECK(back.cpt_values(v) == net.cpt_values(v));
}

TEST_CASE("random networks round-trip bit-exactly") {
  Rng rng(31);
  for (int i = 0; i < 30; ++i) {
    const BayesianNetwork net = fixtures::random_net(rng, 9, 0.35, 3);
    const std::string text = emit_network_string(net);
    const BayesianNetwork back = parse_network_string(text);
    CHECK(emit_network_string(back) == text);
    for (std::size_t v = 0; v < net.size(); ++v) {
      CHECK(back.cpt_values(v) == net.cpt_values(v));
      CHECK(back.parents(v) == net.parents(v));
    }
  }
}

TEST_CASE("state names, comments and root CPTs without a bar parse") {
  const BayesianNetwork net = parse_network_string(
      "# weather\n"
      "net w\n"
      "var Rain 2 no yes   # two states\n"
      "var Grass 3\n"
      "cpt Rain\n"
      "0.8 0.2\n"
      "cpt Grass | Rain\n"
      "0.5 0.25 0.25\n"
      "0 0 1\n");
  CHECK(net.variable(0).state_names == std::vector<std::string>{"no", "yes"});
  CHECK(net.cardinality(1) == 3);
  CHECK(net.find_state(0, "yes") == 1);
  CHECK(net.cpt(1).at(5) == 1.0);
}

TEST_CASE("parents listed in file order set the row layout") {
  const BayesianNetwork net = parse_network_string(
      "net p\nvar A 2\nvar B 3\nvar C 2\n"
      "cpt A\n0.5 0.5\ncpt B\n0.2 0.3 0.5\n"
      "cpt C | B A\n"
      "1 0\n0.9 0.1\n0.8 0.2\n0.7 0.3\n0.6 0.4\n0.5 0.5\n");
  CHECK(net.parents(2) == std::vector<VarId>{1, 0});
  Instantiation x(3);
  x.set(0, 1);
  x.set(1, 2);
  x.set(2, 1);
  CHECK(net.theta(2, x) == doctest::Approx(0.5));
  x.set(1, 1);
  x.set(0, 0);
  CHECK(net.theta(2, x) == doctest::Approx(0.2));
}

TEST_CASE("a row summing to 1.5 is rejected with its line number") {
  CHECK(error_line("net x\nvar A 2\ncpt A |\n0.75 0.75\n") == 4);
}

TEST_CASE("syntax and reference errors carry line numbers") {
  CHECK(error_line("var A 2\n") == 1);
  CHECK(error_line("net x\nvar A 2\ncpt B |\n0.5 0.5\n") == 3);
  CHECK(error_line("net x\nvar A 2\ncpt A | Z\n0.5 0.5\n") == 3);
  CHECK(error_line("net x\nvar A 2\ncpt A |\n0.5 zero\n") == 4);
  CHECK(error_line("net x\nvar A 2\ncpt A |\n0.5 0.25 0.25\n") == 4);
  CHECK(error_line("net x\nvar A 2\nvar A 2\n") == 3);
  CHECK(error_line("net x\nvar A 1\n") == 2);
  CHECK(error_line("net x\nvar A 2 lo\n") == 2);
  CHECK(error_line("net x\nvar A 2\nvar B 2\ncpt A |\n0.5 0.5\ncpt B | A\n0.5 0.5\n") == 7);
  CHECK(error_line("net x\nvar A 2\ncpt A |\n1.5 -0.5\n") == 4);
  CHECK(error_line("net x\nvar A 2\nvar B 2\ncpt A |\n0.5 0.5\n") == 5);
  CHECK(error_line("net x\nvar A 2\ncpt A |\n0.5 0.5\ncpt A |\n0.5 0.5\n") == 5);
  CHECK(error_line("net x\nvar A 2\ncpt A |\n0.5 0.5\nvar B 2\n") == 5);
  CHECK(error_line("net x\nvar A 2\nvar B 2\ncpt A | B\n1 0\n0 1\ncpt B | A\n1 0\n0 1\n") > 0);
}

TEST_CASE("query files resolve names and states") {
  const BayesianNetwork net = parse_network_string(
      "net q\nvar A 2 f t\nvar B 2\nvar C 2\n"
      "cpt A\n0.5 0.5\ncpt B | A\n0.5 0.5\n0.5 0.5\ncpt C | B\n0.5 0.5\n0.5 0.5\n");
  const Query q = parse_query_string("map C A\nevidence B=1\nthreshold 3/8\nlattice 16\n", net);
  CHECK(q.map_vars == std::vector<VarId>{0, 2});
  CHECK(q.evidence[1] == 1);
  REQUIRE(q.threshold.has_value());
  CHECK(*q.threshold == Rational(3, 8));
  CHECK(q.lattice == 16);
  CHECK(parse_query_string(emit_query_string(net, q), net).map_vars == q.map_vars);
  CHECK(parse_query_string("evidence A=t\n", net).evidence[0] == 1);

  auto line_of = [&](const std::string& text) {
    try {
      parse_query_string(text, net);
    } catch (const ValidationError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("map A\nmap Z\n") == 2);
  CHECK(line_of("evidence A=x\n") == 1);
  CHECK(line_of("evidence A\n") == 1);
  CHECK(line_of("\nthreshold 1/0\n") == 2);
  CHECK(line_of("bogus\n") == 1);
  CHECK(line_of("map A\nevidence A=0\n") == 0);
}

TEST_CASE("an emitted polytree construction re-parses and keeps its MAP value") {
  const CnfFormula f = parse_dimacs_string("p cnf 3 4\n1 2 0\n-1 3 0\n-2 -3 0\n1 -3 0\n");
  const int kmax = brute_force_maxsat(f);
  const ReductionOutput r = maxsat_to_polytree(f, kmax);
  const BayesianNetwork net = parse_network_string(emit_network_string(r.network));
  const Query q = parse_query_string(emit_query_string(r.network, query_of(r)), net);
  CHECK(q.lattice == r.lattice);
  const EliminationResult map = exact_map(net, q.evidence, q.map_vars);
  const auto exact = snap_to_lattice(q.lattice, map.log_value);
  REQUIRE(exact.has_value());
  CHECK(*exact == Rational(kmax, f.clauses.size() * 8));
  CHECK_FALSE(exceeds_threshold(*q.threshold, q.lattice, map.log_value));
  const ReductionOutput lower = maxsat_to_polytree(f, kmax - 1);
  CHECK(exceeds_threshold(lower.threshold, lower.lattice, map.log_value));
}

TEST_CASE("files round-trip through disk") {
  const BayesianNetwork net = generate_network(GenSpec{StructureMethod::Two, 12, 0, 0.3, 0.25, 5});
  const std::string path = "io_roundtrip_test.net";
  emit_network_file(path, net);
  const BayesianNetwork back = parse_network_file(path);
  std::remove(path.c_str());
  CHECK(emit_network_string(back) == emit_network_string(net));
  CHECK_THROWS_AS(parse_network_file("does/not/exist.net"), ValidationError);
}
