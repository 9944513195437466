#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bnmap/network.hpp"

namespace bnmap {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Clauses over variables 1..num_vars; literal -v is the negation of v.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  bool satisfies(std::size_t clause, std::uint64_t assignment) const;  // bit v-1 = value of v
  int count_satisfied(std::uint64_t assignment) const;
};

/// Reads DIMACS CNF (`c` comments, `p cnf n m` header, 0-terminated clauses).
CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs_string(const std::string& text);

/// Boolean formula as a DAG of fan-in <= 2 gates. Operand refs below
/// `num_inputs` are inputs, the rest are gates (ref - num_inputs), always
/// earlier ones. The last gate is the output.
struct BooleanCircuit {
  enum class Op { And, Or, Not };
  struct Gate {
    Op op;
    std::vector<int> operands;
  };
  std::vector<std::string> input_names;
  std::vector<Gate> gates;

  int num_inputs() const { return static_cast<int>(input_names.size()); }
  /// Throws ValidationError when refs are out of order or arities are wrong.
  void validate() const;
  /// Gate outputs for the inputs given as bits (bit i = input i).
  std::vector<bool> evaluate(std::uint64_t inputs) const;
  bool output(std::uint64_t inputs) const { return evaluate(inputs).back(); }
};

/// Parses an infix formula: identifiers, `!`/`~`/`¬`, `&`/`∧`, `|`/`∨`,
/// parentheses; `!` binds tightest, then `&`, then `|`. Inputs are numbered
/// in order of first appearance.
BooleanCircuit parse_formula(const std::string& text);
/// AND of clause ORs, with NOT gates on negative literals.
BooleanCircuit cnf_to_circuit(const CnfFormula& f);

/// A D-MAP instance: is there q over `map_vars` with Pr(q, evidence) > threshold?
struct ReductionOutput {
  BayesianNetwork network;
  std::vector<VarId> map_vars;
  Instantiation evidence;
  Rational threshold;
  /// When nonzero, every MAP value is a multiple of 1/lattice.
  BigInt lattice = 0;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Parses "p/q", an integer, or a plain decimal into an exact rational.
Rational parse_rational(const std::string& text);
std::string rational_string(const Rational& r);
/// Natural log of a positive rational without overflow or underflow.
double rational_log(const Rational& r);

/// Exact value of a MAP result when it sits on the output's lattice
/// (within 1e-9 relative), else nullopt.
std::optional<Rational> snap_to_lattice(const ReductionOutput& out, double log_value);
std::optional<Rational> snap_to_lattice(const BigInt& lattice, double log_value);
/// Strict threshold test, exact when the value snaps to the lattice.
bool exceeds_threshold(const ReductionOutput& out, double log_value);
bool exceeds_threshold(const Rational& threshold, const BigInt& lattice, double log_value);

/// Uniform inputs, deterministic gates, evidence output=T, MAP over the first
/// k inputs, threshold 1/2^(k+1).
ReductionOutput circuit_to_map_network(const BooleanCircuit& f, int k);

/// Smallest integer r with r > (m+n+1) / (1 + log2(1/2 + eps)).
int emajsat_weight_count(int n, int m, double eps);
/// Depth-two, evidence-free construction with consistency and satisfaction
/// weight variables; 0 < eps <= 1/2.
ReductionOutput emajsat_depth2_network(const BooleanCircuit& f, int k, const Rational& eps);

/// Clause-selector chain over X1..Xn; evidence Sn=0, MAP over X, threshold
/// k/(m 2^n). The selector domain is {0..m} with Pr(S0 = 0) = 0.
ReductionOutput maxsat_to_polytree(const CnfFormula& f, int k);

/// Copy count for the replicated construction and its bound.
struct ReplicationBound {
  int q = 0;
  double bound = 0;  // q is the smallest integer strictly above this
  bool direct_check = false;  // (1 + 1/4m)^q > 2^(size^eps), size = q (m+1)^2 (4n+4)
};
ReplicationBound replication_count(int n, int m, double eps);
bool replication_direct_check(int q, int n, int m, double eps);
/// q copies of the chain joined by uniform bridge variables; evidence
/// S^i_n = 0, MAP over every X^i, threshold ((m - 1/2) / (m 2^n))^q.
/// `q_override` bypasses the bound (small instances for testing).
ReductionOutput replicate_polytree(const CnfFormula& f, double eps, std::optional<int> q_override = std::nullopt);

/// Brute-force checks on the logical side.
bool brute_force_emajsat(const BooleanCircuit& f, int k);
bool brute_force_sat(const BooleanCircuit& f);
int brute_force_maxsat(const CnfFormula& f);

}  // namespace bnmap
