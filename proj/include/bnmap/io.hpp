#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bnmap/network.hpp"
#include "bnmap/reductions.hpp"

namespace bnmap {

/// Text network format:
///
///   net <name>
///   var <name> <cardinality> [state names...]
///   cpt <child> | <parent> ...
///   <one line per parent instantiation, last parent fastest: child distribution>
///
/// `#` starts a comment. All `var` lines precede all `cpt` blocks. Emission
/// writes CPTs in variable order with 17 significant digits, so a parse of
/// emitted text re-emits byte-identically. Errors are ValidationError with the
/// offending line number.
BayesianNetwork parse_network(std::istream& in);
BayesianNetwork parse_network_string(const std::string& text);
BayesianNetwork parse_network_file(const std::string& path);

void emit_network(std::ostream& out, const BayesianNetwork& net);
std::string emit_network_string(const BayesianNetwork& net);
void emit_network_file(const std::string& path, const BayesianNetwork& net);

/// Query sidecar:
///
///   map <var> ...
///   evidence <var>=<state> ...
///   threshold <num>/<den>
///   lattice <integer>
///
/// `map` and `evidence` lines accumulate; states are names or indices.
struct Query {
  std::vector<VarId> map_vars;  // sorted
  Instantiation evidence;
  std::optional<Rational> threshold;
  BigInt lattice = 0;
};

Query parse_query(std::istream& in, const BayesianNetwork& net);
Query parse_query_string(const std::string& text, const BayesianNetwork& net);
Query parse_query_file(const std::string& path, const BayesianNetwork& net);

void emit_query(std::ostream& out, const BayesianNetwork& net, const Query& q);
std::string emit_query_string(const BayesianNetwork& net, const Query& q);

/// Query view of a reduction's MAP variables, evidence, threshold and lattice.
Query query_of(const ReductionOutput& r);

/// "%.17g" rendering of a double.
std::string format_real(double x);

}  // namespace bnmap
