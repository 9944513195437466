#include "bnmap/reductions.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <limits>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "bnmap/error.hpp"

namespace bnmap {

namespace {

const std::vector<std::string> kBool{"F", "T"};

Variable boolean(const std::string& name) { return {name, 2, kBool}; }

bool apply_op(BooleanCircuit::Op op, const std::vector<bool>& in) {
  switch (op) {
    case BooleanCircuit::Op::And: return in[0] && in[1];
    case BooleanCircuit::Op::Or: return in[0] || in[1];
    case BooleanCircuit::Op::Not: return !in[0];
  }
  return false;
}

Rational pow_rational(const Rational& base, long exp) {
  Rational out = 1;
  for (long i = 0; i < exp; ++i) out *= base;
  return out;
}

BigInt pow2(int e) { return BigInt(1) << e; }

// Picks `base`, or base with a numeric suffix, avoiding names already taken.
std::string fresh_name(std::set<std::string>& taken, const std::string& base) {
  std::string name = base;
  for (int i = 2; taken.count(name); ++i) name = base + "_" + std::to_string(i);
  taken.insert(name);
  return name;
}

void require_inputs(const BooleanCircuit& f, int k) {
  f.validate();
  if (f.num_inputs() > 62) throw ValidationError("formula has too many inputs");
  if (k < 1 || k > f.num_inputs()) throw ValidationError("k must lie in 1.." + std::to_string(f.num_inputs()));
}

// Iterates the rows of a CPT whose parents are all boolean: `rows` calls
// with the parent values (last parent fastest).
template <typename F>
void for_each_boolean_row(std::size_t parents, F f) {
  for (std::size_t row = 0; row < (std::size_t{1} << parents); ++row) {
    std::vector<bool> values(parents);
    for (std::size_t i = 0; i < parents; ++i) values[i] = (row >> (parents - 1 - i)) & 1;
    f(values);
  }
}

// Maps a gate operand ref to its network variable id.
VarId ref_var(const BooleanCircuit& f, int ref, VarId gate_base) {
  return ref < f.num_inputs() ? static_cast<VarId>(ref) : gate_base + (ref - f.num_inputs());
}

}  // namespace

// ---- CNF ------------------------------------------------------------------

bool CnfFormula::satisfies(std::size_t clause, std::uint64_t assignment) const {
  for (int lit : clauses.at(clause)) {
    const bool value = (assignment >> (std::abs(lit) - 1)) & 1;
    if ((lit > 0) == value) return true;
  }
  return false;
}

int CnfFormula::count_satisfied(std::uint64_t assignment) const {
  int count = 0;
  for (std::size_t c = 0; c < clauses.size(); ++c) count += satisfies(c, assignment) ? 1 : 0;
  return count;
}

CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula f;
  bool header = false;
  int declared_clauses = 0;
  std::vector<int> current;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c" || tok[0] == 'c' || tok == "%") continue;
    if (tok == "p") {
      std::string kind;
      if (header || !(ls >> kind >> f.num_vars >> declared_clauses) || kind != "cnf" || f.num_vars < 0 ||
          declared_clauses < 0)
        throw ValidationError("bad DIMACS header", line_no);
      header = true;
      continue;
    }
    if (!header) throw ValidationError("clause before the 'p cnf' header", line_no);
    ls.clear();
    ls.str(line);
    while (ls >> tok) {
      int lit = 0;
      try {
        std::size_t used = 0;
        lit = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ValidationError("bad literal '" + tok + "'", line_no);
      }
      if (lit == 0) {
        if (current.empty()) throw ValidationError("empty clause", line_no);
        f.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::abs(lit) > f.num_vars) throw ValidationError("literal " + tok + " exceeds the declared variables", line_no);
        current.push_back(lit);
      }
    }
  }
  if (!header) throw ValidationError("missing 'p cnf' header");
  if (!current.empty()) f.clauses.push_back(std::move(current));
  if (static_cast<int>(f.clauses.size()) != declared_clauses)
    throw ValidationError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                          std::to_string(f.clauses.size()));
  return f;
}

CnfFormula parse_dimacs_string(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

// ---- circuits -------------------------------------------------------------

void BooleanCircuit::validate() const {
  if (gates.empty()) throw ValidationError("formula needs at least one operator");
  const int n = num_inputs();
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const Gate& gate = gates[g];
    const std::size_t arity = gate.op == Op::Not ? 1 : 2;
    if (gate.operands.size() != arity) throw ValidationError("gate " + std::to_string(g + 1) + " has the wrong arity");
    for (int ref : gate.operands)
      if (ref < 0 || ref >= n + static_cast<int>(g))
        throw ValidationError("gate " + std::to_string(g + 1) + " refers to a later or unknown node");
    if (arity == 2 && gate.operands[0] == gate.operands[1])
      throw ValidationError("gate " + std::to_string(g + 1) + " repeats an operand");
  }
}

std::vector<bool> BooleanCircuit::evaluate(std::uint64_t inputs) const {
  const int n = num_inputs();
  std::vector<bool> value;
  value.reserve(gates.size());
  auto get = [&](int ref) { return ref < n ? static_cast<bool>((inputs >> ref) & 1) : static_cast<bool>(value[ref - n]); };
  for (const Gate& g : gates) {
    std::vector<bool> in;
    for (int ref : g.operands) in.push_back(get(ref));
    value.push_back(apply_op(g.op, in));
  }
  return value;
}

namespace {

class FormulaParser {
 public:
  explicit FormulaParser(std::string text) : text_(normalize(std::move(text))) {}

  BooleanCircuit parse() {
    const int root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    // Gates were recorded with provisional refs; inputs come first in the final numbering.
    BooleanCircuit c;
    c.input_names = inputs_;
    const int n = static_cast<int>(inputs_.size());
    for (const Node& node : nodes_) {
      if (node.input >= 0) continue;
      BooleanCircuit::Gate g{node.op, {}};
      for (int child : node.children) g.operands.push_back(final_ref(child, n));
      c.gates.push_back(std::move(g));
    }
    if (nodes_[root].input >= 0) fail("formula needs at least one operator");
    c.validate();
    return c;
  }

 private:
  struct Node {
    int input = -1;  // input index, or -1 for a gate
    BooleanCircuit::Op op = BooleanCircuit::Op::Not;
    std::vector<int> children;
    int gate_index = -1;
  };

  static std::string normalize(std::string s) {
    const std::pair<const char*, const char*> subst[] = {{"\xC2\xAC", "!"}, {"\xE2\x88\xA7", "&"}, {"\xE2\x88\xA8", "|"}};
    for (const auto& [from, to] : subst)
      for (std::size_t at; (at = s.find(from)) != std::string::npos;) s.replace(at, std::strlen(from), to);
    return s;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("formula: " + what + " at column " + std::to_string(pos_ + 1));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int gate(BooleanCircuit::Op op, std::vector<int> children) {
    Node n;
    n.op = op;
    n.children = std::move(children);
    n.gate_index = gate_count_++;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int expr() {
    int left = term();
    while (accept('|')) left = gate(BooleanCircuit::Op::Or, {left, term()});
    return left;
  }

  int term() {
    int left = factor();
    while (accept('&')) left = gate(BooleanCircuit::Op::And, {left, factor()});
    return left;
  }

  int factor() {
    if (accept('!') || accept('~')) return gate(BooleanCircuit::Op::Not, {factor()});
    if (accept('(')) {
      const int inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (pos_ == start) fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'" : "unexpected end");
    const std::string name = text_.substr(start, pos_ - start);
    auto it = input_node_.find(name);
    if (it != input_node_.end()) return it->second;
    Node n;
    n.input = static_cast<int>(inputs_.size());
    inputs_.push_back(name);
    nodes_.push_back(n);
    const int id = static_cast<int>(nodes_.size()) - 1;
    input_node_[name] = id;
    return id;
  }

  int final_ref(int node, int num_inputs) const {
    const Node& n = nodes_[node];
    return n.input >= 0 ? n.input : num_inputs + n.gate_index;
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::string> inputs_;
  std::map<std::string, int> input_node_;
  int gate_count_ = 0;
};

}  // namespace

BooleanCircuit parse_formula(const std::string& text) { return FormulaParser(text).parse(); }

BooleanCircuit cnf_to_circuit(const CnfFormula& f) {
  if (f.clauses.empty()) throw ValidationError("CNF has no clauses");
  BooleanCircuit c;
  for (int v = 1; v <= f.num_vars; ++v) c.input_names.push_back("x" + std::to_string(v));
  const int n = f.num_vars;
  auto add = [&](BooleanCircuit::Op op, std::vector<int> operands) {
    c.gates.push_back({op, std::move(operands)});
    return n + static_cast<int>(c.gates.size()) - 1;
  };
  int conj = -1;
  for (const auto& clause : f.clauses) {
    std::vector<int> lits;
    std::set<int> seen;
    for (int lit : clause)
      if (seen.insert(lit).second) lits.push_back(lit);
    int disj = -1;
    for (int lit : lits) {
      const int ref = lit > 0 ? lit - 1 : add(BooleanCircuit::Op::Not, {-lit - 1});
      disj = disj < 0 ? ref : add(BooleanCircuit::Op::Or, {disj, ref});
    }
    conj = conj < 0 ? disj : add(BooleanCircuit::Op::And, {conj, disj});
  }
  c.validate();
  // A single positive unit clause has no gate; validate() rejects that.
  if (c.gates.empty() || n + static_cast<int>(c.gates.size()) - 1 != conj)
    throw ValidationError("formula needs at least one operator");
  return c;
}

// ---- rationals --------------------------------------------------------------

namespace {

// Decimal digits only (optional sign), leading zeros dropped so the big
// integer parser never reads them as octal.
BigInt parse_integer(std::string text) {
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text.erase(0, 1);
  }
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("not an integer");
  const auto first = text.find_first_not_of('0');
  const BigInt value = first == std::string::npos ? BigInt(0) : BigInt(text.substr(first));
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const BigInt num = parse_integer(text.substr(0, slash)), den = parse_integer(text.substr(slash + 1));
      if (den == 0) throw ValidationError("zero denominator in '" + text + "'");
      return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(parse_integer(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty() || digits == "-") throw ValidationError("bad number '" + text + "'");
    const std::size_t frac = text.size() - dot - 1;
    BigInt den = 1;
    for (std::size_t i = 0; i < frac; ++i) den *= 10;
    return Rational(parse_integer(digits), den);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("bad number '" + text + "'");
  }
}

std::string rational_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

namespace {

double bigint_log(const BigInt& x) {
  const auto bits = boost::multiprecision::msb(x);
  const unsigned shift = bits > 60 ? static_cast<unsigned>(bits - 60) : 0u;
  const BigInt top = x >> shift;
  return std::log(static_cast<double>(top)) + shift * std::log(2.0);
}

}  // namespace

double rational_log(const Rational& r) {
  if (r <= 0) return -std::numeric_limits<double>::infinity();
  return bigint_log(boost::multiprecision::numerator(r)) - bigint_log(boost::multiprecision::denominator(r));
}

std::optional<Rational> snap_to_lattice(const BigInt& lattice, double log_value) {
  if (lattice <= 0) return std::nullopt;
  if (log_value == -std::numeric_limits<double>::infinity()) return Rational(0);
  const double log_cells = log_value + bigint_log(lattice);
  if (log_cells > 50 * std::log(2.0)) return std::nullopt;
  const double cells = std::exp(log_cells);
  const double nearest = std::round(cells);
  if (std::abs(nearest - cells) > 1e-9 * std::max(1.0, cells)) return std::nullopt;
  return Rational(BigInt(static_cast<long long>(nearest)), lattice);
}

std::optional<Rational> snap_to_lattice(const ReductionOutput& out, double log_value) {
  return snap_to_lattice(out.lattice, log_value);
}

bool exceeds_threshold(const Rational& threshold, const BigInt& lattice, double log_value) {
  if (auto exact = snap_to_lattice(lattice, log_value)) return *exact > threshold;
  return log_value > rational_log(threshold);
}

bool exceeds_threshold(const ReductionOutput& out, double log_value) {
  return exceeds_threshold(out.threshold, out.lattice, log_value);
}

// ---- constructions ------------------------------------------------------------

ReductionOutput circuit_to_map_network(const BooleanCircuit& f, int k) {
  require_inputs(f, k);
  const int n = f.num_inputs();
  const int m = static_cast<int>(f.gates.size());
  std::set<std::string> taken(f.input_names.begin(), f.input_names.end());
  std::vector<Variable> vars;
  std::vector<std::vector<VarId>> parents;
  std::vector<std::vector<double>> cpts;
  for (int i = 0; i < n; ++i) {
    vars.push_back(boolean(f.input_names[i]));
    parents.emplace_back();
    cpts.push_back({0.5, 0.5});
  }
  for (int g = 0; g < m; ++g) {
    vars.push_back(boolean(fresh_name(taken, "Y" + std::to_string(g + 1))));
    std::vector<VarId> ps;
    for (int ref : f.gates[g].operands) ps.push_back(ref_var(f, ref, n));
    std::vector<double> table;
    for_each_boolean_row(ps.size(), [&](const std::vector<bool>& in) {
      const bool v = apply_op(f.gates[g].op, in);
      table.push_back(v ? 0.0 : 1.0);
      table.push_back(v ? 1.0 : 0.0);
    });
    parents.push_back(std::move(ps));
    cpts.push_back(std::move(table));
  }
  ReductionOutput out;
  out.network = BayesianNetwork("circuit", std::move(vars), std::move(parents), std::move(cpts));
  for (int i = 0; i < k; ++i) out.map_vars.push_back(i);
  out.evidence.set(n + m - 1, 1);
  out.threshold = Rational(1, pow2(k + 1));
  out.lattice = pow2(n);
  out.metadata = {{"construction", "circuit"}, {"n", std::to_string(n)}, {"m", std::to_string(m)},
                  {"k", std::to_string(k)}};
  return out;
}

int emajsat_weight_count(int n, int m, double eps) {
  const double bound = (m + n + 1) / (1.0 + std::log2(0.5 + eps));
  return static_cast<int>(std::floor(bound)) + 1;
}

ReductionOutput emajsat_depth2_network(const BooleanCircuit& f, int k, const Rational& eps) {
  require_inputs(f, k);
  if (!(eps > 0 && eps <= Rational(1, 2))) throw ValidationError("eps must lie in (0, 1/2]");
  const double e = static_cast<double>(eps);
  const int n = f.num_inputs();
  const int m = static_cast<int>(f.gates.size());
  const int r = emajsat_weight_count(n, m, e);
  const double hi = static_cast<double>(Rational(1, 2) + eps);
  const double lo = static_cast<double>(Rational(1, 2) - eps);

  std::set<std::string> taken(f.input_names.begin(), f.input_names.end());
  std::vector<Variable> vars;
  std::vector<std::vector<VarId>> parents;
  std::vector<std::vector<double>> cpts;
  auto root = [&](const std::string& name) {
    vars.push_back(boolean(name));
    parents.emplace_back();
    cpts.push_back({0.5, 0.5});
  };
  for (int i = 0; i < n; ++i) root(f.input_names[i]);
  for (int g = 0; g < m; ++g) root(fresh_name(taken, "Y" + std::to_string(g + 1)));

  ReductionOutput out;
  for (int i = 0; i < k; ++i) out.map_vars.push_back(i);
  for (int g = 0; g < m; ++g) {
    std::vector<VarId> ps{static_cast<VarId>(n + g)};
    for (int ref : f.gates[g].operands) ps.push_back(ref_var(f, ref, n));
    std::vector<double> table;
    for_each_boolean_row(ps.size(), [&](const std::vector<bool>& in) {
      const std::vector<bool> operands(in.begin() + 1, in.end());
      const bool consistent = in[0] == apply_op(f.gates[g].op, operands);
      table.push_back(consistent ? lo : 0.5);
      table.push_back(consistent ? hi : 0.5);
    });
    for (int j = 0; j < r; ++j) {
      out.map_vars.push_back(static_cast<VarId>(vars.size()));
      vars.push_back(boolean(fresh_name(taken, "W" + std::to_string(g + 1) + "_" + std::to_string(j + 1))));
      parents.push_back(ps);
      cpts.push_back(table);
    }
  }
  for (int j = 0; j < r; ++j) {
    out.map_vars.push_back(static_cast<VarId>(vars.size()));
    vars.push_back(boolean(fresh_name(taken, "W" + std::to_string(j + 1))));
    parents.push_back({static_cast<VarId>(n + m - 1)});
    cpts.push_back({0.5, 0.5, lo, hi});
  }
  out.network = BayesianNetwork("emajsat", std::move(vars), std::move(parents), std::move(cpts));

  const Rational c = pow_rational(Rational(1, 2), m + n) * pow_rational(Rational(1, 2) + eps, static_cast<long>(m + 1) * r);
  // Half of the 2^(n-k) completions, rounded down: with k = n a single
  // satisfying completion is already a majority.
  const BigInt half = n - k - 1 >= 0 ? pow2(n - k - 1) : BigInt(0);
  out.threshold = Rational(half + 1) * c;
  out.metadata = {{"construction", "emajsat-depth2"}, {"n", std::to_string(n)}, {"m", std::to_string(m)},
                  {"k", std::to_string(k)}, {"eps", rational_string(eps)}, {"r", std::to_string(r)},
                  {"C", rational_string(c)}};
  return out;
}

ReductionOutput maxsat_to_polytree(const CnfFormula& f, int k) {
  if (f.clauses.empty()) throw ValidationError("CNF has no clauses");
  if (f.num_vars < 1 || f.num_vars > 60) throw ValidationError("CNF needs 1..60 variables");
  const int n = f.num_vars;
  const int m = static_cast<int>(f.clauses.size());
  std::vector<Variable> vars;
  std::vector<std::vector<VarId>> parents;
  std::vector<std::vector<double>> cpts;
  auto selector = [&](const std::string& name) { vars.push_back({name, m + 1, {}}); };

  selector("S0");
  parents.emplace_back();
  std::vector<double> prior(m + 1, 1.0 / m);
  prior[0] = 0.0;
  cpts.push_back(prior);

  ReductionOutput out;
  for (int i = 1; i <= n; ++i) {
    out.map_vars.push_back(static_cast<VarId>(vars.size()));
    vars.push_back(boolean("X" + std::to_string(i)));
    parents.emplace_back();
    cpts.push_back({0.5, 0.5});
    const auto x = static_cast<VarId>(vars.size() - 1);
    const auto prev = static_cast<VarId>(vars.size() - 2);
    selector("S" + std::to_string(i));
    parents.push_back({x, prev});
    std::vector<double> table;
    for (int xv = 0; xv < 2; ++xv)
      for (int s = 0; s <= m; ++s) {
        std::vector<double> row(m + 1, 0.0);
        bool satisfied = s == 0;
        if (!satisfied)
          for (int lit : f.clauses[s - 1])
            if (std::abs(lit) == i && (lit > 0) == (xv == 1)) satisfied = true;
        row[satisfied ? 0 : s] = 1.0;
        table.insert(table.end(), row.begin(), row.end());
      }
    cpts.push_back(std::move(table));
  }
  out.network = BayesianNetwork("maxsat", std::move(vars), std::move(parents), std::move(cpts));
  out.evidence.set(static_cast<VarId>(2 * n), 0);
  out.lattice = BigInt(m) * pow2(n);
  out.threshold = Rational(BigInt(k), out.lattice);
  out.metadata = {{"construction", "maxsat-polytree"}, {"n", std::to_string(n)}, {"m", std::to_string(m)},
                  {"k", std::to_string(k)}};
  return out;
}

bool replication_direct_check(int q, int n, int m, double eps) {
  const double size = static_cast<double>(q) * (m + 1) * (m + 1) * (4.0 * n + 4);
  return q * std::log1p(1.0 / (4.0 * m)) > std::pow(size, eps) * std::log(2.0);
}

ReplicationBound replication_count(int n, int m, double eps) {
  if (!(eps >= 0 && eps < 1)) throw ValidationError("eps must lie in [0, 1)");
  ReplicationBound b;
  b.bound = std::pow((4.0 * m + 0.5) * std::pow(m + 1.0, 2 * eps) * std::pow(4.0 * n + 4, eps) * std::log(2.0),
                     1.0 / (1.0 - eps));
  b.q = static_cast<int>(std::floor(b.bound)) + 1;
  b.direct_check = replication_direct_check(b.q, n, m, eps);
  return b;
}

ReductionOutput replicate_polytree(const CnfFormula& f, double eps, std::optional<int> q_override) {
  if (f.clauses.empty()) throw ValidationError("CNF has no clauses");
  const int n = f.num_vars;
  const int m = static_cast<int>(f.clauses.size());
  const ReplicationBound bound = replication_count(n, m, eps);
  const int q = q_override ? *q_override : bound.q;
  if (q < 1) throw ValidationError("need at least one copy");
  if (static_cast<double>(q) * (2 * n + 2) > 1e6) throw ResourceError("replicated network would have too many variables");

  const ReductionOutput gadget = maxsat_to_polytree(f, m);
  const BayesianNetwork& g = gadget.network;
  const std::size_t per = g.size();
  std::vector<Variable> vars;
  std::vector<std::vector<VarId>> parents;
  std::vector<std::vector<double>> cpts;
  ReductionOutput out;
  VarId previous_bridge = -1;
  for (int c = 1; c <= q; ++c) {
    const auto base = static_cast<VarId>(vars.size());
    for (std::size_t v = 0; v < per; ++v) {
      Variable var = g.variable(static_cast<VarId>(v));
      var.name += "_" + std::to_string(c);
      vars.push_back(std::move(var));
      std::vector<VarId> ps;
      for (VarId p : g.parents(static_cast<VarId>(v))) ps.push_back(base + p);
      parents.push_back(std::move(ps));
      cpts.push_back(g.cpt(static_cast<VarId>(v)).linear_values());
    }
    for (VarId v : gadget.map_vars) out.map_vars.push_back(base + v);
    const VarId sn = base + static_cast<VarId>(2 * n);
    out.evidence.set(sn, 0);
    const auto bridge = static_cast<VarId>(vars.size());
    vars.push_back(boolean("B_" + std::to_string(c)));
    std::vector<VarId> ps{sn};
    if (previous_bridge >= 0) ps.push_back(previous_bridge);
    std::size_t rows = static_cast<std::size_t>(m + 1) * (previous_bridge >= 0 ? 2 : 1);
    parents.push_back(std::move(ps));
    cpts.emplace_back(2 * rows, 0.5);
    previous_bridge = bridge;
  }
  out.network = BayesianNetwork("maxsat-replicated", std::move(vars), std::move(parents), std::move(cpts));
  out.lattice = 1;
  for (int c = 0; c < q; ++c) out.lattice *= BigInt(m) * pow2(n);
  out.threshold = pow_rational(Rational(2 * m - 1, 2 * BigInt(m) * pow2(n)), q);
  std::ostringstream bound_text;
  bound_text.precision(17);
  bound_text << bound.bound;
  out.metadata = {{"construction", "maxsat-replicated"}, {"n", std::to_string(n)}, {"m", std::to_string(m)},
                  {"eps", std::to_string(eps)}, {"q", std::to_string(q)}, {"q_bound", bound_text.str()},
                  {"q_from_bound", std::to_string(bound.q)}, {"direct_check", bound.direct_check ? "true" : "false"}};
  return out;
}

// ---- logical oracles ------------------------------------------------------------

bool brute_force_emajsat(const BooleanCircuit& f, int k) {
  require_inputs(f, k);
  const int n = f.num_inputs();
  const std::uint64_t completions = std::uint64_t{1} << (n - k);
  for (std::uint64_t q = 0; q < (std::uint64_t{1} << k); ++q) {
    std::uint64_t satisfied = 0;
    for (std::uint64_t rest = 0; rest < completions; ++rest)
      if (f.output(q | (rest << k))) ++satisfied;
    if (2 * satisfied > completions) return true;
  }
  return false;
}

bool brute_force_sat(const BooleanCircuit& f) {
  f.validate();
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << f.num_inputs()); ++x)
    if (f.output(x)) return true;
  return false;
}

int brute_force_maxsat(const CnfFormula& f) {
  int best = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << f.num_vars); ++x) best = std::max(best, f.count_satisfied(x));
  return best;
}

}  // namespace bnmap
