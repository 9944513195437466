#include "bnmap/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "bnmap/error.hpp"

namespace bnmap {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

// Splits non-empty, comment-stripped lines into whitespace tokens.
std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  int number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream ss(text);
    Line line{number, {}};
    for (std::string tok; ss >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

bool valid_name(const std::string& s) {
  return !s.empty() && s.find_first_of("|=") == std::string::npos;
}

double parse_real(const std::string& tok, int line) {
  double x = 0.0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x)) throw ValidationError("bad number '" + tok + "'", line);
  return x;
}

int parse_count(const std::string& tok, int line) {
  int x = 0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ValidationError("bad integer '" + tok + "'", line);
  return x;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

BayesianNetwork parse_network(std::istream& in) {
  const std::vector<Line> lines = tokenize(in);
  std::size_t i = 0;
  if (lines.empty() || lines[0].tokens[0] != "net")
    throw ValidationError("expected 'net <name>'", lines.empty() ? 1 : lines[0].number);
  if (lines[0].tokens.size() != 2) throw ValidationError("expected 'net <name>'", lines[0].number);
  const std::string name = lines[0].tokens[1];
  ++i;

  std::vector<Variable> vars;
  std::map<std::string, VarId> ids;
  for (; i < lines.size() && lines[i].tokens[0] == "var"; ++i) {
    const Line& l = lines[i];
    if (l.tokens.size() < 3) throw ValidationError("expected 'var <name> <cardinality> [states...]'", l.number);
    Variable v;
    v.name = l.tokens[1];
    if (!valid_name(v.name)) throw ValidationError("bad variable name '" + v.name + "'", l.number);
    v.cardinality = parse_count(l.tokens[2], l.number);
    if (v.cardinality < 2) throw ValidationError("variable '" + v.name + "' needs at least two states", l.number);
    v.state_names.assign(l.tokens.begin() + 3, l.tokens.end());
    if (!v.state_names.empty() && v.state_names.size() != static_cast<std::size_t>(v.cardinality))
      throw ValidationError("variable '" + v.name + "' lists " + std::to_string(v.state_names.size()) +
                                " state names for cardinality " + std::to_string(v.cardinality),
                            l.number);
    for (const auto& s : v.state_names)
      if (!valid_name(s)) throw ValidationError("bad state name '" + s + "'", l.number);
    if (!ids.emplace(v.name, static_cast<VarId>(vars.size())).second)
      throw ValidationError("duplicate variable '" + v.name + "'", l.number);
    vars.push_back(std::move(v));
  }

  const std::size_t n = vars.size();
  std::vector<std::vector<VarId>> parents(n);
  std::vector<std::vector<double>> cpts(n);
  std::vector<bool> seen(n, false);
  auto lookup = [&](const std::string& s, int line) {
    auto it = ids.find(s);
    if (it == ids.end()) throw ValidationError("unknown variable '" + s + "'", line);
    return it->second;
  };

  while (i < lines.size()) {
    const Line& head = lines[i++];
    if (head.tokens[0] == "var") throw ValidationError("'var' after the first 'cpt' block", head.number);
    if (head.tokens[0] != "cpt" || head.tokens.size() < 2)
      throw ValidationError("expected 'cpt <child> | <parents...>'", head.number);
    const VarId child = lookup(head.tokens[1], head.number);
    if (seen[child]) throw ValidationError("second CPT for '" + vars[child].name + "'", head.number);
    seen[child] = true;
    std::size_t t = 2;
    if (t < head.tokens.size()) {
      if (head.tokens[t] != "|") throw ValidationError("expected '|' after the child", head.number);
      ++t;
    }
    std::size_t rows = 1;
    for (; t < head.tokens.size(); ++t) {
      const VarId p = lookup(head.tokens[t], head.number);
      parents[child].push_back(p);
      rows *= static_cast<std::size_t>(vars[p].cardinality);
    }
    const int k = vars[child].cardinality;
    for (std::size_t r = 0; r < rows; ++r) {
      if (i >= lines.size() || lines[i].tokens[0] == "cpt")
        throw ValidationError("CPT of '" + vars[child].name + "' needs " + std::to_string(rows) + " rows",
                              i < lines.size() ? lines[i].number : lines.back().number);
      const Line& row = lines[i++];
      if (row.tokens.size() != static_cast<std::size_t>(k))
        throw ValidationError("row needs " + std::to_string(k) + " entries", row.number);
      double sum = 0.0;
      for (const auto& tok : row.tokens) {
        const double x = parse_real(tok, row.number);
        if (x < 0.0 || x > 1.0) throw ValidationError("entry " + tok + " outside [0, 1]", row.number);
        sum += x;
        cpts[child].push_back(x);
      }
      if (std::abs(sum - 1.0) > BayesianNetwork::kRowTolerance)
        throw ValidationError("row sums to " + format_real(sum), row.number);
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!seen[v]) throw ValidationError("no CPT for '" + vars[v].name + "'", lines.back().number);

  try {
    return BayesianNetwork(name, std::move(vars), std::move(parents), std::move(cpts));
  } catch (const ValidationError& err) {
    throw ValidationError(err.what(), lines.back().number);
  }
}

BayesianNetwork parse_network_string(const std::string& text) {
  std::istringstream in(text);
  return parse_network(in);
}

BayesianNetwork parse_network_file(const std::string& path) {
  std::ifstream in = open_in(path);
  return parse_network(in);
}

void emit_network(std::ostream& out, const BayesianNetwork& net) {
  out << "net " << net.name() << '\n';
  for (const Variable& v : net.variables()) {
    out << "var " << v.name << ' ' << v.cardinality;
    for (const auto& s : v.state_names) out << ' ' << s;
    out << '\n';
  }
  for (std::size_t v = 0; v < net.size(); ++v) {
    const VarId id = static_cast<VarId>(v);
    out << "cpt " << net.variable(id).name << " |";
    for (VarId p : net.parents(id)) out << ' ' << net.variable(p).name;
    out << '\n';
    const auto& cells = net.cpt_values(id);
    const std::size_t k = static_cast<std::size_t>(net.cardinality(id));
    for (std::size_t c = 0; c < cells.size(); ++c) out << format_real(cells[c]) << ((c + 1) % k ? ' ' : '\n');
  }
}

std::string emit_network_string(const BayesianNetwork& net) {
  std::ostringstream out;
  emit_network(out, net);
  return out.str();
}

void emit_network_file(const std::string& path, const BayesianNetwork& net) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  emit_network(out, net);
}

Query parse_query(std::istream& in, const BayesianNetwork& net) {
  Query q;
  q.evidence = Instantiation(net.size());
  auto lookup = [&](const std::string& s, int line) {
    auto v = net.find(s);
    if (!v) throw ValidationError("unknown variable '" + s + "'", line);
    return *v;
  };
  for (const Line& l : tokenize(in)) {
    const std::string& key = l.tokens[0];
    if (key == "map") {
      for (std::size_t t = 1; t < l.tokens.size(); ++t) q.map_vars.push_back(lookup(l.tokens[t], l.number));
    } else if (key == "evidence") {
      for (std::size_t t = 1; t < l.tokens.size(); ++t) {
        const std::string& tok = l.tokens[t];
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ValidationError("expected <var>=<state>, got '" + tok + "'", l.number);
        const VarId v = lookup(tok.substr(0, eq), l.number);
        const auto s = net.find_state(v, tok.substr(eq + 1));
        if (!s) throw ValidationError("unknown state in '" + tok + "'", l.number);
        if (q.evidence.has(v) && q.evidence[v] != *s)
          throw ValidationError("conflicting evidence on '" + net.variable(v).name + "'", l.number);
        q.evidence.set(v, *s);
      }
    } else if (key == "threshold" && l.tokens.size() == 2) {
      try {
        q.threshold = parse_rational(l.tokens[1]);
      } catch (const ValidationError& err) {
        throw ValidationError(err.what(), l.number);
      }
    } else if (key == "lattice" && l.tokens.size() == 2) {
      const std::string& tok = l.tokens[1];
      if (tok.find_first_not_of("0123456789") != std::string::npos)
        throw ValidationError("bad lattice '" + tok + "'", l.number);
      q.lattice = boost::multiprecision::numerator(parse_rational(tok));
    } else {
      throw ValidationError("unknown query line '" + key + "'", l.number);
    }
  }
  std::sort(q.map_vars.begin(), q.map_vars.end());
  if (std::adjacent_find(q.map_vars.begin(), q.map_vars.end()) != q.map_vars.end())
    throw ValidationError("repeated MAP variable");
  for (VarId v : q.map_vars)
    if (q.evidence.has(v)) throw ValidationError("'" + net.variable(v).name + "' is both MAP and evidence");
  return q;
}

Query parse_query_string(const std::string& text, const BayesianNetwork& net) {
  std::istringstream in(text);
  return parse_query(in, net);
}

Query parse_query_file(const std::string& path, const BayesianNetwork& net) {
  std::ifstream in = open_in(path);
  return parse_query(in, net);
}

void emit_query(std::ostream& out, const BayesianNetwork& net, const Query& q) {
  out << "map";
  for (VarId v : q.map_vars) out << ' ' << net.variable(v).name;
  out << '\n';
  const auto ev = q.evidence.vars();
  if (!ev.empty()) {
    out << "evidence";
    for (VarId v : ev) out << ' ' << net.variable(v).name << '=' << net.state_label(v, q.evidence[v]);
    out << '\n';
  }
  if (q.threshold) out << "threshold " << rational_string(*q.threshold) << '\n';
  if (q.lattice != 0) out << "lattice " << q.lattice.str() << '\n';
}

std::string emit_query_string(const BayesianNetwork& net, const Query& q) {
  std::ostringstream out;
  emit_query(out, net, q);
  return out.str();
}

Query query_of(const ReductionOutput& r) {
  Query q;
  q.map_vars = r.map_vars;
  std::sort(q.map_vars.begin(), q.map_vars.end());
  q.evidence = r.evidence;
  q.threshold = r.threshold;
  q.lattice = r.lattice;
  return q;
}

}  // namespace bnmap
