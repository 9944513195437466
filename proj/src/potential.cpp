#include "bnmap/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bnmap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t product_of(const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  return n;
}

// Row-major strides of a scope, last variable fastest.
std::vector<std::size_t> strides_of(const std::vector<int>& cards) {
  std::vector<std::size_t> s(cards.size(), 1);
  for (std::size_t i = cards.size(); i-- > 1;) s[i - 1] = s[i] * static_cast<std::size_t>(cards[i]);
  return s;
}

// Walks the cells of a target scope while tracking the matching cell index in
// a source potential whose scope is a subset of the target's.
class IndexWalker {
 public:
  IndexWalker(const std::vector<VarId>& target_scope, const std::vector<int>& target_cards,
              const Potential& source)
      : cards_(target_cards), counter_(target_cards.size(), 0), step_(target_cards.size(), 0) {
    const auto src_strides = strides_of(source.cards());
    for (std::size_t k = 0; k < target_scope.size(); ++k) {
      const int pos = source.position(target_scope[k]);
      if (pos >= 0) step_[k] = src_strides[pos];
    }
  }

  std::size_t index() const { return index_; }

  void advance() {
    for (std::size_t k = cards_.size(); k-- > 0;) {
      index_ += step_[k];
      if (++counter_[k] < cards_[k]) return;
      index_ -= step_[k] * static_cast<std::size_t>(cards_[k]);
      counter_[k] = 0;
    }
  }

 private:
  const std::vector<int>& cards_;
  std::vector<int> counter_;
  std::vector<std::size_t> step_;
  std::size_t index_ = 0;
};

void check_scope(const std::vector<VarId>& scope, const std::vector<int>& cards) {
  if (scope.size() != cards.size()) throw std::invalid_argument("scope/cardinality length mismatch");
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (cards[i] < 1) throw std::invalid_argument("cardinality must be positive");
    for (std::size_t j = i + 1; j < scope.size(); ++j)
      if (scope[i] == scope[j])
        throw std::invalid_argument("duplicate variable " + std::to_string(scope[i]) + " in scope");
  }
}

}  // namespace

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

Potential::Potential(std::vector<VarId> scope, std::vector<int> cards, std::vector<double> log_values)
    : scope_(std::move(scope)), cards_(std::move(cards)), log_values_(std::move(log_values)) {}

Potential Potential::from_linear(std::vector<VarId> scope, std::vector<int> cards,
                                 std::span<const double> values) {
  check_scope(scope, cards);
  if (values.size() != product_of(cards)) throw std::invalid_argument("potential value count mismatch");
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0)) throw std::invalid_argument("potential values must be nonnegative");
    logs[i] = values[i] == 0.0 ? kNegInf : std::log(values[i]);
  }
  return Potential(std::move(scope), std::move(cards), std::move(logs));
}

Potential Potential::from_log(std::vector<VarId> scope, std::vector<int> cards,
                              std::vector<double> log_values) {
  check_scope(scope, cards);
  if (log_values.size() != product_of(cards)) throw std::invalid_argument("potential value count mismatch");
  return Potential(std::move(scope), std::move(cards), std::move(log_values));
}

Potential Potential::ones(std::vector<VarId> scope, std::vector<int> cards) {
  check_scope(scope, cards);
  std::vector<double> logs(product_of(cards), 0.0);
  return Potential(std::move(scope), std::move(cards), std::move(logs));
}

Potential Potential::scalar_log(double log_value) { return Potential({}, {}, {log_value}); }

double Potential::at(std::size_t cell) const {
  const double l = log_values_[cell];
  return l == kNegInf ? 0.0 : std::exp(l);
}

std::vector<double> Potential::linear_values() const {
  std::vector<double> out(log_values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i);
  return out;
}

int Potential::position(VarId v) const {
  for (std::size_t i = 0; i < scope_.size(); ++i)
    if (scope_[i] == v) return static_cast<int>(i);
  return -1;
}

int Potential::card_of(VarId v) const {
  const int pos = position(v);
  if (pos < 0) throw std::invalid_argument("variable " + std::to_string(v) + " not in scope");
  return cards_[pos];
}

std::size_t Potential::index_of(std::span<const State> states) const {
  if (states.size() != scope_.size()) throw std::invalid_argument("state tuple length mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (states[i] < 0 || states[i] >= cards_[i]) throw std::out_of_range("state index out of range");
    idx = idx * static_cast<std::size_t>(cards_[i]) + static_cast<std::size_t>(states[i]);
  }
  return idx;
}

std::size_t Potential::index_of(const Instantiation& x) const {
  std::vector<State> states(scope_.size());
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (!x.has(scope_[i])) throw std::invalid_argument("instantiation misses scope variable");
    states[i] = x[scope_[i]];
  }
  return index_of(states);
}

std::vector<State> Potential::states_of(std::size_t cell) const {
  std::vector<State> states(scope_.size());
  for (std::size_t i = scope_.size(); i-- > 0;) {
    states[i] = static_cast<State>(cell % static_cast<std::size_t>(cards_[i]));
    cell /= static_cast<std::size_t>(cards_[i]);
  }
  return states;
}

double Potential::log_scalar() const {
  if (!scope_.empty()) throw std::logic_error("log_scalar on a non-scalar potential");
  return log_values_[0];
}

Potential multiply(const Potential& p1, const Potential& p2) {
  std::vector<VarId> scope = p1.scope();
  std::vector<int> cards = p1.cards();
  for (std::size_t i = 0; i < p2.scope().size(); ++i) {
    const VarId v = p2.scope()[i];
    const int pos = p1.position(v);
    if (pos < 0) {
      scope.push_back(v);
      cards.push_back(p2.cards()[i]);
    } else if (p1.cards()[pos] != p2.cards()[i]) {
      throw std::invalid_argument("cardinality mismatch for variable " + std::to_string(v));
    }
  }
  const std::size_t n = product_of(cards);
  std::vector<double> out(n);
  IndexWalker w1(scope, cards, p1);
  IndexWalker w2(scope, cards, p2);
  const auto a = p1.log_values();
  const auto b = p2.log_values();
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a[w1.index()] + b[w2.index()];
    w1.advance();
    w2.advance();
  }
  return Potential::from_log(std::move(scope), std::move(cards), std::move(out));
}

namespace {

struct Split {
  std::vector<VarId> kept_scope;
  std::vector<int> kept_cards;
  std::vector<VarId> dropped;
};

Split split_scope(const Potential& p, std::span<const VarId> vars) {
  for (VarId v : vars)
    if (!p.contains(v)) throw std::invalid_argument("variable " + std::to_string(v) + " not in scope");
  Split s;
  for (std::size_t i = 0; i < p.scope().size(); ++i) {
    const VarId v = p.scope()[i];
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
      s.kept_scope.push_back(v);
      s.kept_cards.push_back(p.cards()[i]);
    } else {
      s.dropped.push_back(v);
    }
  }
  return s;
}

// For each cell of p, the matching cell of the potential over `kept` scope.
std::vector<std::size_t> projection_map(const Potential& p, const std::vector<VarId>& kept_scope,
                                        const std::vector<int>& kept_cards) {
  const Potential shape = Potential::ones(kept_scope, kept_cards);
  IndexWalker w(p.scope(), p.cards(), shape);
  std::vector<std::size_t> map(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    map[i] = w.index();
    w.advance();
  }
  return map;
}

}  // namespace

Potential sum_out(const Potential& p, std::span<const VarId> vars) {
  if (vars.empty()) return p;
  Split s = split_scope(p, vars);
  const std::size_t n = product_of(s.kept_cards);
  const auto map = projection_map(p, s.kept_scope, s.kept_cards);
  const auto in = p.log_values();
  std::vector<double> peak(n, kNegInf);
  for (std::size_t i = 0; i < in.size(); ++i) peak[map[i]] = std::max(peak[map[i]], in[i]);
  std::vector<double> acc(n, 0.0);
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in[i] != kNegInf) acc[map[i]] += std::exp(in[i] - peak[map[i]]);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = peak[j] == kNegInf ? kNegInf : peak[j] + std::log(acc[j]);
  return Potential::from_log(std::move(s.kept_scope), std::move(s.kept_cards), std::move(out));
}

MaxOutResult maximize_out(const Potential& p, std::span<const VarId> vars) {
  Split s = split_scope(p, vars);
  std::vector<VarId> elim = s.dropped;
  std::sort(elim.begin(), elim.end());
  std::vector<int> elim_pos(elim.size());
  for (std::size_t k = 0; k < elim.size(); ++k) elim_pos[k] = p.position(elim[k]);

  const std::size_t n = product_of(s.kept_cards);
  const std::size_t width = elim.size();
  const auto map = projection_map(p, s.kept_scope, s.kept_cards);
  const auto in = p.log_values();
  std::vector<double> best(n, kNegInf);
  std::vector<State> witness(n * width, 0);
  std::vector<bool> seen(n, false);
  std::vector<State> counter(p.scope().size(), 0);
  std::vector<State> cand(width);

  for (std::size_t i = 0; i < in.size(); ++i) {
    const std::size_t j = map[i];
    for (std::size_t k = 0; k < width; ++k) cand[k] = counter[elim_pos[k]];
    State* w = witness.data() + j * width;
    if (!seen[j] || in[i] > best[j] ||
        (in[i] == best[j] && std::lexicographical_compare(cand.begin(), cand.end(), w, w + width))) {
      seen[j] = true;
      best[j] = in[i];
      std::copy(cand.begin(), cand.end(), w);
    }
    for (std::size_t k = counter.size(); k-- > 0;) {
      if (++counter[k] < p.cards()[k]) break;
      counter[k] = 0;
    }
  }
  return MaxOutResult{Potential::from_log(std::move(s.kept_scope), std::move(s.kept_cards), std::move(best)),
                      std::move(elim), std::move(witness)};
}

Potential reduce_by_evidence(const Potential& p, const Instantiation& e) {
  std::vector<std::size_t> pos;
  std::vector<State> want;
  for (std::size_t i = 0; i < p.scope().size(); ++i) {
    if (e.has(p.scope()[i])) {
      pos.push_back(i);
      want.push_back(e[p.scope()[i]]);
    }
  }
  if (pos.empty()) return p;
  std::vector<double> out(p.log_values().begin(), p.log_values().end());
  std::vector<State> counter(p.scope().size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < pos.size(); ++k) {
      if (counter[pos[k]] != want[k]) {
        out[i] = kNegInf;
        break;
      }
    }
    for (std::size_t k = counter.size(); k-- > 0;) {
      if (++counter[k] < p.cards()[k]) break;
      counter[k] = 0;
    }
  }
  return Potential::from_log(p.scope(), p.cards(), std::move(out));
}

Potential marginalize_onto(const Potential& p, std::span<const VarId> keep) {
  std::vector<VarId> drop;
  for (VarId v : p.scope())
    if (std::find(keep.begin(), keep.end(), v) == keep.end()) drop.push_back(v);
  Potential summed = sum_out(p, drop);
  if (std::equal(summed.scope().begin(), summed.scope().end(), keep.begin(), keep.end())) return summed;
  // Reorder into the requested scope order.
  std::vector<VarId> scope(keep.begin(), keep.end());
  std::vector<int> cards;
  for (VarId v : scope) cards.push_back(summed.card_of(v));
  std::vector<double> out(summed.size());
  IndexWalker w(scope, cards, summed);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = summed.log_at(w.index());
    w.advance();
  }
  return Potential::from_log(std::move(scope), std::move(cards), std::move(out));
}

}  // namespace bnmap
