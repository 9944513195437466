#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bnmap/instantiation.hpp"

namespace bnmap {

/// Dense nonnegative table over an ordered variable scope.
///
/// Cells are laid out lexicographically with the last scope variable varying
/// fastest. Values are held as natural logarithms; a zero cell is -infinity.
/// Potentials are immutable values once built.
class Potential {
 public:
  /// The scalar 1.
  Potential() : log_values_(1, 0.0) {}

  static Potential from_linear(std::vector<VarId> scope, std::vector<int> cards,
                               std::span<const double> values);
  static Potential from_log(std::vector<VarId> scope, std::vector<int> cards,
                            std::vector<double> log_values);
  static Potential ones(std::vector<VarId> scope, std::vector<int> cards);
  static Potential scalar_log(double log_value);

  const std::vector<VarId>& scope() const { return scope_; }
  const std::vector<int>& cards() const { return cards_; }
  std::size_t size() const { return log_values_.size(); }
  std::span<const double> log_values() const { return log_values_; }

  double log_at(std::size_t cell) const { return log_values_[cell]; }
  double at(std::size_t cell) const;
  std::vector<double> linear_values() const;

  /// Position of `v` in the scope, or -1.
  int position(VarId v) const;
  bool contains(VarId v) const { return position(v) >= 0; }
  int card_of(VarId v) const;

  /// Cell index for a full assignment of the scope (states in scope order).
  std::size_t index_of(std::span<const State> states) const;
  /// Cell index for the scope variables as assigned in `x` (all must be set).
  std::size_t index_of(const Instantiation& x) const;
  /// Inverse of index_of.
  std::vector<State> states_of(std::size_t cell) const;

  /// Log value of an empty-scope potential.
  double log_scalar() const;

 private:
  Potential(std::vector<VarId> scope, std::vector<int> cards, std::vector<double> log_values);

  std::vector<VarId> scope_;
  std::vector<int> cards_;
  std::vector<double> log_values_;
};

/// Result of maximize_out: the maximized potential plus, per output cell, the
/// states of the eliminated variables that attain the maximum.
struct MaxOutResult {
  Potential potential;
  std::vector<VarId> eliminated;  // sorted by id
  std::vector<State> witness;     // potential.size() rows of eliminated.size() states

  std::span<const State> argmax(std::size_t cell) const {
    return std::span<const State>(witness).subspan(cell * eliminated.size(), eliminated.size());
  }
};

/// Pointwise product. Scope: p1's variables, then p2's variables not in p1.
Potential multiply(const Potential& p1, const Potential& p2);

/// Sums the given variables out. Each must be in the scope.
Potential sum_out(const Potential& p, std::span<const VarId> vars);

/// Maximizes the given variables out. Ties break toward the lexicographically
/// smallest eliminated assignment, variables taken in increasing id order.
MaxOutResult maximize_out(const Potential& p, std::span<const VarId> vars);

/// Zeros every cell incompatible with the evidence; scope is unchanged.
Potential reduce_by_evidence(const Potential& p, const Instantiation& e);

/// Sums out everything except `keep` (which must be a subset of the scope).
/// Result scope follows the order of `keep`.
Potential marginalize_onto(const Potential& p, std::span<const VarId> keep);

/// log(exp(a) + exp(b)) with -inf handled.
double log_add(double a, double b);

}  // namespace bnmap
