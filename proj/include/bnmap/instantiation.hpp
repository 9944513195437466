#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace bnmap {

using VarId = int;
using State = int;

/// Partial or complete assignment of network variables to state indices.
///
/// Stored densely by variable id; unassigned ids hold `kUnset`. Setting an id
/// past the current universe grows it.
class Instantiation {
 public:
  static constexpr State kUnset = -1;

  Instantiation() = default;
  explicit Instantiation(std::size_t universe) : states_(universe, kUnset) {}

  void set(VarId v, State s);
  void unset(VarId v);

  bool has(VarId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < states_.size() && states_[v] != kUnset;
  }
  std::optional<State> get(VarId v) const {
    if (!has(v)) return std::nullopt;
    return states_[v];
  }
  /// State of an assigned variable; kUnset otherwise.
  State operator[](VarId v) const { return has(v) ? states_[v] : kUnset; }

  /// Number of assigned variables.
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::size_t universe() const { return states_.size(); }

  /// Assigned variable ids in increasing order.
  std::vector<VarId> vars() const;

  /// True iff the two instantiations agree on every variable both assign.
  bool compatible(const Instantiation& other) const;

  /// Union of two compatible instantiations (values of `other` win on overlap).
  Instantiation merged(const Instantiation& other) const;

  bool operator==(const Instantiation& other) const;

 private:
  std::vector<State> states_;
};

}  // namespace bnmap
