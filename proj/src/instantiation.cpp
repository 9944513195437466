#include "bnmap/instantiation.hpp"

#include <algorithm>
#include <stdexcept>

namespace bnmap {

void Instantiation::set(VarId v, State s) {
  if (v < 0) throw std::out_of_range("negative variable id");
  if (s < 0) throw std::out_of_range("negative state index");
  if (static_cast<std::size_t>(v) >= states_.size()) states_.resize(v + 1, kUnset);
  states_[v] = s;
}

void Instantiation::unset(VarId v) {
  if (has(v)) states_[v] = kUnset;
}

std::size_t Instantiation::count() const {
  return static_cast<std::size_t>(
      std::count_if(states_.begin(), states_.end(), [](State s) { return s != kUnset; }));
}

std::vector<VarId> Instantiation::vars() const {
  std::vector<VarId> out;
  for (std::size_t v = 0; v < states_.size(); ++v)
    if (states_[v] != kUnset) out.push_back(static_cast<VarId>(v));
  return out;
}

bool Instantiation::compatible(const Instantiation& other) const {
  const std::size_t n = std::min(states_.size(), other.states_.size());
  for (std::size_t v = 0; v < n; ++v)
    if (states_[v] != kUnset && other.states_[v] != kUnset && states_[v] != other.states_[v])
      return false;
  return true;
}

Instantiation Instantiation::merged(const Instantiation& other) const {
  Instantiation out = *this;
  for (VarId v : other.vars()) out.set(v, other[v]);
  return out;
}

bool Instantiation::operator==(const Instantiation& other) const {
  const std::size_t n = std::max(states_.size(), other.states_.size());
  for (std::size_t v = 0; v < n; ++v)
    if ((*this)[static_cast<VarId>(v)] != other[static_cast<VarId>(v)]) return false;
  return true;
}

}  // namespace bnmap
