#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bnmap/network.hpp"

namespace bnmap {

class Rng;

/// Total elimination order over network variables, optionally tagged with
/// the set that was constrained to come last.
struct EliminationOrder {
  std::vector<VarId> order;
  std::vector<VarId> constrained_last;
};

/// Symbolic cost of an elimination order. Widths are log2 of the largest
/// multiplied table minus one; for all-binary networks this is an integer.
struct WidthReport {
  double width = -1.0;
  std::vector<VarId> largest_scope;
  std::vector<double> step_log2_sizes;  // log2 |M_X| per order position
};

/// One node per eliminated variable. `parent_step` is the step that consumes
/// the potential produced at this step (-1 when it is a constant).
struct EvaluationTree {
  std::vector<VarId> order;
  std::vector<std::vector<VarId>> step_scope;  // scope of M_X, sorted
  std::vector<std::vector<VarId>> leaf_cpts;   // CPTs multiplied in directly
  std::vector<std::vector<int>> child_steps;
  std::vector<int> parent_step;
};

enum class QueryMode { Pr, Mpe, Map };

struct EliminationOptions {
  std::size_t cell_budget = std::size_t{1} << 26;
};

struct EliminationResult {
  double value = 0.0;      // linear-space Pr(e), max Pr(x,e) or max Pr(q,e)
  double log_value = 0.0;  // natural log of value
  Instantiation assignment;  // argmax over MPE/MAP variables; empty for Pr
  bool zero_evidence = false;
};

/// Greedy min-fill over the moral graph. Variables in `last` become eligible
/// only once every other variable is gone. Ties: fewest fill edges, then
/// lowest id, or uniformly at random among the tied when `tie_breaker` is set.
EliminationOrder min_fill_order(const BayesianNetwork& net, std::span<const VarId> last = {},
                                Rng* tie_breaker = nullptr);

/// Width of eliminating `order`. Variables listed in `evidence_vars` are
/// clamped, so they contribute a single state to table sizes.
WidthReport order_width(const BayesianNetwork& net, std::span<const VarId> order,
                        std::span<const VarId> evidence_vars = {});

EvaluationTree build_evaluation_tree(const BayesianNetwork& net, std::span<const VarId> order);

/// An order is valid for MAP over `q_vars` when every MAP variable's
/// multiplied potential mentions only MAP (or clamped evidence) variables.
bool validate_map_order(const BayesianNetwork& net, std::span<const VarId> order,
                        std::span<const VarId> q_vars, std::span<const VarId> evidence_vars = {});

/// Reorders a MAP-valid order so all non-MAP variables come first while
/// inducing the same evaluation tree, hence the same width.
EliminationOrder push_q_last(const BayesianNetwork& net, std::span<const VarId> order,
                             std::span<const VarId> q_vars);

/// Variable elimination. Pr sums everything out, Mpe maximizes all
/// non-evidence variables, Map maximizes `map_vars` and sums the rest.
EliminationResult eliminate(const BayesianNetwork& net, const Instantiation& e,
                            std::span<const VarId> order, QueryMode mode,
                            std::span<const VarId> map_vars = {}, const EliminationOptions& options = {});

// Conveniences that pick a min-fill order (MAP-constrained where needed).
double probability_of_evidence(const BayesianNetwork& net, const Instantiation& e,
                               const EliminationOptions& options = {});
double log_probability_of_evidence(const BayesianNetwork& net, const Instantiation& e,
                                   const EliminationOptions& options = {});
EliminationResult most_probable_explanation(const BayesianNetwork& net, const Instantiation& e,
                                            const EliminationOptions& options = {});
EliminationResult exact_map(const BayesianNetwork& net, const Instantiation& e, std::span<const VarId> map_vars,
                            const EliminationOptions& options = {});

/// min / max / mean / weighted mean log2((1/n) sum 2^w) of a width sample.
struct WidthStats {
  double min = 0, max = 0, mean = 0, weighted_mean = 0;
};
WidthStats summarize_widths(std::span<const double> widths);

/// Constrained min-fill width for each q-set in turn (q_schedule[i] is the
/// MAP set of step i).
std::vector<WidthReport> width_profile(const BayesianNetwork& net,
                                       std::span<const std::vector<VarId>> q_schedule);

/// Growing MAP sets: the first k variables of a seeded random permutation,
/// for k = 0, step, 2*step, ..., n (n always included).
std::vector<std::vector<VarId>> growing_q_schedule(std::size_t n, std::size_t step, Rng& rng);

}  // namespace bnmap
