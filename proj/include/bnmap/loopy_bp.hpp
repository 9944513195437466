#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bnmap/local_search.hpp"
#include "bnmap/network.hpp"

namespace bnmap {

struct BpConfig {
  double tolerance = 1e-8;
  int max_sweeps = 100;
  /// Visiting order; empty means the network's topological order. Each sweep
  /// visits it backwards, then forwards.
  std::vector<VarId> order;
};

/// Pearl's message passing state. For variable X, `pi[X][i]` is the message
/// from its i-th parent (over that parent's states) and `lambda[X][j]` the
/// message from its j-th child (over X's states). Messages are normalized.
struct MessageStore {
  const BayesianNetwork* net = nullptr;
  Instantiation evidence;
  std::vector<std::vector<std::vector<double>>> pi;
  std::vector<std::vector<std::vector<double>>> lambda;
  int sweeps = 0;
  bool converged = false;
  double residual = 0.0;
  std::size_t zero_messages = 0;  // all-zero messages replaced by uniform ones
};

/// Runs two-phase sweeps from all-ones messages until the max-norm change of
/// a sweep drops below the tolerance or the sweep cap is hit.
MessageStore bp_run(const BayesianNetwork& net, const Instantiation& e, const BpConfig& config = {});

/// Approximate Pr(X | e). Throws ValidationError on an all-zero belief.
std::vector<double> bp_marginal(const MessageStore& store, VarId x);
/// Same product without X's own evidence: approximates Pr(X | e - X).
std::vector<double> bp_retracted_marginal(const MessageStore& store, VarId x);

/// Ratios r(X, x) = retracted(x) / retracted(s_X) with evidence e and s
/// entered, approximating Pr(x, s - X, e) / Pr(s, e).
struct NeighborRatios {
  std::vector<VarId> vars;
  std::vector<std::vector<double>> ratio;  // +infinity where retracted(s_X) = 0
  std::vector<bool> infinite;              // per var: retracted(s_X) = 0
  bool converged = false;
  int sweeps = 0;
};

NeighborRatios bp_neighbor_ratios(const BayesianNetwork& net, const Instantiation& e, const Instantiation& s,
                                  std::span<const VarId> map_vars, const BpConfig& config = {});

/// Relative scorer backed by loopy BP. A variable whose current state BP
/// judges impossible gets a flagged row of zero log-ratios.
class BpScorer : public Scorer {
 public:
  BpScorer(const BayesianNetwork& net, Instantiation e, std::vector<VarId> map_vars, BpConfig config = {});

  const BayesianNetwork& network() const override { return net_; }
  const Instantiation& evidence() const override { return e_; }
  const std::vector<VarId>& map_vars() const override { return map_vars_; }
  bool relative() const override { return true; }
  Evaluation evaluate(const Instantiation& s) override;
  std::vector<std::vector<double>> log_conditionals(const Instantiation& y, std::span<const VarId> vars) override;
  std::optional<double> exact_log_score(const Instantiation&) override { return std::nullopt; }

  int runs() const { return runs_; }
  int unconverged_runs() const { return unconverged_; }

 private:
  const BayesianNetwork& net_;
  Instantiation e_;
  std::vector<VarId> map_vars_;
  BpConfig config_;
  int runs_ = 0;
  int unconverged_ = 0;
};

/// (exact, approximate) retracted probabilities for every state of every
/// variable under evidence e. Exact values come from one jointree pass.
std::vector<std::pair<double, double>> retracted_scatter(const BayesianNetwork& net, const Instantiation& e,
                                                         const BpConfig& config = {});
/// Two whitespace-separated columns, one pair per line.
void write_scatter(std::ostream& out, std::span<const std::pair<double, double>> points);

}  // namespace bnmap
