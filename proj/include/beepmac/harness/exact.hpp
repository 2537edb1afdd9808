#pragma once

#include <beepmac/harness/trial.hpp>
#include <beepmac/probability.hpp>

#include <array>
#include <cstdint>
#include <map>

namespace beepmac {

struct ExactResult {
  Rational failure_probability{0};
  /// Failure mass split by OutcomeKind (the Success entry stays 0).
  std::array<Rational, 5> by_kind{};
  /// Total probability of all explored executions; 1 by construction.
  Rational total_mass{0};
  /// Largest number of fault-relevant rounds along any execution.
  int branch_count = 0;
  /// Number of distinct executions (paths through the fault tree).
  std::uint64_t leaves = 0;
  /// Distinct branching states evaluated (memoised subtrees count once).
  std::uint64_t states = 0;
};

namespace detail {

class ExactExplorer {
 public:
  ExactExplorer(const Params& params, const InputAssignment& inputs, GlobalRound horizon, int budget)
      : p_(params.p.exact()), q_(1 - params.p.exact()), inputs_(&inputs), horizon_(horizon), budget_(budget) {}

  struct Node {
    std::array<Rational, 5> fail{};
    Rational mass{0};
    int depth = 0;
    std::uint64_t leaves = 0;
  };

  /// Runs `net` forward until the next fault-relevant round, branches there
  /// on both fault values, and folds the weighted subtrees.
  Node explore(Network net, int depth) {
    while (net.round() < horizon_ && !net.all_done()) {
      Network::Plan plan = net.plan();
      if (!fault_relevant(plan.slots)) {
        // Either fault value yields the same state.
        net.commit(std::move(plan), false);
        continue;
      }
      if (auto it = memo_.find(net); it != memo_.end()) {
        if (depth + it->second.depth > budget_) throw BranchBudgetExceeded(depth + it->second.depth, budget_);
        return it->second;
      }
      if (depth + 1 > budget_) throw BranchBudgetExceeded(depth + 1, budget_);
      Network faulty = net;
      Network key = net;
      faulty.commit(plan, true);
      net.commit(std::move(plan), false);
      const Node a = explore(std::move(faulty), depth + 1);
      const Node b = explore(std::move(net), depth + 1);
      Node n;
      for (std::size_t k = 0; k < n.fail.size(); ++k) n.fail[k] = p_ * a.fail[k] + q_ * b.fail[k];
      n.mass = p_ * a.mass + q_ * b.mass;
      n.depth = 1 + std::max(a.depth, b.depth);
      n.leaves = a.leaves + b.leaves;
      return memo_.emplace(std::move(key), std::move(n)).first->second;
    }
    Node leaf;
    std::vector<std::optional<Output>> outputs;
    for (const auto& proc : net.processors()) outputs.push_back(proc.summary.output);
    const OutcomeKind kind = classify(outputs, *inputs_).kind;
    if (kind != OutcomeKind::Success) leaf.fail[static_cast<std::size_t>(kind)] = 1;
    leaf.mass = 1;
    leaf.leaves = 1;
    return leaf;
  }

  std::uint64_t states() const noexcept { return memo_.size(); }

 private:
  Rational p_;
  Rational q_;
  const InputAssignment* inputs_;
  GlobalRound horizon_;
  int budget_;
  std::map<Network, Node> memo_;
};

}  // namespace detail

inline constexpr int default_branch_budget = 30;

/// Exact failure probability by exhaustive branching over the fault bits of
/// fault-relevant rounds, weighting each faulty branch by p and each clean
/// one by 1-p. Identical sub-states are evaluated once.
inline ExactResult exact_failure_probability(const Params& params, const WakeupSchedule& schedule,
                                             const InputAssignment& inputs, GlobalRound horizon,
                                             int branch_budget = default_branch_budget) {
  detail::check_horizon(params, inputs, horizon);
  detail::ExactExplorer explorer(params, inputs, horizon, branch_budget);
  const auto root = explorer.explore(Network(params, schedule, inputs), 0);
  ExactResult out;
  out.by_kind = root.fail;
  for (const auto& f : root.fail) out.failure_probability += f;
  out.total_mass = root.mass;
  out.branch_count = root.depth;
  out.leaves = root.leaves;
  out.states = explorer.states();
  return out;
}

}  // namespace beepmac
