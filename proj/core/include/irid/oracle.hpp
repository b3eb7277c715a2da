#ifndef IRID_ORACLE_HPP
#define IRID_ORACLE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "irid/graph_ops.hpp"
#include "irid/model.hpp"

namespace irid {

/// Hard caps for brute-force enumeration. Exceeding one is an error, never a
/// silent truncation.
struct EnumerationBudget {
  std::size_t max_joint_configs = 10'000'000;
  std::size_t max_policy_combinations = 1'000'000;

  bool operator==(const EnumerationBudget&) const = default;
};

/// E[V] under the Bayesian network obtained by fixing one policy per
/// decision, by summing over every joint configuration. Throws
/// BudgetExceeded, MissingPolicy and policy validation errors.
double exact_expectation(const IridModel& model, std::span<const Policy> policies,
                         const EnumerationBudget& budget = {});

/// Exact counterpart of estimate_expectation: the stage factors are
/// normalized over the free variables given `fixed`, and the value factor is
/// averaged under those weights. Throws BudgetExceeded, ZeroNormalizer.
double exact_stage_expectation(const StageContext& ctx, const Assignment& fixed,
                               const EnumerationBudget& budget = {});

struct PolicySearchResult {
  /// One policy per decision, in decision order.
  std::vector<Policy> policies;
  double expected_value = 0.0;
  std::size_t combinations = 0;
};

/// Enumerates every constraint-respecting deterministic policy combination
/// and returns the best for the model's objective.
///
/// Combinations that tie on expected value within 1e-9 (relative) are
/// separated by their value under a small uniform tremble of every cell,
/// which prefers choices that are also optimal in cells reached with
/// probability zero; any remaining tie goes to the first combination in
/// enumeration order. Throws BudgetExceeded.
PolicySearchResult exhaustive_policy_search(const IridModel& model, const EnumerationBudget& budget = {});

}  // namespace irid

#endif  // IRID_ORACLE_HPP
