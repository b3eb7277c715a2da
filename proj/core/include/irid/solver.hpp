#ifndef IRID_SOLVER_HPP
#define IRID_SOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irid/gibbs.hpp"
#include "irid/graph_ops.hpp"
#include "irid/model.hpp"
#include "irid/oracle.hpp"

namespace irid {

enum class Backend { exact, gibbs };

std::string_view to_string(Backend backend);

struct SolveOptions {
  Backend backend = Backend::exact;
  /// Used by the gibbs backend only.
  SamplerConfig sampler;
  std::optional<Objective> objective_override;
  /// Every alternative of a cell reuses the cell's random stream.
  bool common_random_numbers = false;
  /// Used by the exact backend only.
  EnumerationBudget budget;
};

/// E[V | cell, Δ = alternative] as computed by the backend. std_error is 0
/// for the exact backend.
struct AlternativeEvaluation {
  std::size_t alternative = 0;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

struct CellDiagnostics {
  std::size_t stage = 0;
  std::string decision;
  std::vector<std::string> dependency_vars;
  std::vector<std::string> dependency_labels;
  /// Empty when the cell is forced or has zero probability.
  std::vector<AlternativeEvaluation> evaluations;
  std::size_t chosen = 0;
  /// Only one admissible alternative; nothing was evaluated.
  bool forced = false;
  /// The cell's configuration cannot occur; the first admissible
  /// alternative is recorded.
  bool zero_probability = false;
};

struct Solution {
  /// One policy per decision of the input model, in decision order.
  std::vector<Policy> policies;
  double expected_value = 0.0;
  /// Terminal stage estimate (std_error 0 for the exact backend).
  Estimate terminal;
  std::vector<CellDiagnostics> diagnostics;
  Backend backend = Backend::exact;
  SamplerConfig sampler;
  bool common_random_numbers = false;
  Objective objective = Objective::maximize;
};

struct CellResult {
  std::size_t alternative = 0;
  double value = 0.0;
  std::vector<AlternativeEvaluation> evaluations;
  bool forced = false;
  bool zero_probability = false;
};

/// Best admissible alternative of one cell. `fixed` assigns the dependency
/// set; `cell_seed` seeds the gibbs backend. Strict improvement is required
/// to displace an earlier alternative, so ties go to frame order.
CellResult optimize_cell(const StageContext& ctx, const Assignment& fixed, const std::vector<std::size_t>& admissible,
                         const SolveOptions& options, Objective objective, std::uint64_t cell_seed);

/// Expected value of a model with every decision absorbed. Throws
/// InvalidArgument if a decision remains.
Estimate terminal_expected_value(const IridModel& absorbed, const SolveOptions& options);

/// Backward dynamic programming over the stages of `model`.
Solution solve(const IridModel& model, const SolveOptions& options = {});

}  // namespace irid

#endif  // IRID_SOLVER_HPP
