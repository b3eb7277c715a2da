#include "irid/solver.hpp"

#include <algorithm>
#include <map>

#include "irid/error.hpp"

namespace irid {
namespace {

bool improves(double candidate, double incumbent, Objective objective) {
  return objective == Objective::maximize ? candidate > incumbent : candidate < incumbent;
}

bool is_zero_probability(const Error& e) {
  return e.code() == ErrorCode::ZeroNormalizer || e.code() == ErrorCode::NoPositiveState;
}

AlternativeEvaluation evaluate_alternative(const StageContext& ctx, const Assignment& fixed, std::size_t alternative,
                                           const SolveOptions& options, std::uint64_t seed) {
  AlternativeEvaluation out;
  out.alternative = alternative;
  if (options.backend == Backend::exact) {
    out.value = exact_stage_expectation(ctx, fixed, options.budget);
    return out;
  }
  SamplerConfig sampler = options.sampler;
  sampler.seed = seed;
  const Estimate e = estimate_expectation(ctx, fixed, ctx.value, sampler);
  out.value = e.mean;
  out.std_error = e.std_error;
  out.n = e.n;
  return out;
}

}  // namespace

std::string_view to_string(Backend backend) { return backend == Backend::exact ? "exact" : "gibbs"; }

CellResult optimize_cell(const StageContext& ctx, const Assignment& fixed, const std::vector<std::size_t>& admissible,
                         const SolveOptions& options, Objective objective, std::uint64_t cell_seed) {
  if (!ctx.decision) throw Error(ErrorCode::InvalidArgument, "the terminal stage has no decision to optimize");
  if (admissible.empty()) throw Error(ErrorCode::EmptyConstraintCell, "no admissible alternative");
  CellResult result;
  result.alternative = admissible.front();
  if (admissible.size() == 1) {
    result.forced = true;
    return result;
  }
  Assignment config = fixed;
  for (std::size_t i = 0; i < admissible.size(); ++i) {
    const std::size_t alt = admissible[i];
    config.set(*ctx.decision, alt);
    const std::uint64_t seed = options.common_random_numbers ? cell_seed : derive_seed(cell_seed, {alt});
    AlternativeEvaluation eval;
    try {
      eval = evaluate_alternative(ctx, config, alt, options, seed);
    } catch (const Error& e) {
      if (!is_zero_probability(e)) throw;
      // The conditioning event does not involve the alternative, so one
      // impossible alternative means they all are.
      result.alternative = admissible.front();
      result.value = 0.0;
      result.evaluations.clear();
      result.zero_probability = true;
      return result;
    }
    if (i == 0 || improves(eval.value, result.value, objective)) {
      result.alternative = alt;
      result.value = eval.value;
    }
    result.evaluations.push_back(eval);
  }
  return result;
}

Estimate terminal_expected_value(const IridModel& absorbed, const SolveOptions& options) {
  if (!absorbed.decisions().empty()) {
    throw Error(ErrorCode::InvalidArgument, "decision '" + absorbed.name(absorbed.decisions().front()) +
                                                "' has not been absorbed");
  }
  const StageContext ctx = build_last_stage_context(absorbed);
  if (options.backend == Backend::exact) {
    Estimate out;
    out.mean = exact_stage_expectation(ctx, absorbed.empty_assignment(), options.budget);
    out.n = 1;
    return out;
  }
  // With nothing fixed, independent ancestral draws replace the chain.
  SamplerConfig sampler = options.sampler;
  sampler.seed = derive_seed(options.sampler.seed, {0});
  return estimate_by_forward_sampling(ctx, ctx.value, sampler);
}

Solution solve(const IridModel& original, const SolveOptions& options) {
  if (options.backend == Backend::gibbs) options.sampler.validate();
  Solution solution;
  solution.backend = options.backend;
  solution.sampler = options.sampler;
  solution.common_random_numbers = options.common_random_numbers;
  solution.objective = options.objective_override.value_or(original.objective());

  std::map<std::string, Policy> solved;
  IridModel model = remove_barren(original);
  for (VarId d : original.decisions()) {
    if (!model.find(original.name(d))) solved.emplace(original.name(d), first_admissible_policy(original, d));
  }

  std::vector<CellDiagnostics> diagnostics;
  while (!model.decisions().empty()) {
    const StagePartition partition = compute_partition(model);
    const MoralGraph moral = moralize(relevance_subgraph(model));
    const StageContext ctx = build_stage_context(model, partition, moral, partition.stage_count());
    const VarId decision = *ctx.decision;
    const std::vector<VarId> dependency(ctx.dependency_set.begin(), ctx.dependency_set.end());
    const auto& parents = model.parents(decision);
    for (VarId v : dependency) {
      if (std::find(parents.begin(), parents.end(), v) == parents.end()) {
        throw Error(ErrorCode::InvalidArgument, "decision '" + model.name(decision) + "' depends on '" +
                                                    model.name(v) + "', which it does not observe");
      }
    }

    const Constraint& constraint = model.constraint(decision);
    std::vector<std::size_t> best;
    std::vector<CellDiagnostics> stage_cells;
    ConfigCounter counter(model.cards_of(dependency));
    Assignment fixed = model.empty_assignment();
    do {
      for (std::size_t i = 0; i < dependency.size(); ++i) fixed.set(dependency[i], counter[i]);
      const auto allowed = constraint.admissible(constraint.row_of(fixed));
      const std::uint64_t cell_seed = derive_seed(options.sampler.seed, {ctx.stage, counter.rank()});
      CellResult cell;
      try {
        cell = optimize_cell(ctx, fixed, allowed, options, solution.objective, cell_seed);
      } catch (const Error& e) {
        throw Error(e.code(), "decision " + model.name(decision) + " at " + describe(model, dependency, fixed) +
                                  ": " + e.what());
      }
      best.push_back(cell.alternative);

      CellDiagnostics diag;
      diag.stage = ctx.stage;
      diag.decision = model.name(decision);
      for (VarId v : dependency) {
        diag.dependency_vars.push_back(model.name(v));
        diag.dependency_labels.push_back(model.frame(v).label(fixed[v]));
      }
      diag.evaluations = std::move(cell.evaluations);
      diag.chosen = cell.alternative;
      diag.forced = cell.forced;
      diag.zero_probability = cell.zero_probability;
      stage_cells.push_back(std::move(diag));
    } while (counter.next());

    // Replicate the cell choices across parents outside the dependency set.
    Policy policy = make_policy(model, decision, [&](const Assignment& config) {
      std::size_t rank = 0;
      for (VarId v : dependency) rank = rank * model.card(v) + config[v];
      return best[rank];
    });
    solved.emplace(policy.decision, policy);
    diagnostics.insert(diagnostics.begin(), stage_cells.begin(), stage_cells.end());
    model = absorb_decision(model, decision, policy);
  }

  solution.terminal = terminal_expected_value(model, options);
  solution.expected_value = solution.terminal.mean;
  for (VarId d : original.decisions()) {
    Policy& p = solved.at(original.name(d));
    validate_policy(original, p);
    solution.policies.push_back(std::move(p));
  }
  solution.diagnostics = std::move(diagnostics);
  return solution;
}

}  // namespace irid
