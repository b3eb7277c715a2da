#include "irid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "irid/error.hpp"

namespace irid {
namespace {

constexpr double kTremble = 1e-3;

bool ties(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(scale)); }

bool better(double a, double b, Objective objective) { return objective == Objective::maximize ? a > b : a < b; }

std::vector<VarId> non_value_nodes(const IridModel& model) {
  std::vector<VarId> out;
  for (VarId v = 0; v < model.node_count(); ++v) {
    if (v != model.value_node()) out.push_back(v);
  }
  return out;
}

void check_budget(std::size_t count, std::size_t cap, const std::string& what) {
  if (count > cap) {
    throw Error(ErrorCode::BudgetExceeded, what + " count " + (count == std::numeric_limits<std::size_t>::max()
                                                                    ? std::string("overflows")
                                                                    : std::to_string(count)) +
                                               " exceeds the budget of " + std::to_string(cap));
  }
}

/// Row-major rank of the parents' configuration.
std::size_t row_of(const IridModel& model, VarId decision, const Assignment& config) {
  std::size_t row = 0;
  for (VarId p : model.parents(decision)) row = row * model.card(p) + config[p];
  return row;
}

/// Joint configurations of positive chance weight, flattened: for each, the
/// weighted value and, per decision, the policy cell it passes through and
/// the alternative it takes there.
struct Support {
  std::size_t decisions = 0;
  std::vector<double> weighted_value;
  std::vector<std::size_t> cell;  // entries × decisions, flat cell index
  std::vector<std::size_t> alt;   // entries × decisions
};

}  // namespace

double exact_expectation(const IridModel& model, std::span<const Policy> policies, const EnumerationBudget& budget) {
  const BayesNetView view = fix_policies(model, policies);
  const std::vector<VarId> vars = non_value_nodes(model);
  const auto cards = model.cards_of(vars);
  check_budget(config_count(cards), budget.max_joint_configs, "joint configuration");

  Assignment config = model.empty_assignment();
  ConfigCounter counter(cards);
  double total = 0.0;
  do {
    for (std::size_t i = 0; i < vars.size(); ++i) config.set(vars[i], counter[i]);
    const double p = view.joint(config);
    if (p != 0.0) total += p * evaluate(view.value(), config);
  } while (counter.next());
  return total;
}

double exact_stage_expectation(const StageContext& ctx, const Assignment& fixed, const EnumerationBudget& budget) {
  std::vector<std::size_t> cards;
  for (VarId v : ctx.free_vars) cards.push_back(ctx.cards.at(v));
  check_budget(config_count(cards), budget.max_joint_configs, "stage configuration");

  Assignment state = fixed;
  ConfigCounter counter(cards);
  double normalizer = 0.0;
  double weighted = 0.0;
  do {
    for (std::size_t i = 0; i < ctx.free_vars.size(); ++i) state.set(ctx.free_vars[i], counter[i]);
    double w = 1.0;
    for (const StageFactor& f : ctx.factors) {
      w *= evaluate(f.table, state);
      if (w == 0.0) break;
    }
    if (w == 0.0) continue;
    normalizer += w;
    weighted += w * evaluate(ctx.value, state);
  } while (counter.next());
  if (!(normalizer > 0.0)) {
    throw Error(ErrorCode::ZeroNormalizer, "the fixed configuration has probability zero");
  }
  return weighted / normalizer;
}

PolicySearchResult exhaustive_policy_search(const IridModel& model, const EnumerationBudget& budget) {
  const auto& decisions = model.decisions();
  const std::size_t k = decisions.size();

  // Policy cells of every decision, flattened in decision order.
  std::vector<std::size_t> cell_offset(k + 1, 0);
  std::vector<std::vector<std::size_t>> options;  // admissible alternatives per cell
  for (std::size_t j = 0; j < k; ++j) {
    const VarId d = decisions[j];
    const auto& parents = model.parents(d);
    ConfigCounter counter(model.cards_of(parents));
    Assignment config = model.empty_assignment();
    do {
      for (std::size_t i = 0; i < parents.size(); ++i) config.set(parents[i], counter[i]);
      options.push_back(admissible(model, d, config));
    } while (counter.next());
    cell_offset[j + 1] = options.size();
  }
  std::vector<std::size_t> digit_cards;
  for (const auto& o : options) digit_cards.push_back(o.size());
  const std::size_t combinations = config_count(digit_cards);
  check_budget(combinations, budget.max_policy_combinations, "policy combination");

  const std::vector<VarId> vars = non_value_nodes(model);
  const auto cards = model.cards_of(vars);
  check_budget(config_count(cards), budget.max_joint_configs, "joint configuration");

  Support support;
  support.decisions = k;
  {
    Assignment config = model.empty_assignment();
    ConfigCounter counter(cards);
    do {
      for (std::size_t i = 0; i < vars.size(); ++i) config.set(vars[i], counter[i]);
      double w = 1.0;
      for (VarId v : model.chance_nodes()) {
        w *= evaluate(model.cpt(v).table, config);
        if (w == 0.0) break;
      }
      if (w == 0.0) continue;
      support.weighted_value.push_back(w * evaluate(model.value().table, config));
      for (std::size_t j = 0; j < k; ++j) {
        support.cell.push_back(cell_offset[j] + row_of(model, decisions[j], config));
        support.alt.push_back(config[decisions[j]]);
      }
    } while (counter.next());
  }

  std::vector<std::size_t> choice(options.size());
  auto load = [&](const ConfigCounter& counter) {
    for (std::size_t c = 0; c < options.size(); ++c) choice[c] = options[c][counter[c]];
  };
  auto value_of = [&]() {
    double total = 0.0;
    for (std::size_t e = 0; e < support.weighted_value.size(); ++e) {
      bool taken = true;
      for (std::size_t j = 0; j < k && taken; ++j) taken = choice[support.cell[e * k + j]] == support.alt[e * k + j];
      if (taken) total += support.weighted_value[e];
    }
    return total;
  };
  auto trembled_value_of = [&]() {
    double total = 0.0;
    for (std::size_t e = 0; e < support.weighted_value.size(); ++e) {
      double p = 1.0;
      for (std::size_t j = 0; j < k && p != 0.0; ++j) {
        const std::size_t c = support.cell[e * k + j];
        const std::size_t a = support.alt[e * k + j];
        const auto& o = options[c];
        if (o.size() == 1) {
          p *= choice[c] == a ? 1.0 : 0.0;
        } else if (choice[c] == a) {
          p *= 1.0 - kTremble;
        } else if (std::find(o.begin(), o.end(), a) != o.end()) {
          p *= kTremble / static_cast<double>(o.size() - 1);
        } else {
          p = 0.0;
        }
      }
      total += p * support.weighted_value[e];
    }
    return total;
  };

  // Pass 1: the optimal expected value.
  double best = 0.0;
  {
    ConfigCounter counter(digit_cards);
    bool first = true;
    do {
      load(counter);
      const double v = value_of();
      if (first || better(v, best, model.objective())) best = v;
      first = false;
    } while (counter.next());
  }

  // Pass 2: among the optimal combinations, the best under trembles.
  std::vector<std::size_t> best_choice;
  double best_trembled = 0.0;
  {
    ConfigCounter counter(digit_cards);
    do {
      load(counter);
      if (!ties(value_of(), best, best)) continue;
      const double t = trembled_value_of();
      if (best_choice.empty() ||
          (!ties(t, best_trembled, best_trembled * 1e-3) && better(t, best_trembled, model.objective()))) {
        best_choice = choice;
        best_trembled = t;
      }
    } while (counter.next());
  }

  PolicySearchResult result;
  result.expected_value = best;
  result.combinations = combinations;
  for (std::size_t j = 0; j < k; ++j) {
    Policy policy;
    policy.decision = model.name(decisions[j]);
    for (VarId p : model.parents(decisions[j])) policy.scope.push_back(model.name(p));
    policy.choice.assign(best_choice.begin() + static_cast<std::ptrdiff_t>(cell_offset[j]),
                         best_choice.begin() + static_cast<std::ptrdiff_t>(cell_offset[j + 1]));
    result.policies.push_back(std::move(policy));
  }
  return result;
}

}  // namespace irid
