#ifndef IRID_TESTS_RANDOM_MODELS_HPP
#define IRID_TESTS_RANDOM_MODELS_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "irid/model.hpp"
#include "irid/oracle.hpp"

namespace irid::testing {

struct RandomModelShape {
  std::size_t max_decisions = 2;
  std::size_t max_chance = 5;
  /// Probability of each forward arrow.
  double density = 0.35;
  /// Probability that a CPT entry is forced to zero.
  double zero_rate = 0.15;
  /// Keeps the oracle tractable: shapes over budget are redrawn.
  std::size_t max_policy_combinations = 200'000;
};

/// Random valid model: binary variables, decisions chained in order with
/// no-forgetting closure, constraint scope = relevance parents with random
/// nonempty admissible sets, CPT rows with occasional zeros.
inline ModelSpec random_model_spec(std::mt19937_64& rng, const RandomModelShape& shape = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto coin = [&](double p) { return unit(rng) < p; };
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

  for (;;) {
    const std::size_t k = pick(1, shape.max_decisions);
    const std::size_t m = pick(1, shape.max_chance);

    // Order: decisions keep their relative order, chance nodes are interleaved.
    std::vector<std::string> order;
    for (std::size_t i = 0; i < m; ++i) order.push_back("X" + std::to_string(i));
    for (std::size_t i = 0; i < k; ++i) order.push_back("D" + std::to_string(i + 1));
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::string> decisions;
    for (const auto& n : order) {
      if (n[0] == 'D') decisions.push_back(n);
    }
    std::sort(decisions.begin(), decisions.end());
    std::size_t next_decision = 0;
    for (auto& n : order) {
      if (n[0] == 'D') n = decisions[next_decision++];
    }

    ModelSpec spec;
    for (const auto& n : order) {
      spec.nodes.push_back({n, n[0] == 'D' ? NodeKind::decision : NodeKind::chance, Frame({"a", "b"})});
    }
    spec.nodes.push_back({"V", NodeKind::value, Frame()});

    auto index = [&](const std::string& n) {
      return static_cast<std::size_t>(std::find(order.begin(), order.end(), n) - order.begin());
    };
    std::vector<std::vector<std::string>> parents(order.size());
    std::vector<std::vector<bool>> relevance(order.size());
    auto add = [&](std::size_t from, std::size_t to, bool rel) {
      if (std::find(parents[to].begin(), parents[to].end(), order[from]) != parents[to].end()) return;
      parents[to].push_back(order[from]);
      relevance[to].push_back(rel);
    };
    for (std::size_t to = 0; to < order.size(); ++to) {
      for (std::size_t from = 0; from < to; ++from) {
        if (coin(shape.density)) add(from, to, order[to][0] == 'X' || coin(0.5));
      }
    }
    for (std::size_t i = 0; i + 1 < decisions.size(); ++i) add(index(decisions[i]), index(decisions[i + 1]), coin(0.5));
    for (std::size_t i = 0; i < decisions.size(); ++i) {
      for (std::size_t j = i + 1; j < decisions.size(); ++j) {
        const auto earlier = parents[index(decisions[i])];
        for (const auto& p : earlier) add(index(p), index(decisions[j]), coin(0.5));
      }
    }

    std::size_t combinations = 1;
    bool too_big = false;
    for (const auto& d : decisions) {
      const std::size_t cells = std::size_t{1} << parents[index(d)].size();
      for (std::size_t c = 0; c < cells && !too_big; ++c) {
        combinations *= 2;
        too_big = combinations > shape.max_policy_combinations;
      }
    }
    if (too_big) continue;

    for (std::size_t to = 0; to < order.size(); ++to) {
      for (std::size_t i = 0; i < parents[to].size(); ++i) {
        spec.arrows.push_back({parents[to][i], order[to], relevance[to][i] ? ArrowKind::relevance : ArrowKind::informational});
      }
    }
    // Value parents: a random nonempty subset, always including the last decision half of the time.
    std::vector<std::string> value_parents;
    for (const auto& n : order) {
      if (coin(0.45)) value_parents.push_back(n);
    }
    if (value_parents.empty() || coin(0.5)) {
      if (std::find(value_parents.begin(), value_parents.end(), decisions.back()) == value_parents.end()) {
        value_parents.push_back(decisions.back());
      }
    }
    std::sort(value_parents.begin(), value_parents.end(),
              [&](const std::string& a, const std::string& b) { return index(a) < index(b); });
    for (const auto& p : value_parents) spec.arrows.push_back({p, "V", ArrowKind::relevance});

    auto configs = [](std::size_t n) {
      std::vector<std::vector<std::string>> out;
      for (std::size_t r = 0; r < (std::size_t{1} << n); ++r) {
        std::vector<std::string> row;
        for (std::size_t i = 0; i < n; ++i) row.push_back(((r >> (n - 1 - i)) & 1) ? "b" : "a");
        out.push_back(row);
      }
      return out;
    };

    for (std::size_t v = 0; v < order.size(); ++v) {
      if (order[v][0] == 'X') {
        CptSpec cpt{order[v], parents[v], {}};
        for (auto& given : configs(parents[v].size())) {
          double w0 = unit(rng) + 0.05;
          double w1 = unit(rng) + 0.05;
          if (coin(shape.zero_rate)) (coin(0.5) ? w0 : w1) = 0.0;
          cpt.rows.push_back({given, {w0 / (w0 + w1), w1 / (w0 + w1)}});
        }
        spec.cpts.push_back(std::move(cpt));
      } else {
        ConstraintSpec c{order[v], {}, {}};
        for (std::size_t i = 0; i < parents[v].size(); ++i) {
          if (relevance[v][i]) c.scope.push_back(parents[v][i]);
        }
        for (auto& given : configs(c.scope.size())) {
          const std::size_t kind = pick(0, 3);
          std::vector<std::string> allow = kind == 0 ? std::vector<std::string>{"a"}
                                           : kind == 1 ? std::vector<std::string>{"b"}
                                                       : std::vector<std::string>{"a", "b"};
          c.cells.push_back({given, allow});
        }
        spec.constraints.push_back(std::move(c));
      }
    }

    spec.value.parents = value_parents;
    std::uniform_int_distribution<int> payoff(-100, 100);
    for (auto& given : configs(value_parents.size())) spec.value.cells.push_back({given, double(payoff(rng))});
    spec.objective = coin(0.2) ? Objective::minimize : Objective::maximize;
    return spec;
  }
}

inline IridModel random_model(std::mt19937_64& rng, const RandomModelShape& shape = {}) {
  return build_model(random_model_spec(rng, shape));
}

/// Uniformly random admissible policy for every decision.
inline std::vector<Policy> random_policies(const IridModel& model, std::mt19937_64& rng) {
  std::vector<Policy> out;
  for (VarId d : model.decisions()) {
    out.push_back(make_policy(model, d, [&](const Assignment& config) {
      const auto allowed = admissible(model, d, config);
      return allowed[std::uniform_int_distribution<std::size_t>(0, allowed.size() - 1)(rng)];
    }));
  }
  return out;
}

}  // namespace irid::testing

#endif  // IRID_TESTS_RANDOM_MODELS_HPP
