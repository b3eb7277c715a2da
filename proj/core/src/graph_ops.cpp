#include "irid/graph_ops.hpp"

#include <algorithm>
#include <deque>

#include "irid/error.hpp"

namespace irid {

std::optional<std::size_t> StagePartition::block_of(VarId var) const {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].count(var)) return i;
  }
  return std::nullopt;
}

std::vector<VarId> Digraph::parents(VarId var) const {
  std::vector<VarId> out;
  for (const auto& [from, to] : arcs) {
    if (to == var) out.push_back(from);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Digraph::has_arc(VarId from, VarId to) const {
  return std::find(arcs.begin(), arcs.end(), std::make_pair(from, to)) != arcs.end();
}

void MoralGraph::add_edge(VarId a, VarId b) {
  if (a == b) return;
  adjacency_.at(a).insert(b);
  adjacency_.at(b).insert(a);
}

std::set<std::pair<VarId, VarId>> MoralGraph::edges() const {
  std::set<std::pair<VarId, VarId>> out;
  for (VarId a = 0; a < adjacency_.size(); ++a) {
    for (VarId b : adjacency_[a]) {
      if (a < b) out.emplace(a, b);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// Spec of `model` with the variables in `drop` removed, along with their
/// arrows, conditionals and constraints.
ModelSpec spec_without(const IridModel& model, const std::set<VarId>& drop) {
  ModelSpec full = model.to_spec();
  auto dropped = [&](const std::string& name) { return drop.count(model.id(name)) != 0; };
  ModelSpec out;
  out.objective = full.objective;
  out.value = std::move(full.value);
  for (auto& node : full.nodes) {
    if (!dropped(node.id)) out.nodes.push_back(std::move(node));
  }
  for (auto& arrow : full.arrows) {
    if (!dropped(arrow.from) && !dropped(arrow.to)) out.arrows.push_back(std::move(arrow));
  }
  for (auto& cpt : full.cpts) {
    if (!dropped(cpt.child)) out.cpts.push_back(std::move(cpt));
  }
  for (auto& constraint : full.constraints) {
    if (!dropped(constraint.decision)) out.constraints.push_back(std::move(constraint));
  }
  return out;
}

std::vector<std::string> labels_at(const IridModel& model, const std::vector<VarId>& vars, const Assignment& config) {
  std::vector<std::string> out;
  for (VarId v : vars) out.push_back(model.frame(v).label(config[v]));
  return out;
}

}  // namespace

IridModel remove_barren(const IridModel& model) {
  std::set<VarId> removed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (VarId v = 0; v < model.node_count(); ++v) {
      if (v == model.value_node() || removed.count(v)) continue;
      const auto& children = model.children(v);
      const bool barren =
          std::all_of(children.begin(), children.end(), [&](VarId c) { return removed.count(c) != 0; });
      if (barren) {
        removed.insert(v);
        changed = true;
      }
    }
  }
  if (removed.empty()) return model;
  return build_model(spec_without(model, removed));
}

StagePartition compute_partition(const IridModel& model) {
  const auto& decisions = model.decisions();
  const std::size_t k = decisions.size();
  StagePartition partition;
  partition.blocks.assign(k + 1, {});
  partition.decision_of_block.assign(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) {
    partition.blocks[i + 1].insert(decisions[i]);
    partition.decision_of_block[i + 1] = decisions[i];
  }
  for (VarId x : model.chance_nodes()) {
    std::size_t block = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (model.arrow_kind(x, decisions[i])) {
        block = i;  // first observed by decision i+1
        break;
      }
    }
    partition.blocks[block].insert(x);
  }
  return partition;
}

Digraph relevance_subgraph(const IridModel& model) {
  Digraph graph;
  graph.vertex_count = model.node_count();
  for (const Arrow& arrow : model.arrows()) {
    if (arrow.kind == ArrowKind::relevance) graph.arcs.emplace_back(arrow.from, arrow.to);
  }
  return graph;
}

MoralGraph moralize(const Digraph& graph) {
  MoralGraph moral(graph.vertex_count);
  std::vector<std::vector<VarId>> parents(graph.vertex_count);
  for (const auto& [from, to] : graph.arcs) {
    moral.add_edge(from, to);
    parents.at(to).push_back(from);
  }
  for (const auto& group : parents) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) moral.add_edge(group[i], group[j]);
    }
  }
  return moral;
}

StageContext build_stage_context(const IridModel& model, const StagePartition& partition, const MoralGraph& moral,
                                 std::size_t stage) {
  if (partition.blocks.empty() || stage != partition.stage_count()) {
    throw Error(ErrorCode::StageOutOfRange,
                "stage " + std::to_string(stage) + " is not the last unsolved stage (" +
                    std::to_string(partition.stage_count()) + ")");
  }
  if (moral.vertex_count() != model.node_count()) {
    throw Error(ErrorCode::InvalidArgument, "moral graph does not belong to this model");
  }
  StageContext ctx;
  ctx.stage = stage;
  if (stage > 0) ctx.decision = partition.decision_of_block[stage];
  const std::set<VarId>& block = partition.blocks[stage];
  const VarId value = model.value_node();

  // Members of the block connected to V through the block.
  std::vector<bool> seen(model.node_count(), false);
  std::deque<VarId> queue{value};
  seen[value] = true;
  while (!queue.empty()) {
    VarId v = queue.front();
    queue.pop_front();
    for (VarId u : moral.neighbors(v)) {
      if (!seen[u] && block.count(u)) {
        seen[u] = true;
        ctx.gamma_prime.insert(u);
        queue.push_back(u);
      }
    }
  }
  for (VarId g : ctx.gamma_prime) {
    for (VarId u : moral.neighbors(g)) {
      if (u != value && !ctx.gamma_prime.count(u)) ctx.dependency_set.insert(u);
    }
  }

  auto touches = [&](VarId child, const std::vector<VarId>& parents) {
    if (ctx.gamma_prime.count(child)) return true;
    return std::any_of(parents.begin(), parents.end(), [&](VarId p) { return ctx.gamma_prime.count(p) != 0; });
  };
  for (VarId v = 0; v < model.node_count(); ++v) {
    if (model.kind(v) == NodeKind::chance) {
      const Cpt& cpt = model.cpt(v);
      if (touches(v, cpt.parents)) ctx.factors.push_back({StageFactorKind::cpt, v, cpt.parents, cpt.table});
    } else if (model.kind(v) == NodeKind::decision) {
      const Constraint& c = model.constraint(v);
      if (touches(v, c.scope())) {
        ctx.factors.push_back({StageFactorKind::decision_placeholder, v, c.scope(), c.indicator()});
      }
    }
  }
  ctx.value = model.value().table;

  for (VarId g : ctx.gamma_prime) {
    if (g != ctx.decision) ctx.free_vars.push_back(g);
  }
  for (VarId v : model.topological_order()) {
    if (ctx.gamma_prime.count(v) && v != ctx.decision) ctx.free_topological.push_back(v);
  }
  ctx.cards.resize(model.node_count());
  for (VarId v = 0; v < model.node_count(); ++v) ctx.cards[v] = model.card(v);
  return ctx;
}

StageContext build_last_stage_context(const IridModel& model) {
  const StagePartition partition = compute_partition(model);
  const MoralGraph moral = moralize(relevance_subgraph(model));
  return build_stage_context(model, partition, moral, partition.stage_count());
}

IridModel absorb_decision(const IridModel& model, VarId decision, const Policy& policy) {
  if (decision >= model.node_count() || model.kind(decision) != NodeKind::decision) {
    throw Error(ErrorCode::UnknownDecision, "absorb target is not a decision");
  }
  if (policy.decision != model.name(decision)) {
    throw Error(ErrorCode::IncompletePolicy, "policy is for '" + policy.decision + "', not '" + model.name(decision) + "'");
  }
  std::vector<VarId> scope;
  for (const auto& s : policy.scope) {
    auto v = model.find(s);
    if (!v) throw Error(ErrorCode::IncompletePolicy, "policy scope variable '" + s + "' is not in the model");
    scope.push_back(*v);
  }
  if (scope != model.parents(decision) || policy.choice.size() != config_count(model.cards_of(scope))) {
    throw Error(ErrorCode::IncompletePolicy, "policy does not cover every parent configuration of '" +
                                                 model.name(decision) + "'");
  }
  for (VarId c : model.children(decision)) {
    if (model.kind(c) == NodeKind::decision) {
      throw Error(ErrorCode::InvalidArgument, "only the last decision can be absorbed; '" + model.name(decision) +
                                                  "' precedes '" + model.name(c) + "'");
    }
  }

  // δ(config) as a frame index of the decision.
  std::vector<std::size_t> strides(scope.size(), 1);
  for (std::size_t i = scope.size(); i-- > 1;) strides[i - 1] = strides[i] * model.card(scope[i]);
  auto chosen = [&](const Assignment& config) {
    std::size_t row = 0;
    for (std::size_t i = 0; i < scope.size(); ++i) row += config[scope[i]] * strides[i];
    return policy.choice[row];
  };

  // Old parents minus the decision, then policy scope variables not yet present.
  auto rewired = [&](const std::vector<VarId>& parents) {
    std::vector<VarId> out;
    for (VarId p : parents) {
      if (p != decision) out.push_back(p);
    }
    for (VarId s : scope) {
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    return out;
  };

  ModelSpec spec = spec_without(model, {decision});
  for (VarId child : model.children(decision)) {
    for (VarId s : scope) {
      if (!model.arrow_kind(s, child)) spec.arrows.push_back({model.name(s), model.name(child), ArrowKind::relevance});
    }
  }

  for (VarId child : model.children(decision)) {
    if (model.kind(child) == NodeKind::value) continue;
    const Cpt& cpt = model.cpt(child);
    const std::vector<VarId> parents = rewired(cpt.parents);
    CptSpec out{model.name(child), {}, {}};
    for (VarId p : parents) out.parents.push_back(model.name(p));
    Assignment config = model.empty_assignment();
    ConfigCounter counter(model.cards_of(parents));
    do {
      for (std::size_t i = 0; i < parents.size(); ++i) config.set(parents[i], counter[i]);
      config.set(decision, chosen(config));
      CptRow row{labels_at(model, parents, config), {}};
      for (std::size_t x = 0; x < model.card(child); ++x) {
        config.set(child, x);
        row.p.push_back(evaluate(cpt.table, config));
      }
      config.clear(child);
      out.rows.push_back(std::move(row));
    } while (counter.next());
    auto it = std::find_if(spec.cpts.begin(), spec.cpts.end(), [&](const CptSpec& c) { return c.child == out.child; });
    *it = std::move(out);
  }

  const VarId value = model.value_node();
  if (model.arrow_kind(decision, value)) {
    const std::vector<VarId> parents = rewired(model.value().parents);
    ValueSpec out;
    for (VarId p : parents) out.parents.push_back(model.name(p));
    Assignment config = model.empty_assignment();
    ConfigCounter counter(model.cards_of(parents));
    do {
      for (std::size_t i = 0; i < parents.size(); ++i) config.set(parents[i], counter[i]);
      config.set(decision, chosen(config));
      out.cells.push_back({labels_at(model, parents, config), evaluate(model.value().table, config)});
    } while (counter.next());
    spec.value = std::move(out);
  }
  return build_model(spec);
}

std::string describe(const IridModel& model, const StageFactor& factor) {
  std::string out = "P(" + model.name(factor.child);
  for (std::size_t i = 0; i < factor.parents.size(); ++i) {
    out += (i == 0 ? "|" : ",") + model.name(factor.parents[i]);
  }
  return out + ")";
}

}  // namespace irid
