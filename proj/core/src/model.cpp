#include "irid/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "irid/error.hpp"

namespace irid {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::chance: return "chance";
    case NodeKind::decision: return "decision";
    case NodeKind::value: return "value";
  }
  return "?";
}

std::string_view to_string(ArrowKind kind) {
  return kind == ArrowKind::relevance ? "relevance" : "informational";
}

std::string_view to_string(Objective objective) {
  return objective == Objective::maximize ? "maximize" : "minimize";
}

Frame::Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::set<std::string_view> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) throw Error(ErrorCode::DuplicateLabel, "duplicate frame label '" + label + "'");
  }
}

std::optional<std::size_t> Frame::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

// ---------------------------------------------------------------------------

Constraint::Constraint(VarId decision, std::size_t card, std::vector<VarId> scope,
                       std::vector<std::size_t> scope_cards, std::vector<std::uint8_t> allowed)
    : decision_(decision),
      card_(card),
      scope_(std::move(scope)),
      scope_cards_(std::move(scope_cards)),
      allowed_(std::move(allowed)) {}

std::size_t Constraint::row_of(const Assignment& config) const {
  std::size_t row = 0;
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    auto value = config.get(scope_[i]);
    if (!value) throw Error(ErrorCode::IncompleteConfig, "constraint scope variable unassigned");
    if (*value >= scope_cards_[i]) throw Error(ErrorCode::ValueNotInFrame, "constraint scope value outside frame");
    row = row * scope_cards_[i] + *value;
  }
  return row;
}

std::vector<std::size_t> Constraint::admissible(std::size_t row) const {
  std::vector<std::size_t> out;
  for (std::size_t alt = 0; alt < card_; ++alt) {
    if (allows(row, alt)) out.push_back(alt);
  }
  return out;
}

Factor Constraint::indicator() const {
  std::vector<VarId> scope = scope_;
  std::vector<std::size_t> cards = scope_cards_;
  scope.push_back(decision_);
  cards.push_back(card_);
  std::vector<double> values(allowed_.begin(), allowed_.end());
  return Factor(std::move(scope), std::move(cards), std::move(values));
}

// ---------------------------------------------------------------------------

std::optional<VarId> IridModel::find(std::string_view name) const {
  for (VarId v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].id == name) return v;
  }
  return std::nullopt;
}

VarId IridModel::id(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw Error(ErrorCode::UnknownVariable, "unknown variable '" + std::string(name) + "'");
}

std::optional<ArrowKind> IridModel::arrow_kind(VarId from, VarId to) const {
  for (const Arrow& arrow : arrows_) {
    if (arrow.from == from && arrow.to == to) return arrow.kind;
  }
  return std::nullopt;
}

const Cpt& IridModel::cpt(VarId chance) const {
  if (chance >= nodes_.size() || nodes_[chance].kind != NodeKind::chance) {
    throw Error(ErrorCode::NodeKindMismatch, "no conditional: not a chance node");
  }
  return cpts_[cpt_index_[chance]];
}

const Constraint& IridModel::constraint(VarId decision) const {
  if (decision >= nodes_.size() || nodes_[decision].kind != NodeKind::decision) {
    throw Error(ErrorCode::UnknownDecision, "not a decision node");
  }
  return constraints_[constraint_index_[decision]];
}

std::vector<VarId> IridModel::chance_nodes() const {
  std::vector<VarId> out;
  for (VarId v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].kind == NodeKind::chance) out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> IridModel::cards_of(std::span<const VarId> vars) const {
  std::vector<std::size_t> cards;
  cards.reserve(vars.size());
  for (VarId v : vars) cards.push_back(card(v));
  return cards;
}

ModelSpec IridModel::to_spec() const {
  ModelSpec spec;
  spec.objective = objective_;
  for (const Node& node : nodes_) spec.nodes.push_back({node.id, node.kind, node.frame});
  for (const Arrow& arrow : arrows_) spec.arrows.push_back({name(arrow.from), name(arrow.to), arrow.kind});

  auto labels_of = [&](const std::vector<VarId>& vars, const ConfigCounter& counter) {
    std::vector<std::string> given;
    for (std::size_t i = 0; i < vars.size(); ++i) given.push_back(frame(vars[i]).label(counter[i]));
    return given;
  };

  for (const Cpt& cpt : cpts_) {
    CptSpec out{name(cpt.child), {}, {}};
    for (VarId p : cpt.parents) out.parents.push_back(name(p));
    const std::size_t child_card = card(cpt.child);
    ConfigCounter counter(cards_of(cpt.parents));
    do {
      CptRow row{labels_of(cpt.parents, counter), {}};
      for (std::size_t x = 0; x < child_card; ++x) row.p.push_back(cpt.table[counter.rank() * child_card + x]);
      out.rows.push_back(std::move(row));
    } while (counter.next());
    spec.cpts.push_back(std::move(out));
  }

  for (const Constraint& c : constraints_) {
    ConstraintSpec out{name(c.decision()), {}, {}};
    for (VarId s : c.scope()) out.scope.push_back(name(s));
    const Frame& alternatives = frame(c.decision());
    ConfigCounter counter(c.scope_cards());
    do {
      ConstraintCell cell{labels_of(c.scope(), counter), {}};
      for (std::size_t alt : c.admissible(counter.rank())) cell.allow.push_back(alternatives.label(alt));
      out.cells.push_back(std::move(cell));
    } while (counter.next());
    spec.constraints.push_back(std::move(out));
  }

  for (VarId p : value_.parents) spec.value.parents.push_back(name(p));
  ConfigCounter counter(cards_of(value_.parents));
  do {
    spec.value.cells.push_back({labels_of(value_.parents, counter), value_.table[counter.rank()]});
  } while (counter.next());
  return spec;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

std::string indexed(std::string_view field, std::size_t i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}

class Collector {
 public:
  void add(ErrorCode code, std::string path, std::string message) {
    issues_.push_back({code, std::move(path), std::move(message)});
  }
  void throw_if_any() {
    if (!issues_.empty()) throw Error(std::move(issues_));
  }

 private:
  std::vector<Issue> issues_;
};

/// Resolves a row's `given` labels against `vars` into a row-major rank.
/// Reports and returns nullopt on mismatch.
std::optional<std::size_t> resolve_given(const IridModel& model, const std::vector<VarId>& vars,
                                         const std::vector<std::string>& given, const std::string& path,
                                         Collector& issues) {
  if (given.size() != vars.size()) {
    issues.add(ErrorCode::IncompleteConfig, path,
               "expected " + std::to_string(vars.size()) + " given values, found " + std::to_string(given.size()));
    return std::nullopt;
  }
  std::size_t rank = 0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const Frame& frame = model.frame(vars[i]);
    auto index = frame.index_of(given[i]);
    if (!index) {
      issues.add(ErrorCode::ValueNotInFrame, path,
                 "'" + given[i] + "' is not a value of " + model.name(vars[i]));
      return std::nullopt;
    }
    rank = rank * frame.size() + *index;
  }
  return rank;
}

std::string describe_rank(const IridModel& model, const std::vector<VarId>& vars, std::size_t rank) {
  std::vector<std::size_t> digits(vars.size());
  for (std::size_t i = vars.size(); i-- > 0;) {
    digits[i] = rank % model.card(vars[i]);
    rank /= model.card(vars[i]);
  }
  std::string out = "(";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += model.name(vars[i]) + "=" + model.frame(vars[i]).label(digits[i]);
  }
  return out + ")";
}

bool same_set(std::vector<VarId> a, std::vector<VarId> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

IridModel build_model(const ModelSpec& spec) {
  IridModel model;
  Collector issues;

  // Phase 1: nodes.
  std::unordered_map<std::string, VarId> ids;
  std::size_t value_count = 0;
  for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
    const NodeSpec& node = spec.nodes[i];
    const std::string path = indexed("nodes", i);
    if (node.id.empty()) {
      issues.add(ErrorCode::SchemaError, path, "node id is empty");
      continue;
    }
    if (!ids.emplace(node.id, model.nodes_.size()).second) {
      issues.add(ErrorCode::DuplicateVariable, path, "duplicate node id '" + node.id + "'");
      continue;
    }
    if (node.kind == NodeKind::value) {
      ++value_count;
      model.nodes_.push_back({node.id, node.kind, Frame{}});
      continue;
    }
    if (node.frame.empty()) issues.add(ErrorCode::MissingFrame, path, "node '" + node.id + "' has no frame");
    model.nodes_.push_back({node.id, node.kind, node.frame});
  }
  if (value_count == 0) issues.add(ErrorCode::NoValueNode, "nodes", "model has no value node");
  if (value_count > 1) issues.add(ErrorCode::MultipleValueNodes, "nodes", "model has more than one value node");
  issues.throw_if_any();

  const std::size_t n = model.nodes_.size();
  for (VarId v = 0; v < n; ++v) {
    if (model.nodes_[v].kind == NodeKind::value) model.value_node_ = v;
  }

  // Phase 2: arrows and graph structure.
  model.parents_.assign(n, {});
  model.children_.assign(n, {});
  std::set<std::pair<VarId, VarId>> seen_arrows;
  for (std::size_t i = 0; i < spec.arrows.size(); ++i) {
    const ArrowSpec& arrow = spec.arrows[i];
    const std::string path = indexed("arrows", i);
    auto from = ids.find(arrow.from);
    auto to = ids.find(arrow.to);
    if (from == ids.end() || to == ids.end()) {
      issues.add(ErrorCode::UnknownVariable, path,
                 "unknown endpoint '" + (from == ids.end() ? arrow.from : arrow.to) + "'");
      continue;
    }
    const VarId f = from->second;
    const VarId t = to->second;
    if (f == t) {
      issues.add(ErrorCode::CycleDetected, path, "self-loop on '" + arrow.from + "'");
      continue;
    }
    if (!seen_arrows.emplace(f, t).second) {
      issues.add(ErrorCode::DuplicateArrow, path, "duplicate arrow " + arrow.from + " -> " + arrow.to);
      continue;
    }
    if (model.nodes_[f].kind == NodeKind::value) {
      issues.add(ErrorCode::ValueNodeNotSink, path, "value node '" + arrow.from + "' has an outgoing arrow");
      continue;
    }
    if (model.nodes_[t].kind != NodeKind::decision && arrow.kind != ArrowKind::relevance) {
      issues.add(ErrorCode::ArrowKindMismatch, path,
                 "arrow into " + std::string(to_string(model.nodes_[t].kind)) + " node '" + arrow.to +
                     "' must be a relevance arrow");
      continue;
    }
    model.arrows_.push_back({f, t, arrow.kind});
    model.parents_[t].push_back(f);
    model.children_[f].push_back(t);
  }
  issues.throw_if_any();
  for (auto& list : model.parents_) std::sort(list.begin(), list.end());
  for (auto& list : model.children_) std::sort(list.begin(), list.end());

  // Kahn's algorithm, smallest id first for a deterministic order.
  {
    std::vector<std::size_t> indegree(n);
    for (VarId v = 0; v < n; ++v) indegree[v] = model.parents_[v].size();
    std::set<VarId> ready;
    for (VarId v = 0; v < n; ++v) {
      if (indegree[v] == 0) ready.insert(v);
    }
    while (!ready.empty()) {
      VarId v = *ready.begin();
      ready.erase(ready.begin());
      model.topo_.push_back(v);
      for (VarId c : model.children_[v]) {
        if (--indegree[c] == 0) ready.insert(c);
      }
    }
    if (model.topo_.size() != n) {
      throw Error(ErrorCode::CycleDetected, "arrows", "the graph contains a directed cycle");
    }
  }

  for (VarId v : model.topo_) {
    if (model.nodes_[v].kind == NodeKind::decision) model.decisions_.push_back(v);
  }
  for (std::size_t i = 0; i + 1 < model.decisions_.size(); ++i) {
    const VarId a = model.decisions_[i];
    const VarId b = model.decisions_[i + 1];
    if (!model.arrow_kind(a, b)) {
      issues.add(ErrorCode::DecisionsNotTotallyOrdered, "arrows",
                 "no arrow " + model.name(a) + " -> " + model.name(b) + " joining consecutive decisions");
    }
  }
  issues.throw_if_any();
  for (std::size_t i = 0; i < model.decisions_.size(); ++i) {
    for (std::size_t j = i + 1; j < model.decisions_.size(); ++j) {
      const VarId di = model.decisions_[i];
      const VarId dj = model.decisions_[j];
      for (VarId x : model.parents_[di]) {
        if (!model.arrow_kind(x, dj)) {
          issues.add(ErrorCode::NoForgettingViolated, "arrows",
                     "'" + model.name(x) + "' informs " + model.name(di) + " but not the later decision " +
                         model.name(dj));
        }
      }
    }
  }
  issues.throw_if_any();

  // Phase 3: tables.
  model.cpt_index_.assign(n, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < spec.cpts.size(); ++i) {
    const CptSpec& cs = spec.cpts[i];
    const std::string path = indexed("cpts", i);
    auto child_it = ids.find(cs.child);
    if (child_it == ids.end()) {
      issues.add(ErrorCode::UnknownVariable, path, "unknown child '" + cs.child + "'");
      continue;
    }
    const VarId child = child_it->second;
    if (model.nodes_[child].kind != NodeKind::chance) {
      issues.add(ErrorCode::NodeKindMismatch, path, "'" + cs.child + "' is not a chance node");
      continue;
    }
    if (model.cpt_index_[child] != static_cast<std::size_t>(-1)) {
      issues.add(ErrorCode::DuplicateTableEntry, path, "second conditional for '" + cs.child + "'");
      continue;
    }
    std::vector<VarId> parents;
    bool parents_ok = true;
    for (const auto& p : cs.parents) {
      auto it = ids.find(p);
      if (it == ids.end()) {
        issues.add(ErrorCode::UnknownVariable, path + ".parents", "unknown parent '" + p + "'");
        parents_ok = false;
      } else if (std::find(parents.begin(), parents.end(), it->second) != parents.end()) {
        issues.add(ErrorCode::ParentMismatch, path + ".parents", "parent '" + p + "' listed twice");
        parents_ok = false;
      } else {
        parents.push_back(it->second);
      }
    }
    if (!parents_ok) continue;
    if (!same_set(parents, model.parents_[child])) {
      issues.add(ErrorCode::ParentMismatch, path + ".parents",
                 "parents of '" + cs.child + "' differ from the arrows into it");
      continue;
    }

    const std::size_t card = model.card(child);
    const std::size_t rows = config_count(model.cards_of(parents));
    std::vector<double> table(rows * card, 0.0);
    std::vector<bool> filled(rows, false);
    std::vector<bool> mentioned(rows, false);
    for (std::size_t r = 0; r < cs.rows.size(); ++r) {
      const CptRow& row = cs.rows[r];
      const std::string row_path = path + indexed(".rows", r);
      auto rank = resolve_given(model, parents, row.given, row_path, issues);
      if (!rank) continue;
      if (mentioned[*rank]) {
        issues.add(ErrorCode::DuplicateTableEntry, row_path, "row " + describe_rank(model, parents, *rank) + " given twice");
        continue;
      }
      mentioned[*rank] = true;
      if (row.p.size() != card) {
        issues.add(ErrorCode::MissingTableEntry, row_path,
                   "expected " + std::to_string(card) + " probabilities, found " + std::to_string(row.p.size()));
        continue;
      }
      double sum = 0.0;
      bool in_range = true;
      for (double p : row.p) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) in_range = false;
        sum += p;
      }
      if (!in_range || std::abs(sum - 1.0) > kNormalizationTolerance) {
        issues.add(ErrorCode::CptRowNotNormalized, row_path,
                   "row " + describe_rank(model, parents, *rank) + " of P(" + cs.child +
                       ") is not a probability vector (sum " + std::to_string(sum) + ")");
        continue;
      }
      filled[*rank] = true;
      std::copy(row.p.begin(), row.p.end(), table.begin() + static_cast<std::ptrdiff_t>(*rank * card));
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (!mentioned[r]) {
        issues.add(ErrorCode::MissingTableEntry, path + ".rows",
                   "no row for " + describe_rank(model, parents, r) + " in P(" + cs.child + ")");
      }
    }
    std::vector<VarId> scope = parents;
    scope.push_back(child);
    model.cpt_index_[child] = model.cpts_.size();
    model.cpts_.push_back({child, parents, Factor(scope, model.cards_of(scope), std::move(table))});
  }
  for (VarId v = 0; v < n; ++v) {
    if (model.nodes_[v].kind == NodeKind::chance && model.cpt_index_[v] == static_cast<std::size_t>(-1)) {
      issues.add(ErrorCode::MissingTableEntry, "cpts", "no conditional for chance node '" + model.name(v) + "'");
    }
  }

  model.constraint_index_.assign(n, static_cast<std::size_t>(-1));
  std::vector<const ConstraintSpec*> by_decision(n, nullptr);
  std::vector<std::string> constraint_path(n);
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    const ConstraintSpec& cs = spec.constraints[i];
    auto it = ids.find(cs.decision);
    if (it == ids.end() || model.nodes_[it->second].kind != NodeKind::decision) {
      issues.add(ErrorCode::UnknownDecision, indexed("constraints", i), "'" + cs.decision + "' is not a decision");
      continue;
    }
    if (by_decision[it->second]) {
      issues.add(ErrorCode::DuplicateTableEntry, indexed("constraints", i),
                 "second constraint for '" + cs.decision + "'");
      continue;
    }
    by_decision[it->second] = &cs;
    constraint_path[it->second] = indexed("constraints", i);
  }
  for (VarId d : model.decisions_) {
    const ConstraintSpec* cs = by_decision[d];
    const std::string path = cs ? constraint_path[d] : "constraints";
    const std::size_t card = model.card(d);
    std::vector<VarId> scope;
    bool scope_ok = true;
    if (cs) {
      for (const auto& s : cs->scope) {
        auto it = ids.find(s);
        if (it == ids.end() || std::find(model.parents_[d].begin(), model.parents_[d].end(), it->second) ==
                                   model.parents_[d].end()) {
          issues.add(ErrorCode::ParentMismatch, path + ".scope",
                     "'" + s + "' is not a parent of decision '" + model.name(d) + "'");
          scope_ok = false;
        } else if (std::find(scope.begin(), scope.end(), it->second) != scope.end()) {
          issues.add(ErrorCode::ParentMismatch, path + ".scope", "'" + s + "' listed twice");
          scope_ok = false;
        } else {
          scope.push_back(it->second);
        }
      }
    }
    if (!scope_ok) continue;
    for (VarId p : model.parents_[d]) {
      const bool constrains = std::find(scope.begin(), scope.end(), p) != scope.end();
      const ArrowKind expected = constrains ? ArrowKind::relevance : ArrowKind::informational;
      if (*model.arrow_kind(p, d) != expected) {
        issues.add(ErrorCode::ArrowKindMismatch, "arrows",
                   "arrow " + model.name(p) + " -> " + model.name(d) + " must be " +
                       std::string(to_string(expected)) +
                       (constrains ? " (the parent is in the constraint scope)"
                                   : " (the parent is not in the constraint scope)"));
      }
    }

    const std::size_t rows = config_count(model.cards_of(scope));
    std::vector<std::uint8_t> allowed(rows * card, 0);
    if (!cs || (scope.empty() && cs->cells.empty())) {
      std::fill(allowed.begin(), allowed.end(), 1);
    } else {
      std::vector<bool> filled(rows, false);
      for (std::size_t c = 0; c < cs->cells.size(); ++c) {
        const ConstraintCell& cell = cs->cells[c];
        const std::string cell_path = path + indexed(".cells", c);
        auto rank = resolve_given(model, scope, cell.given, cell_path, issues);
        if (!rank) continue;
        if (filled[*rank]) {
          issues.add(ErrorCode::DuplicateTableEntry, cell_path, "cell " + describe_rank(model, scope, *rank) + " given twice");
          continue;
        }
        filled[*rank] = true;
        if (cell.allow.empty()) {
          issues.add(ErrorCode::EmptyConstraintCell, cell_path,
                     "C_" + model.name(d) + describe_rank(model, scope, *rank) + " permits no alternative");
          continue;
        }
        for (const auto& label : cell.allow) {
          auto alt = model.frame(d).index_of(label);
          if (!alt) {
            issues.add(ErrorCode::ValueNotInFrame, cell_path,
                       "'" + label + "' is not an alternative of '" + model.name(d) + "'");
            continue;
          }
          allowed[*rank * card + *alt] = 1;
        }
      }
      for (std::size_t r = 0; r < rows; ++r) {
        if (!filled[r]) {
          issues.add(ErrorCode::MissingTableEntry, path + ".cells",
                     "no cell for " + describe_rank(model, scope, r) + " in C_" + model.name(d));
        }
      }
    }
    model.constraint_index_[d] = model.constraints_.size();
    model.constraints_.emplace_back(d, card, scope, model.cards_of(scope), std::move(allowed));
  }

  {
    const ValueSpec& vs = spec.value;
    std::vector<VarId> parents;
    bool parents_ok = true;
    for (const auto& p : vs.parents) {
      auto it = ids.find(p);
      if (it == ids.end() || std::find(parents.begin(), parents.end(), it->second) != parents.end()) {
        issues.add(ErrorCode::ParentMismatch, "value.parents", "bad value parent '" + p + "'");
        parents_ok = false;
      } else {
        parents.push_back(it->second);
      }
    }
    if (parents_ok && !same_set(parents, model.parents_[model.value_node_])) {
      issues.add(ErrorCode::ParentMismatch, "value.parents", "value parents differ from the arrows into the value node");
      parents_ok = false;
    }
    if (parents_ok) {
      const std::size_t rows = config_count(model.cards_of(parents));
      std::vector<double> table(rows, 0.0);
      std::vector<bool> filled(rows, false);
      for (std::size_t c = 0; c < vs.cells.size(); ++c) {
        const std::string cell_path = indexed("value.cells", c);
        auto rank = resolve_given(model, parents, vs.cells[c].given, cell_path, issues);
        if (!rank) continue;
        if (filled[*rank]) {
          issues.add(ErrorCode::DuplicateTableEntry, cell_path, "cell " + describe_rank(model, parents, *rank) + " given twice");
          continue;
        }
        if (!std::isfinite(vs.cells[c].v)) {
          issues.add(ErrorCode::NonFiniteValue, cell_path, "value is not finite");
          continue;
        }
        filled[*rank] = true;
        table[*rank] = vs.cells[c].v;
      }
      for (std::size_t r = 0; r < rows; ++r) {
        if (!filled[r]) {
          issues.add(ErrorCode::MissingTableEntry, "value.cells", "no value for " + describe_rank(model, parents, r));
        }
      }
      model.value_ = {parents, Factor(parents, model.cards_of(parents), std::move(table))};
    }
  }
  issues.throw_if_any();
  model.objective_ = spec.objective;
  return model;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> admissible(const IridModel& model, VarId decision, const Assignment& parent_config) {
  const Constraint& c = model.constraint(decision);
  for (VarId p : model.parents(decision)) {
    if (!parent_config.assigned(p)) {
      throw Error(ErrorCode::IncompleteConfig,
                  "parent '" + model.name(p) + "' of decision '" + model.name(decision) + "' unassigned");
    }
  }
  return c.admissible(c.row_of(parent_config));
}

void validate_policy(const IridModel& model, const Policy& policy) {
  auto decision = model.find(policy.decision);
  if (!decision || model.kind(*decision) != NodeKind::decision) {
    throw Error(ErrorCode::UnknownDecision, "policy for unknown decision '" + policy.decision + "'");
  }
  const auto& parents = model.parents(*decision);
  std::vector<VarId> scope;
  for (const auto& s : policy.scope) scope.push_back(model.id(s));
  if (scope != parents) {
    throw Error(ErrorCode::IncompletePolicy, "policy scope for '" + policy.decision + "' is not the parent set");
  }
  const auto cards = model.cards_of(scope);
  if (policy.choice.size() != config_count(cards)) {
    throw Error(ErrorCode::IncompletePolicy, "policy for '" + policy.decision + "' does not cover every cell");
  }
  const Constraint& c = model.constraint(*decision);
  ConfigCounter counter(cards);
  Assignment config = model.empty_assignment();
  do {
    for (std::size_t i = 0; i < scope.size(); ++i) config.set(scope[i], counter[i]);
    const std::size_t alt = policy.choice[counter.rank()];
    if (alt >= model.card(*decision) || !c.allows(c.row_of(config), alt)) {
      throw Error(ErrorCode::ConstraintViolated,
                  "policy for '" + policy.decision + "' picks a forbidden alternative at " +
                      describe(model, scope, config));
    }
  } while (counter.next());
}

Policy first_admissible_policy(const IridModel& model, VarId decision) {
  const Constraint& c = model.constraint(decision);
  return make_policy(model, decision,
                     [&](const Assignment& config) { return c.admissible(c.row_of(config)).front(); });
}

Factor policy_to_conditional(const IridModel& model, const Policy& policy) {
  const VarId decision = model.id(policy.decision);
  std::vector<VarId> scope;
  for (const auto& s : policy.scope) scope.push_back(model.id(s));
  const std::size_t card = model.card(decision);
  std::vector<double> values(policy.choice.size() * card, 0.0);
  for (std::size_t row = 0; row < policy.choice.size(); ++row) values[row * card + policy.choice[row]] = 1.0;
  scope.push_back(decision);
  return Factor(scope, model.cards_of(scope), std::move(values));
}

double BayesNetView::joint(const Assignment& config) const {
  double product = 1.0;
  for (const Factor& factor : conditionals_) {
    product *= evaluate(factor, config);
    if (product == 0.0) break;
  }
  return product;
}

BayesNetView fix_policies(const IridModel& model, std::span<const Policy> policies) {
  BayesNetView view;
  view.model_ = &model;
  view.conditionals_.assign(model.node_count(), Factor::scalar(1.0));
  for (VarId v = 0; v < model.node_count(); ++v) {
    if (model.kind(v) == NodeKind::chance) view.conditionals_[v] = model.cpt(v).table;
  }
  for (VarId d : model.decisions()) {
    auto it = std::find_if(policies.begin(), policies.end(),
                           [&](const Policy& p) { return p.decision == model.name(d); });
    if (it == policies.end()) throw Error(ErrorCode::MissingPolicy, "no policy for decision '" + model.name(d) + "'");
    validate_policy(model, *it);
    view.conditionals_[d] = policy_to_conditional(model, *it);
  }
  return view;
}

std::string describe(const IridModel& model, std::span<const VarId> vars, const Assignment& config) {
  std::string out;
  for (VarId v : vars) {
    if (!out.empty()) out += ", ";
    out += model.name(v) + "=";
    auto value = config.get(v);
    out += value ? model.frame(v).label(*value) : "?";
  }
  return out;
}

}  // namespace irid
