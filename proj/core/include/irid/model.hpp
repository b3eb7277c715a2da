#ifndef IRID_MODEL_HPP
#define IRID_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irid/factor.hpp"

namespace irid {

enum class NodeKind { chance, decision, value };
enum class ArrowKind { relevance, informational };
enum class Objective { maximize, minimize };

std::string_view to_string(NodeKind kind);
std::string_view to_string(ArrowKind kind);
std::string_view to_string(Objective objective);

/// Ordered set of value names. The order is fixed at construction and is the
/// tie-breaking order used everywhere (first label wins).
class Frame {
 public:
  Frame() = default;
  /// Throws DuplicateLabel.
  explicit Frame(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  std::optional<std::size_t> index_of(std::string_view label) const;

  bool operator==(const Frame&) const = default;

 private:
  std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// Name-based model description, as written by a modeler or read from a file.

struct NodeSpec {
  std::string id;
  NodeKind kind = NodeKind::chance;
  Frame frame;  // empty for the value node
};

struct ArrowSpec {
  std::string from;
  std::string to;
  ArrowKind kind = ArrowKind::relevance;
};

/// `given` holds one label per entry of CptSpec::parents; `p` one probability
/// per label of the child's frame.
struct CptRow {
  std::vector<std::string> given;
  std::vector<double> p;
};

struct CptSpec {
  std::string child;
  std::vector<std::string> parents;
  std::vector<CptRow> rows;
};

struct ConstraintCell {
  std::vector<std::string> given;
  std::vector<std::string> allow;
};

/// A decision without a ConstraintSpec is unconstrained. An empty scope with
/// no cells also means unconstrained.
struct ConstraintSpec {
  std::string decision;
  std::vector<std::string> scope;
  std::vector<ConstraintCell> cells;
};

struct ValueCell {
  std::vector<std::string> given;
  double v = 0.0;
};

struct ValueSpec {
  std::vector<std::string> parents;
  std::vector<ValueCell> cells;
};

struct ModelSpec {
  std::vector<NodeSpec> nodes;
  std::vector<ArrowSpec> arrows;
  std::vector<CptSpec> cpts;
  std::vector<ConstraintSpec> constraints;
  ValueSpec value;
  Objective objective = Objective::maximize;
};

// ---------------------------------------------------------------------------
// Validated model.

struct Node {
  std::string id;
  NodeKind kind;
  Frame frame;

  bool operator==(const Node&) const = default;
};

struct Arrow {
  VarId from;
  VarId to;
  ArrowKind kind;

  bool operator==(const Arrow&) const = default;
};

/// P(child | parents) as a factor over (parents..., child).
struct Cpt {
  VarId child;
  std::vector<VarId> parents;
  Factor table;

  bool operator==(const Cpt&) const = default;
};

/// C_Δ: for each configuration of `scope`, the permitted alternatives.
class Constraint {
 public:
  Constraint() = default;
  Constraint(VarId decision, std::size_t card, std::vector<VarId> scope, std::vector<std::size_t> scope_cards,
             std::vector<std::uint8_t> allowed);

  VarId decision() const noexcept { return decision_; }
  const std::vector<VarId>& scope() const noexcept { return scope_; }
  const std::vector<std::size_t>& scope_cards() const noexcept { return scope_cards_; }
  std::size_t row_count() const noexcept { return card_ == 0 ? 0 : allowed_.size() / card_; }
  bool allows(std::size_t row, std::size_t alternative) const { return allowed_[row * card_ + alternative] != 0; }
  /// Row of the scope configuration selected by `config`. Throws IncompleteConfig.
  std::size_t row_of(const Assignment& config) const;
  std::vector<std::size_t> admissible(std::size_t row) const;
  /// 0/1 factor over (scope..., decision).
  Factor indicator() const;

  bool operator==(const Constraint&) const = default;

 private:
  VarId decision_ = 0;
  std::size_t card_ = 0;
  std::vector<VarId> scope_;
  std::vector<std::size_t> scope_cards_;
  std::vector<std::uint8_t> allowed_;
};

struct ValueTable {
  std::vector<VarId> parents;
  Factor table;

  bool operator==(const ValueTable&) const = default;
};

/// Information/relevance influence diagram. Immutable once built.
class IridModel {
 public:
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(VarId var) const { return nodes_.at(var); }
  const std::string& name(VarId var) const { return nodes_.at(var).id; }
  NodeKind kind(VarId var) const { return nodes_.at(var).kind; }
  const Frame& frame(VarId var) const { return nodes_.at(var).frame; }
  std::size_t card(VarId var) const { return nodes_.at(var).frame.size(); }

  std::optional<VarId> find(std::string_view name) const;
  /// Throws UnknownVariable.
  VarId id(std::string_view name) const;

  const std::vector<Arrow>& arrows() const noexcept { return arrows_; }
  /// Parents in variable-id order.
  const std::vector<VarId>& parents(VarId var) const { return parents_.at(var); }
  const std::vector<VarId>& children(VarId var) const { return children_.at(var); }
  std::optional<ArrowKind> arrow_kind(VarId from, VarId to) const;

  const std::vector<Cpt>& cpts() const noexcept { return cpts_; }
  /// Throws NodeKindMismatch unless `chance` is a chance node.
  const Cpt& cpt(VarId chance) const;
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  /// Throws UnknownDecision.
  const Constraint& constraint(VarId decision) const;
  const ValueTable& value() const noexcept { return value_; }
  VarId value_node() const noexcept { return value_node_; }

  /// Decisions in the order of the path that joins them.
  const std::vector<VarId>& decisions() const noexcept { return decisions_; }
  std::vector<VarId> chance_nodes() const;
  const std::vector<VarId>& topological_order() const noexcept { return topo_; }
  Objective objective() const noexcept { return objective_; }

  Assignment empty_assignment() const { return Assignment(nodes_.size()); }
  std::vector<std::size_t> cards_of(std::span<const VarId> vars) const;

  /// Name-based description that rebuilds an equal model.
  ModelSpec to_spec() const;

  bool operator==(const IridModel&) const = default;

 private:
  friend IridModel build_model(const ModelSpec& spec);

  std::vector<Node> nodes_;
  std::vector<Arrow> arrows_;
  std::vector<std::vector<VarId>> parents_;
  std::vector<std::vector<VarId>> children_;
  std::vector<Cpt> cpts_;
  std::vector<std::size_t> cpt_index_;
  std::vector<Constraint> constraints_;
  std::vector<std::size_t> constraint_index_;
  ValueTable value_;
  VarId value_node_ = 0;
  std::vector<VarId> decisions_;
  std::vector<VarId> topo_;
  Objective objective_ = Objective::maximize;
};

/// Validates `spec` and builds the model. Throws Error carrying every issue
/// found in the first failing validation phase.
IridModel build_model(const ModelSpec& spec);

inline constexpr double kNormalizationTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Decision functions.

/// Deterministic decision function δ: one alternative (frame index of the
/// decision) per row-major configuration of `scope`.
struct Policy {
  std::string decision;
  std::vector<std::string> scope;
  std::vector<std::size_t> choice;

  bool operator==(const Policy&) const = default;
};

/// Permitted alternatives of `decision` given a configuration of its parents.
/// Throws UnknownDecision, IncompleteConfig.
std::vector<std::size_t> admissible(const IridModel& model, VarId decision, const Assignment& parent_config);

/// Checks scope, size and constraint compliance. Throws UnknownDecision,
/// IncompletePolicy, ConstraintViolated.
void validate_policy(const IridModel& model, const Policy& policy);

/// Policy over the decision's parents choosing `choose(parent_config)`.
template <typename Choose>
Policy make_policy(const IridModel& model, VarId decision, Choose&& choose);

/// Policy choosing the first admissible alternative in every cell.
Policy first_admissible_policy(const IridModel& model, VarId decision);

/// Zero-one conditional of the policy, a factor over (scope..., decision).
Factor policy_to_conditional(const IridModel& model, const Policy& policy);

/// Model with every decision's conditional supplied: a Bayesian network.
class BayesNetView {
 public:
  const IridModel& model() const noexcept { return *model_; }
  /// Conditional of each non-value node, indexed by variable id (the value
  /// node's slot holds a scalar 1).
  const std::vector<Factor>& conditionals() const noexcept { return conditionals_; }
  const Factor& value() const noexcept { return model_->value().table; }
  /// Product of all conditionals at a total configuration.
  double joint(const Assignment& config) const;

 private:
  friend BayesNetView fix_policies(const IridModel&, std::span<const Policy>);
  const IridModel* model_ = nullptr;
  std::vector<Factor> conditionals_;
};

/// Throws MissingPolicy plus validate_policy errors. The view refers to
/// `model`, which must outlive it.
BayesNetView fix_policies(const IridModel& model, std::span<const Policy> policies);

/// "B=$1M, T=t2" for the listed variables of `config`.
std::string describe(const IridModel& model, std::span<const VarId> vars, const Assignment& config);

// ---------------------------------------------------------------------------

template <typename Choose>
Policy make_policy(const IridModel& model, VarId decision, Choose&& choose) {
  Policy policy;
  policy.decision = model.name(decision);
  const auto& scope = model.parents(decision);
  for (VarId var : scope) policy.scope.push_back(model.name(var));
  ConfigCounter counter(model.cards_of(scope));
  Assignment config = model.empty_assignment();
  do {
    for (std::size_t i = 0; i < scope.size(); ++i) config.set(scope[i], counter[i]);
    policy.choice.push_back(choose(static_cast<const Assignment&>(config)));
  } while (counter.next());
  return policy;
}

}  // namespace irid

#endif  // IRID_MODEL_HPP
