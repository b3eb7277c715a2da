#ifndef IRID_GRAPH_OPS_HPP
#define IRID_GRAPH_OPS_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "irid/factor.hpp"
#include "irid/model.hpp"

namespace irid {

/// Information blocks Γ_0 … Γ_k. `blocks[0]` holds the chance variables seen
/// before the first decision; `blocks[i]` (i ≥ 1) holds decision i and the
/// chance variables first seen by decision i+1 (or never, for the last block).
struct StagePartition {
  std::vector<std::set<VarId>> blocks;
  /// decision_of_block[i] is Δ_i for i ≥ 1; entry 0 is unused.
  std::vector<VarId> decision_of_block;

  std::size_t stage_count() const noexcept { return blocks.empty() ? 0 : blocks.size() - 1; }
  std::optional<std::size_t> block_of(VarId var) const;
};

struct Digraph {
  std::size_t vertex_count = 0;
  std::vector<std::pair<VarId, VarId>> arcs;

  std::vector<VarId> parents(VarId var) const;
  bool has_arc(VarId from, VarId to) const;
};

class MoralGraph {
 public:
  explicit MoralGraph(std::size_t vertex_count) : adjacency_(vertex_count) {}

  std::size_t vertex_count() const noexcept { return adjacency_.size(); }
  void add_edge(VarId a, VarId b);
  bool has_edge(VarId a, VarId b) const { return adjacency_.at(a).count(b) != 0; }
  const std::set<VarId>& neighbors(VarId var) const { return adjacency_.at(var); }
  /// Unordered pairs with first < second.
  std::set<std::pair<VarId, VarId>> edges() const;

 private:
  std::vector<std::set<VarId>> adjacency_;
};

enum class StageFactorKind { cpt, decision_placeholder };

/// A probability factor selected for a stage, remembering where it came from.
struct StageFactor {
  StageFactorKind kind;
  VarId child;
  std::vector<VarId> parents;
  Factor table;
};

/// Everything needed to evaluate E[V | predecessors, Δ_k = d] for one stage.
/// Stage 0 (no decisions left) is the terminal context: `decision` is empty
/// and the dependency set is empty.
struct StageContext {
  std::size_t stage = 0;
  std::optional<VarId> decision;
  std::set<VarId> gamma_prime;
  std::set<VarId> dependency_set;
  std::vector<StageFactor> factors;
  Factor value;
  /// Free variables of the chain, gamma_prime minus the decision, in
  /// variable-id order.
  std::vector<VarId> free_vars;
  /// Per-variable cardinalities over the model universe.
  std::vector<std::size_t> cards;
  /// Model topological order restricted to free_vars.
  std::vector<VarId> free_topological;
};

/// Iteratively drops every non-value node without children.
IridModel remove_barren(const IridModel& model);

StagePartition compute_partition(const IridModel& model);

/// The model's arrows minus informational ones. Relevance arrows into
/// decisions are kept.
Digraph relevance_subgraph(const IridModel& model);

MoralGraph moralize(const Digraph& graph);

/// Throws StageOutOfRange unless `stage` is the last unsolved stage.
StageContext build_stage_context(const IridModel& model, const StagePartition& partition,
                                 const MoralGraph& moral, std::size_t stage);

/// Convenience: partition, relevance subgraph and moral graph of `model`,
/// then the context of its last stage.
StageContext build_last_stage_context(const IridModel& model);

/// Substitutes `policy` into every conditional that has `decision` as a
/// parent and removes the decision. Throws IncompletePolicy, UnknownDecision.
IridModel absorb_decision(const IridModel& model, VarId decision, const Policy& policy);

/// "P(R|T,O)" style label of a stage factor.
std::string describe(const IridModel& model, const StageFactor& factor);

}  // namespace irid

#endif  // IRID_GRAPH_OPS_HPP
