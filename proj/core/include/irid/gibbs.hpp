#ifndef IRID_GIBBS_HPP
#define IRID_GIBBS_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "irid/factor.hpp"
#include "irid/graph_ops.hpp"

namespace irid {

using Rng = std::mt19937_64;

struct SamplerConfig {
  std::uint64_t seed = 1;
  std::size_t burn_in = 1000;
  std::size_t samples = 20000;
  std::size_t thinning = 1;

  /// Throws InvalidArgument unless samples ≥ 1, thinning ≥ 1 and at least
  /// one sample is kept.
  void validate() const;
  std::size_t kept() const noexcept { return thinning == 0 ? 0 : samples / thinning; }

  bool operator==(const SamplerConfig&) const = default;
};

/// Total configuration over the stage's free variables together with the
/// fixed dependency set and decision.
struct ChainState {
  Assignment assignment;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Mixes a base seed with a path of indices (stage, cell, alternative, ...).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Random positive-probability completion of `fixed`: free variables are
/// drawn in topological order from the factors already determined, skipping
/// zero-weight values and backtracking on dead ends. Throws
/// NoPositiveState, IncompleteConfig, ConstraintViolated.
ChainState init_state(const StageContext& ctx, const Assignment& fixed, Rng& rng);

/// One systematic-scan sweep: every free variable resampled once, in
/// variable-id order, from its full conditional.
ChainState sweep(ChainState state, const StageContext& ctx, Rng& rng);

/// E[value | fixed] by Gibbs sampling: burn_in discarded sweeps, then
/// `samples` sweeps keeping every `thinning`-th. The standard error uses
/// batch means over 20 batches.
Estimate estimate_expectation(const StageContext& ctx, const Assignment& fixed, const Factor& value_factor,
                              const SamplerConfig& sampler);

/// E[value] from independent ancestral draws. Only for contexts with no
/// fixed variables (the terminal stage), where no conditioning is needed.
Estimate estimate_by_forward_sampling(const StageContext& ctx, const Factor& value_factor,
                                      const SamplerConfig& sampler);

/// Mean and batch-means standard error of a sample path.
Estimate summarize(const std::vector<double>& values, std::size_t batches = 20);

}  // namespace irid

#endif  // IRID_GIBBS_HPP
