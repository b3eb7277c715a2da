#include "irid/gibbs.hpp"

#include <algorithm>
#include <cmath>

#include "irid/error.hpp"

namespace irid {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::size_t sample_index(const std::vector<double>& weights, double total, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng) * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

/// Per-variable factor lists for the systematic scan.
class ScanPlan {
 public:
  explicit ScanPlan(const StageContext& ctx) : ctx_(ctx) {
    for (VarId v : ctx.free_vars) {
      std::vector<const Factor*> list;
      for (const StageFactor& f : ctx.factors) {
        if (f.table.contains(v)) list.push_back(&f.table);
      }
      if (list.empty()) {
        throw Error(ErrorCode::InvalidArgument, "free variable " + std::to_string(v) + " appears in no factor");
      }
      by_var_.push_back(std::move(list));
    }
  }

  void sweep(Assignment& state, Rng& rng) {
    for (std::size_t i = 0; i < ctx_.free_vars.size(); ++i) {
      const VarId v = ctx_.free_vars[i];
      if (!detail::full_conditional_into(v, state, by_var_[i], weights_)) {
        throw Error(ErrorCode::AllZeroSupport,
                    "chain reached a state where variable " + std::to_string(v) + " has no support");
      }
      state.set(v, sample_index(weights_, 1.0, rng));
    }
  }

 private:
  const StageContext& ctx_;
  std::vector<std::vector<const Factor*>> by_var_;
  std::vector<double> weights_;
};

bool contains(const std::vector<VarId>& vars, VarId v) { return std::find(vars.begin(), vars.end(), v) != vars.end(); }

/// Backtracking completion in topological order.
class Completion {
 public:
  Completion(const StageContext& ctx, Assignment& state, Rng& rng) : ctx_(ctx), state_(state), rng_(rng) {
    const auto& order = ctx.free_topological;
    determined_.resize(order.size());
    for (const StageFactor& f : ctx.factors) {
      // The factor is checked at the latest free variable of its scope.
      std::optional<std::size_t> last;
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (f.table.contains(order[i])) last = i;
      }
      if (last) determined_[*last].push_back(&f.table);
    }
  }

  bool run(std::size_t depth = 0) {
    const auto& order = ctx_.free_topological;
    if (depth == order.size()) return true;
    const VarId v = order[depth];
    std::vector<double> weights(ctx_.cards[v], 1.0);
    for (std::size_t x = 0; x < weights.size(); ++x) {
      state_.set(v, x);
      for (const Factor* f : determined_[depth]) {
        weights[x] *= evaluate(*f, state_);
        if (weights[x] == 0.0) break;
      }
    }
    while (true) {
      double total = 0.0;
      for (double w : weights) total += w;
      if (!(total > 0.0)) break;
      const std::size_t x = sample_index(weights, total, rng_);
      state_.set(v, x);
      if (run(depth + 1)) return true;
      weights[x] = 0.0;
    }
    state_.clear(v);
    return false;
  }

 private:
  const StageContext& ctx_;
  Assignment& state_;
  Rng& rng_;
  std::vector<std::vector<const Factor*>> determined_;
};

}  // namespace

void SamplerConfig::validate() const {
  if (samples == 0) throw Error(ErrorCode::InvalidArgument, "sampler needs at least one sample sweep");
  if (thinning == 0) throw Error(ErrorCode::InvalidArgument, "thinning must be at least 1");
  if (kept() == 0) throw Error(ErrorCode::InvalidArgument, "thinning keeps no samples");
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t step : path) h = splitmix64(h ^ splitmix64(step + 0x632BE59BD9B4E019ULL));
  return h;
}

ChainState init_state(const StageContext& ctx, const Assignment& fixed, Rng& rng) {
  if (fixed.universe() != ctx.cards.size()) {
    throw Error(ErrorCode::InvalidArgument, "fixed configuration belongs to a different model");
  }
  for (VarId d : ctx.dependency_set) {
    if (!fixed.assigned(d)) {
      throw Error(ErrorCode::IncompleteConfig, "dependency variable " + std::to_string(d) + " is not fixed");
    }
  }
  if (ctx.decision && !fixed.assigned(*ctx.decision)) {
    throw Error(ErrorCode::IncompleteConfig, "the stage decision is not fixed");
  }

  ChainState state{fixed};
  for (VarId v : ctx.free_vars) state.assignment.clear(v);

  for (const StageFactor& f : ctx.factors) {
    const bool has_free = std::any_of(f.table.scope().begin(), f.table.scope().end(),
                                      [&](VarId v) { return contains(ctx.free_vars, v); });
    if (has_free) continue;
    if (evaluate(f.table, state.assignment) == 0.0) {
      if (f.kind == StageFactorKind::decision_placeholder && f.child == ctx.decision) {
        throw Error(ErrorCode::ConstraintViolated, "fixed alternative is not admissible");
      }
      throw Error(ErrorCode::NoPositiveState, "fixed configuration has zero probability");
    }
  }

  Completion completion(ctx, state.assignment, rng);
  if (!completion.run()) {
    throw Error(ErrorCode::NoPositiveState, "no positive-probability completion of the fixed configuration");
  }
  return state;
}

ChainState sweep(ChainState state, const StageContext& ctx, Rng& rng) {
  ScanPlan plan(ctx);
  plan.sweep(state.assignment, rng);
  return state;
}

Estimate summarize(const std::vector<double>& values, std::size_t batches) {
  Estimate out;
  out.n = values.size();
  if (values.empty()) return out;
  // Deviations from the first draw keep constant paths exact.
  const double anchor = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - anchor;
  out.mean = anchor + sum / static_cast<double>(values.size());

  std::vector<double> means;
  if (batches >= 2 && values.size() >= batches) {
    const std::size_t size = values.size() / batches;
    for (std::size_t b = 0; b < batches; ++b) {
      double s = 0.0;
      for (std::size_t i = b * size; i < (b + 1) * size; ++i) s += values[i] - anchor;
      means.push_back(s / static_cast<double>(size));
    }
  } else {
    for (double v : values) means.push_back(v - anchor);
  }
  if (means.size() < 2) return out;
  double centre = 0.0;
  for (double m : means) centre += m;
  centre /= static_cast<double>(means.size());
  double ss = 0.0;
  for (double m : means) ss += (m - centre) * (m - centre);
  const double k = static_cast<double>(means.size());
  out.std_error = std::sqrt(ss / (k - 1.0) / k);
  return out;
}

Estimate estimate_expectation(const StageContext& ctx, const Assignment& fixed, const Factor& value_factor,
                              const SamplerConfig& sampler) {
  sampler.validate();
  Rng rng(sampler.seed);
  ChainState state = init_state(ctx, fixed, rng);
  ScanPlan plan(ctx);
  for (std::size_t i = 0; i < sampler.burn_in; ++i) plan.sweep(state.assignment, rng);
  std::vector<double> values;
  values.reserve(sampler.kept());
  for (std::size_t i = 1; i <= sampler.samples; ++i) {
    plan.sweep(state.assignment, rng);
    if (i % sampler.thinning == 0) values.push_back(evaluate(value_factor, state.assignment));
  }
  return summarize(values);
}

Estimate estimate_by_forward_sampling(const StageContext& ctx, const Factor& value_factor,
                                      const SamplerConfig& sampler) {
  sampler.validate();
  if (ctx.decision || !ctx.dependency_set.empty()) {
    throw Error(ErrorCode::InvalidArgument, "forward sampling needs a context without fixed variables");
  }
  Rng rng(sampler.seed);
  const Assignment empty(ctx.cards.size());
  std::vector<double> values;
  values.reserve(sampler.kept());
  for (std::size_t i = 0; i < sampler.kept(); ++i) {
    ChainState draw = init_state(ctx, empty, rng);
    values.push_back(evaluate(value_factor, draw.assignment));
  }
  return summarize(values);
}

}  // namespace irid
