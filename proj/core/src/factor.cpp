#include "irid/factor.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "irid/error.hpp"

namespace irid {

std::optional<std::size_t> Assignment::get(VarId var) const {
  if (!assigned(var)) return std::nullopt;
  return static_cast<std::size_t>(values_[var]);
}

void Assignment::set(VarId var, std::size_t value) {
  if (var >= values_.size()) {
    throw Error(ErrorCode::UnknownVariable, "variable " + std::to_string(var) + " outside assignment");
  }
  values_[var] = static_cast<std::int32_t>(value);
}

void Assignment::clear(VarId var) {
  if (var < values_.size()) values_[var] = kUnset;
}

Factor::Factor(std::vector<VarId> scope, std::vector<std::size_t> cards, std::vector<double> values)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
  if (scope_.size() != cards_.size()) {
    throw Error(ErrorCode::InvalidArgument, "factor scope and cardinalities differ in length");
  }
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (cards_[i] == 0) throw Error(ErrorCode::InvalidArgument, "factor variable with empty frame");
    for (std::size_t j = 0; j < i; ++j) {
      if (scope_[i] == scope_[j]) throw Error(ErrorCode::InvalidArgument, "factor scope repeats a variable");
    }
  }
  if (values_.size() != config_count(cards_)) {
    throw Error(ErrorCode::InvalidArgument, "factor table length does not match its scope");
  }
  strides_.assign(scope_.size(), 1);
  for (std::size_t i = scope_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * cards_[i];
}

Factor Factor::scalar(double value) { return Factor({}, {}, {value}); }

std::optional<std::size_t> Factor::position(VarId var) const {
  auto it = std::find(scope_.begin(), scope_.end(), var);
  if (it == scope_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - scope_.begin());
}

std::size_t Factor::card_of(VarId var) const {
  auto pos = position(var);
  if (!pos) throw Error(ErrorCode::UnknownVariable, "variable not in factor scope");
  return cards_[*pos];
}

std::size_t Factor::index_of(const Assignment& config) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    auto value = config.get(scope_[i]);
    if (!value) {
      throw Error(ErrorCode::IncompleteConfig,
                  "configuration leaves variable " + std::to_string(scope_[i]) + " unassigned");
    }
    if (*value >= cards_[i]) {
      throw Error(ErrorCode::ValueNotInFrame, "value index outside the frame of variable " +
                                                  std::to_string(scope_[i]));
    }
    index += *value * strides_[i];
  }
  return index;
}

Factor restrict(const Factor& factor, const Assignment& config) {
  std::vector<VarId> kept_scope;
  std::vector<std::size_t> kept_cards;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < factor.scope().size(); ++i) {
    VarId var = factor.scope()[i];
    if (auto value = config.get(var)) {
      if (*value >= factor.cards()[i]) {
        throw Error(ErrorCode::ValueNotInFrame,
                    "value index outside the frame of variable " + std::to_string(var));
      }
      offset += *value * factor.stride(i);
    } else {
      kept_scope.push_back(var);
      kept_cards.push_back(factor.cards()[i]);
    }
  }
  if (kept_scope.size() == factor.scope().size()) return factor;

  std::vector<std::size_t> kept_strides;
  for (VarId var : kept_scope) kept_strides.push_back(factor.stride(*factor.position(var)));

  std::vector<double> values;
  values.reserve(config_count(kept_cards));
  ConfigCounter counter(kept_cards);
  do {
    std::size_t index = offset;
    for (std::size_t i = 0; i < kept_strides.size(); ++i) index += counter[i] * kept_strides[i];
    values.push_back(factor[index]);
  } while (counter.next());
  return Factor(std::move(kept_scope), std::move(kept_cards), std::move(values));
}

double evaluate(const Factor& factor, const Assignment& config) { return factor[factor.index_of(config)]; }

namespace detail {

bool full_conditional_into(VarId target, const Assignment& state, std::span<const Factor* const> factors,
                           std::vector<double>& weights) {
  weights.clear();
  for (const Factor* factor : factors) {
    auto pos = factor->position(target);
    if (!pos) continue;
    const std::size_t card = factor->cards()[*pos];
    if (weights.empty()) {
      weights.assign(card, 1.0);
    } else if (weights.size() != card) {
      throw Error(ErrorCode::InvalidArgument, "factors disagree on the frame size of the target");
    }
    // Base index with the target at 0, then step by its stride.
    std::size_t base = 0;
    for (std::size_t i = 0; i < factor->scope().size(); ++i) {
      if (i == *pos) continue;
      auto value = state.get(factor->scope()[i]);
      if (!value) {
        throw Error(ErrorCode::IncompleteConfig, "state leaves variable " +
                                                     std::to_string(factor->scope()[i]) + " unassigned");
      }
      base += *value * factor->stride(i);
    }
    const std::size_t step = factor->stride(*pos);
    for (std::size_t v = 0; v < card; ++v) weights[v] *= (*factor)[base + v * step];
  }
  if (weights.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no factor mentions variable " + std::to_string(target));
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) return false;
  for (double& w : weights) w /= total;
  return true;
}

}  // namespace detail

std::vector<double> full_conditional(VarId target, const Assignment& state,
                                     std::span<const Factor* const> factors) {
  std::vector<double> weights;
  if (!detail::full_conditional_into(target, state, factors, weights)) {
    throw Error(ErrorCode::AllZeroSupport,
                "every value of variable " + std::to_string(target) + " has zero weight");
  }
  return weights;
}

std::vector<double> full_conditional(VarId target, const Assignment& state, std::span<const Factor> factors) {
  std::vector<const Factor*> pointers;
  pointers.reserve(factors.size());
  for (const Factor& factor : factors) pointers.push_back(&factor);
  return full_conditional(target, state, std::span<const Factor* const>(pointers));
}

std::size_t config_count(std::span<const std::size_t> cards) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 1;
  for (std::size_t card : cards) {
    if (card == 0) return 0;
    if (total > kMax / card) return kMax;
    total *= card;
  }
  return total;
}

ConfigCounter::ConfigCounter(std::vector<std::size_t> cards)
    : cards_(std::move(cards)), digits_(cards_.size(), 0) {
  empty_ = std::any_of(cards_.begin(), cards_.end(), [](std::size_t c) { return c == 0; });
}

bool ConfigCounter::next() {
  if (empty_) return false;
  for (std::size_t i = digits_.size(); i-- > 0;) {
    if (++digits_[i] < cards_[i]) {
      ++rank_;
      return true;
    }
    digits_[i] = 0;
  }
  rank_ = 0;
  return false;
}

}  // namespace irid
