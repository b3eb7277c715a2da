#ifndef IRID_FACTOR_HPP
#define IRID_FACTOR_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace irid {

/// Index of a variable within one model. Ids are dense: 0 .. node_count-1.
using VarId = std::size_t;

/// Partial or total assignment of frame positions to variables. Stored
/// densely over the model's variable universe.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t universe) : values_(universe, kUnset) {}

  std::size_t universe() const noexcept { return values_.size(); }
  bool assigned(VarId var) const { return var < values_.size() && values_[var] != kUnset; }
  std::optional<std::size_t> get(VarId var) const;
  /// Unchecked read; the variable must be assigned.
  std::size_t operator[](VarId var) const { return static_cast<std::size_t>(values_[var]); }

  void set(VarId var, std::size_t value);
  void clear(VarId var);

  bool operator==(const Assignment&) const = default;

 private:
  static constexpr std::int32_t kUnset = -1;
  std::vector<std::int32_t> values_;
};

/// Dense real-valued table over an ordered scope of finite variables.
/// Values are row-major: the last scope variable varies fastest.
class Factor {
 public:
  Factor() : values_{1.0} {}
  Factor(std::vector<VarId> scope, std::vector<std::size_t> cards, std::vector<double> values);

  static Factor scalar(double value);

  const std::vector<VarId>& scope() const noexcept { return scope_; }
  const std::vector<std::size_t>& cards() const noexcept { return cards_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t index) const { return values_[index]; }

  bool contains(VarId var) const { return position(var).has_value(); }
  std::optional<std::size_t> position(VarId var) const;
  std::size_t stride(std::size_t pos) const { return strides_[pos]; }
  std::size_t card_of(VarId var) const;

  /// Row-major index of the entry selected by `config`; every scope variable
  /// must be assigned. Throws IncompleteConfig / ValueNotInFrame.
  std::size_t index_of(const Assignment& config) const;

  bool operator==(const Factor& other) const {
    return scope_ == other.scope_ && cards_ == other.cards_ && values_ == other.values_;
  }

 private:
  std::vector<VarId> scope_;
  std::vector<std::size_t> cards_;
  std::vector<std::size_t> strides_;
  std::vector<double> values_;
};

/// Slice of `factor` at the scope variables assigned in `config`; variables
/// of `config` outside the scope are ignored.
Factor restrict(const Factor& factor, const Assignment& config);

/// Entry at a configuration covering the whole scope.
double evaluate(const Factor& factor, const Assignment& config);

/// Distribution of `target` given every other variable in `state`,
/// proportional to the product of the factors that mention `target`.
/// Factors not mentioning `target` are skipped. Throws AllZeroSupport when
/// every candidate value has zero weight.
std::vector<double> full_conditional(VarId target, const Assignment& state,
                                     std::span<const Factor* const> factors);
std::vector<double> full_conditional(VarId target, const Assignment& state,
                                     std::span<const Factor> factors);

namespace detail {
/// full_conditional into a caller-owned buffer; returns false on zero support.
bool full_conditional_into(VarId target, const Assignment& state, std::span<const Factor* const> factors,
                           std::vector<double>& weights);
}  // namespace detail

/// Number of row-major configurations of `cards`, saturating at SIZE_MAX.
std::size_t config_count(std::span<const std::size_t> cards);

/// Odometer over the row-major configurations of a list of frame sizes.
class ConfigCounter {
 public:
  explicit ConfigCounter(std::vector<std::size_t> cards);

  const std::vector<std::size_t>& digits() const noexcept { return digits_; }
  std::size_t operator[](std::size_t pos) const { return digits_[pos]; }
  /// Row-major rank of the current configuration.
  std::size_t rank() const noexcept { return rank_; }
  /// Advances; returns false once every configuration has been visited.
  bool next();

 private:
  std::vector<std::size_t> cards_;
  std::vector<std::size_t> digits_;
  std::size_t rank_ = 0;
  bool empty_ = false;
};

}  // namespace irid

#endif  // IRID_FACTOR_HPP
