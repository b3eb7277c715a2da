#ifndef IRID_ERROR_HPP
#define IRID_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace irid {

enum class ErrorCode {
  // structure
  UnknownVariable,
  DuplicateVariable,
  MissingFrame,
  DuplicateLabel,
  CycleDetected,
  NoValueNode,
  MultipleValueNodes,
  ValueNodeNotSink,
  DecisionsNotTotallyOrdered,
  NoForgettingViolated,
  ArrowKindMismatch,
  DuplicateArrow,
  ParentMismatch,
  NodeKindMismatch,
  // tables
  CptRowNotNormalized,
  EmptyConstraintCell,
  MissingTableEntry,
  DuplicateTableEntry,
  NonFiniteValue,
  ValueNotInFrame,
  IncompleteConfig,
  // policies and stages
  UnknownDecision,
  MissingPolicy,
  IncompletePolicy,
  ConstraintViolated,
  StageOutOfRange,
  // numerics
  AllZeroSupport,
  NoPositiveState,
  ZeroNormalizer,
  BudgetExceeded,
  // input
  SyntaxError,
  SchemaError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// One problem found while validating a model. `path` names the offending
/// input field, e.g. "cpts[2].rows[3]".
struct Issue {
  ErrorCode code;
  std::string path;
  std::string message;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), issues_{{code, {}, message}} {}
  Error(ErrorCode code, std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        issues_{{code, std::move(path), message}} {}
  explicit Error(std::vector<Issue> issues);

  /// Code of the first issue.
  ErrorCode code() const noexcept { return issues_.front().code; }
  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

/// Validation failures (exit code 2 at the CLI) as opposed to runtime ones.
bool is_validation_error(ErrorCode code);

}  // namespace irid

#endif  // IRID_ERROR_HPP
