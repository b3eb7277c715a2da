#include "irid/error.hpp"

namespace irid {
namespace {

std::string join_issues(const std::vector<Issue>& issues) {
  std::string out;
  for (const Issue& issue : issues) {
    if (!out.empty()) out += "; ";
    if (!issue.path.empty()) out += issue.path + ": ";
    out += issue.message;
  }
  return out;
}

}  // namespace

Error::Error(std::vector<Issue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {
  if (issues_.empty()) {
    issues_.push_back({ErrorCode::InvalidArgument, {}, "unspecified error"});
  }
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::DuplicateVariable: return "DuplicateVariable";
    case ErrorCode::MissingFrame: return "MissingFrame";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::NoValueNode: return "NoValueNode";
    case ErrorCode::MultipleValueNodes: return "MultipleValueNodes";
    case ErrorCode::ValueNodeNotSink: return "ValueNodeNotSink";
    case ErrorCode::DecisionsNotTotallyOrdered: return "DecisionsNotTotallyOrdered";
    case ErrorCode::NoForgettingViolated: return "NoForgettingViolated";
    case ErrorCode::ArrowKindMismatch: return "ArrowKindMismatch";
    case ErrorCode::DuplicateArrow: return "DuplicateArrow";
    case ErrorCode::ParentMismatch: return "ParentMismatch";
    case ErrorCode::NodeKindMismatch: return "NodeKindMismatch";
    case ErrorCode::CptRowNotNormalized: return "CptRowNotNormalized";
    case ErrorCode::EmptyConstraintCell: return "EmptyConstraintCell";
    case ErrorCode::MissingTableEntry: return "MissingTableEntry";
    case ErrorCode::DuplicateTableEntry: return "DuplicateTableEntry";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::ValueNotInFrame: return "ValueNotInFrame";
    case ErrorCode::IncompleteConfig: return "IncompleteConfig";
    case ErrorCode::UnknownDecision: return "UnknownDecision";
    case ErrorCode::MissingPolicy: return "MissingPolicy";
    case ErrorCode::IncompletePolicy: return "IncompletePolicy";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::StageOutOfRange: return "StageOutOfRange";
    case ErrorCode::AllZeroSupport: return "AllZeroSupport";
    case ErrorCode::NoPositiveState: return "NoPositiveState";
    case ErrorCode::ZeroNormalizer: return "ZeroNormalizer";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::AllZeroSupport:
    case ErrorCode::NoPositiveState:
    case ErrorCode::ZeroNormalizer:
    case ErrorCode::BudgetExceeded:
    case ErrorCode::InvalidArgument:
      return false;
    default:
      return true;
  }
}

}  // namespace irid
