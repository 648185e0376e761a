#include "mfl/errors.hpp"

namespace mfl {

const char* to_string(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::UnboundVar: return "UnboundVar";
    case TypeErrorKind::UnboundResource: return "UnboundResource";
    case TypeErrorKind::ResourceInReturn: return "ResourceInReturn";
    case TypeErrorKind::ResourceInBang: return "ResourceInBang";
    case TypeErrorKind::NotIndexable: return "NotIndexable";
    case TypeErrorKind::Mismatch: return "Mismatch";
    case TypeErrorKind::ArityOrOp: return "ArityOrOp";
  }
  return "?";
}

const char* to_string(EvalErrorKind k) {
  switch (k) {
    case EvalErrorKind::Stuck: return "Stuck";
    case EvalErrorKind::DuplicateBranch: return "DuplicateBranch";
    case EvalErrorKind::DepthExceeded: return "DepthExceeded";
    case EvalErrorKind::StepLimit: return "StepLimit";
    case EvalErrorKind::DivisionByZero: return "DivisionByZero";
    case EvalErrorKind::NonIndexableValue: return "NonIndexableValue";
  }
  return "?";
}

}  // namespace mfl
