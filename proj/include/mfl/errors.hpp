#pragma once

#include <stdexcept>
#include <string>

#include "mfl/ast.hpp"

namespace mfl {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(Pos pos, const std::string& message)
      : std::runtime_error(message), pos_(pos) {}
  Pos pos() const { return pos_; }

 private:
  Pos pos_;
};

class DuplicateDecl : public SyntaxError {
 public:
  DuplicateDecl(Pos pos, const std::string& name)
      : SyntaxError(pos, "duplicate declaration of '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

enum class TypeErrorKind {
  UnboundVar,
  UnboundResource,
  ResourceInReturn,
  ResourceInBang,
  NotIndexable,
  Mismatch,
  ArityOrOp,
};

const char* to_string(TypeErrorKind k);

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorKind kind, Pos pos, const std::string& message, TypePtr expected = nullptr,
            TypePtr found = nullptr)
      : std::runtime_error(message),
        kind_(kind),
        pos_(pos),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  TypeErrorKind kind() const { return kind_; }
  Pos pos() const { return pos_; }
  const TypePtr& expected() const { return expected_; }
  const TypePtr& found() const { return found_; }

 private:
  TypeErrorKind kind_;
  Pos pos_;
  TypePtr expected_;
  TypePtr found_;
};

enum class EvalErrorKind {
  Stuck,
  DuplicateBranch,
  DepthExceeded,
  StepLimit,
  DivisionByZero,
  NonIndexableValue,
};

const char* to_string(EvalErrorKind k);

/// Raised by the evaluators. Stuck, DuplicateBranch and NonIndexableValue
/// indicate an invariant breach; the rest are resource limits or
/// arithmetic faults of the program itself.
class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  EvalErrorKind kind() const { return kind_; }

 private:
  EvalErrorKind kind_;
};

}  // namespace mfl
