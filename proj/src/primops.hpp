#pragma once

#include <limits>
#include <string>

#include "mfl/ast.hpp"
#include "mfl/errors.hpp"

namespace mfl::detail {

struct DepthGuard {
  DepthGuard(std::uint64_t& d, std::uint64_t limit) : d_(d) {
    if (++d_ > limit) {
      --d_;
      throw EvalError(EvalErrorKind::DepthExceeded,
                      "evaluation depth exceeds " + std::to_string(limit));
    }
  }
  ~DepthGuard() { --d_; }
  DepthGuard(const DepthGuard&) = delete;
  DepthGuard& operator=(const DepthGuard&) = delete;
  std::uint64_t& d_;
};

// Integer arithmetic wraps on overflow; division truncates toward zero.
inline Value apply_primop(PrimOpKind op, const std::vector<Value>& args) {
  for (const auto& a : args)
    if (a->kind != TermKind::Int)
      throw EvalError(EvalErrorKind::Stuck, "primitive operand is not an integer");
  if (args.size() != primop_arity(op)) throw EvalError(EvalErrorKind::Stuck, "primitive arity");
  if (op == PrimOpKind::IntToSum) {
    // Nonzero is true and selects the first arm.
    return args[0]->num != 0 ? mk::inl(mk::unit(), ty::unit(), ty::unit())
                             : mk::inr(mk::unit(), ty::unit(), ty::unit());
  }
  const std::int64_t a = args[0]->num;
  const std::int64_t b = args[1]->num;
  const auto ua = static_cast<std::uint64_t>(a);
  const auto ub = static_cast<std::uint64_t>(b);
  switch (op) {
    case PrimOpKind::Add: return mk::integer(static_cast<std::int64_t>(ua + ub));
    case PrimOpKind::Sub: return mk::integer(static_cast<std::int64_t>(ua - ub));
    case PrimOpKind::Mul: return mk::integer(static_cast<std::int64_t>(ua * ub));
    case PrimOpKind::Div:
      if (b == 0) throw EvalError(EvalErrorKind::DivisionByZero, "division by zero");
      if (a == std::numeric_limits<std::int64_t>::min() && b == -1) return mk::integer(a);
      return mk::integer(a / b);
    case PrimOpKind::Lt: return mk::integer(a < b ? 1 : 0);
    case PrimOpKind::Le: return mk::integer(a <= b ? 1 : 0);
    case PrimOpKind::Eq: return mk::integer(a == b ? 1 : 0);
    case PrimOpKind::IntToSum: break;
  }
  throw EvalError(EvalErrorKind::Stuck, "unknown primitive");
}

}  // namespace mfl::detail
