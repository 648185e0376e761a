#pragma once

// Reference semantics without memoization: functions carry no location and
// `return` always evaluates its body. Boxes still receive fresh tags.

#include <cstdint>

#include "mfl/ast.hpp"
#include "mfl/errors.hpp"
#include "mfl/memo_store.hpp"
#include "mfl/stats.hpp"

namespace mfl {

struct PureConfig {
  std::uint64_t max_steps = 0;  // 0: unlimited
  std::uint64_t max_depth = 1'000'000;
};

class PureEvaluator {
 public:
  explicit PureEvaluator(PureConfig cfg = {});

  /// `t` must be closed and location free.
  Value eval_term(const TermPtr& t);
  Value eval_expr(const ExprPtr& e);

  /// Erases the program, evaluates its declarations in order, then main.
  Value run(const Program& p);

  const EvalStats& stats() const { return stats_; }
  const BoxRegistry& boxes() const { return boxes_; }

 private:
  Value term(const TermPtr& t);
  Value expr(const ExprPtr& e);
  void step();

  PureConfig cfg_;
  EvalStats stats_;
  BoxRegistry boxes_;
  std::uint64_t depth_ = 0;
};

}  // namespace mfl
