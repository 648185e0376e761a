#pragma once

// Memoizing big-step evaluator. Substitution based: every value is a closed
// term, and a function value carries the location of its memo table.

#include <cstdint>
#include <vector>

#include "mfl/ast.hpp"
#include "mfl/errors.hpp"
#include "mfl/memo_store.hpp"
#include "mfl/stats.hpp"

namespace mfl {

/// Deliberately broken insert policies, used to test the differential
/// harness.
enum class Fault {
  None,
  SkipInsert,         // never record a result
  WrongBranchInsert,  // record under a branch whose last event is altered
};

struct EvalConfig {
  bool cold = false;     // every lookup is paid for, then treated as a miss
  bool checked = true;   // assert resource-freeness, branch discipline, absence before insert
  Fault fault = Fault::None;
  std::uint64_t max_steps = 0;  // 0: unlimited
  std::uint64_t max_depth = 1'000'000;
  bool trace = false;
};

struct TraceEvent {
  Location loc;
  bool hit;
  Branch branch;
};

class MemoEvaluator {
 public:
  MemoEvaluator(Store& store, EvalConfig cfg);

  Value eval_term(const TermPtr& t);

  /// Evaluate a function body at location `l` starting from branch `beta`.
  Value eval_expr(Location l, Branch& beta, const ExprPtr& e);

  /// Evaluate the declarations in order, threading the store, then main.
  Value run(const Program& p);

  /// Evaluate only the declarations; the result binds each name to its value.
  Subst run_decls(const Program& p);

  const EvalStats& stats() const { return stats_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  Store& store() { return store_; }

 private:
  struct Activation {
    Location loc;
    Branch beta;
    std::uint64_t constructs = 0;
  };

  Value term(const TermPtr& t);
  Value expr(Activation& act, const ExprPtr& e);
  Value ret(Activation& act, const ExprPtr& e);
  void step();

  Store& store_;
  EvalConfig cfg_;
  EvalStats stats_;
  std::vector<TraceEvent> trace_;
  std::uint64_t depth_ = 0;
};

}  // namespace mfl
