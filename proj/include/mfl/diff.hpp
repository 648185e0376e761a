#pragma once

// Differential check between the memoizing and the pure evaluator.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

#include "mfl/ast.hpp"
#include "mfl/eval_memo.hpp"
#include "mfl/memo_store.hpp"
#include "mfl/stats.hpp"

namespace mfl {

/// Equality of a memo-side value and a pure-side value. Function values
/// are compared after erasure; boxes are compared by content, each side
/// read through its own registry. Also records whether the box tags that
/// were matched up form a bijection.
class ValueMatcher {
 public:
  ValueMatcher(const BoxRegistry& memo_boxes, const BoxRegistry& pure_boxes);

  bool equal(const Value& memo, const Value& pure);
  bool tags_bijective() const { return bijective_; }

 private:
  bool term(const TermPtr& a, const TermPtr& b);
  bool expr(const ExprPtr& a, const ExprPtr& b);
  bool boxes(BoxTag a, BoxTag b);

  const BoxRegistry& mb_;
  const BoxRegistry& pb_;
  std::unordered_map<std::uint64_t, std::uint64_t> m2p_;
  std::unordered_map<std::uint64_t, std::uint64_t> p2m_;
  std::unordered_map<std::uint64_t, std::unordered_map<std::uint64_t, bool>> seen_;
  bool bijective_ = true;
};

enum class Verdict {
  Ok,        // same value, or the same program error on both sides
  Mismatch,  // different outcomes
  Breach,    // the memoizing evaluator violated an internal invariant
  Skipped,   // a resource limit was hit on either side
};

const char* to_string(Verdict v);

struct DiffOptions {
  EvalConfig memo;             // memo.cold selects cold mode
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 0;  // applied to both sides; 0: unlimited
  std::uint64_t max_depth = 1'000'000;
};

struct DiffReport {
  Verdict verdict = Verdict::Ok;
  std::string memo_value;  // printed, or "error <kind>: <message>"
  std::string pure_value;
  EvalStats memo_stats;
  EvalStats pure_stats;
  bool tag_bijection = true;
  std::string detail;
};

/// Runs `p` under both semantics. `p` must typecheck.
DiffReport diff_check(const Program& p, const DiffOptions& opts);

}  // namespace mfl
