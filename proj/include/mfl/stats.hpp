#pragma once

#include <cstdint>

namespace mfl {

/// Cost counters for one evaluation. A step is one application of an
/// evaluation rule; the premises of a rule count as steps of their own.
struct EvalStats {
  std::uint64_t steps = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t memo_misses = 0;
  std::uint64_t probes = 0;
  std::uint64_t branch_events = 0;
  std::uint64_t boxes_allocated = 0;
  std::uint64_t max_branch_len = 0;
  std::uint64_t tables_allocated = 0;

  EvalStats& operator+=(const EvalStats& o) {
    steps += o.steps;
    memo_hits += o.memo_hits;
    memo_misses += o.memo_misses;
    probes += o.probes;
    branch_events += o.branch_events;
    boxes_allocated += o.boxes_allocated;
    if (o.max_branch_len > max_branch_len) max_branch_len = o.max_branch_len;
    tables_allocated += o.tables_allocated;
    return *this;
  }
};

}  // namespace mfl
