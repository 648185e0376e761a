#pragma once

// Cost measurements: memoization overhead against the pure semantics, and
// the quicksort change-and-rerun benchmark.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mfl/ast.hpp"
#include "mfl/eval_memo.hpp"
#include "mfl/memo_store.hpp"
#include "mfl/stats.hpp"

namespace mfl {

nlohmann::json stats_to_json(const EvalStats& s);

/// Branches are written as lists of encoded [kind, payload] events.
nlohmann::json branch_to_json(const Branch& b);

/// {location, entries:[{branch, value}]}, values printed.
nlohmann::json table_to_json(const Store& st, Location l);

/// {events:[{location, hit, branch}], tables:[...]} for every table in `st`.
nlohmann::json trace_to_json(const std::vector<TraceEvent>& trace, const Store& st);

struct OverheadRow {
  std::string label;
  std::uint64_t pure_steps = 0;
  std::uint64_t cold_steps = 0;
  std::uint64_t cold_probes = 0;
  std::uint64_t memo_steps = 0;  // normal mode, for reference
  /// (cold_steps + cold_probes) / pure_steps: the cost of evaluating with
  /// every memo-table operation paid but no result reused.
  double ratio = 0;
};

/// `p` must terminate under both semantics.
OverheadRow measure_overhead(const Program& p, std::uint64_t seed, std::string label = {});

/// The fib corpus program with main replaced by `mfib !n`, for each n.
std::vector<OverheadRow> fib_overhead(const std::vector<std::int64_t>& sizes, std::uint64_t seed);

nlohmann::json to_json(const std::vector<OverheadRow>& rows, std::uint64_t seed);

struct QuicksortTrial {
  std::uint64_t fresh_steps = 0;
  std::uint64_t fresh_hits = 0;
  std::uint64_t fresh_misses = 0;
  std::uint64_t rerun_steps = 0;
  std::uint64_t rerun_hits = 0;      // in the mqs table only
  std::uint64_t rerun_misses = 0;    // in the mqs table only
  std::uint64_t rerun_hits_all = 0;  // every table
  std::uint64_t rerun_probes = 0;
};

/// Sorts a random permutation L of n distinct keys, then a::L for a fresh
/// key a, both in one store. Throws std::logic_error if either output is
/// not sorted.
QuicksortTrial quicksort_trial(std::size_t n, std::uint64_t seed);

struct QuicksortRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  double fresh_steps = 0;
  double rerun_steps = 0;
  double rerun_hits = 0;
  double rerun_misses = 0;
  double rerun_hits_all = 0;
  double rerun_probes = 0;
};

struct QuicksortBench {
  std::uint64_t seed = 0;
  std::vector<QuicksortRow> rows;
};

/// Averages over `trials` independent trials per size. Trials run on
/// `jobs` worker threads, each with its own store.
QuicksortBench bench_quicksort(const std::vector<std::size_t>& sizes, std::size_t trials,
                               std::uint64_t seed, unsigned jobs = 1);

nlohmann::json to_json(const QuicksortBench& b);

}  // namespace mfl
