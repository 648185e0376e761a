#include "mfl/instrument.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "mfl/big_stack.hpp"
#include "mfl/eval_memo.hpp"
#include "mfl/eval_pure.hpp"
#include "mfl/prelude.hpp"
#include "mfl/printer.hpp"

namespace mfl {
namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const Value& lookup(const Subst& env, const std::string& name) {
  for (const auto& b : env)
    if (b.name == name) return b.value;
  throw std::logic_error("declaration '" + name + "' missing");
}

// Keys of a boxed list value, front to back.
std::vector<std::int64_t> list_keys(const Value& v, const Store& st) {
  std::vector<std::int64_t> out;
  Value cur = v;
  for (;;) {
    const Value& cell = st.unbox(cur->tag())->kids[0];
    if (cell->kind == TermKind::Inl) return out;
    out.push_back(cell->kids[0]->kids[0]->num);
    cur = cell->kids[0]->kids[1];
  }
}

}  // namespace

nlohmann::json stats_to_json(const EvalStats& s) {
  return {{"steps", s.steps},
          {"memo_hits", s.memo_hits},
          {"memo_misses", s.memo_misses},
          {"probes", s.probes},
          {"branch_events", s.branch_events},
          {"boxes_allocated", s.boxes_allocated},
          {"max_branch_len", s.max_branch_len},
          {"tables_allocated", s.tables_allocated}};
}

nlohmann::json branch_to_json(const Branch& b) {
  nlohmann::json out = nlohmann::json::array();
  for (const Event& ev : b) {
    const EncodedEvent enc = encode_event(ev);
    out.push_back({enc.kind, enc.payload});
  }
  return out;
}

nlohmann::json table_to_json(const Store& st, Location l) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [branch, value] : st.table(l).entries())
    entries.push_back({{"branch", branch_to_json(branch)}, {"value", print_value(value, &st.boxes())}});
  return {{"location", static_cast<std::uint64_t>(l)}, {"entries", std::move(entries)}};
}

nlohmann::json trace_to_json(const std::vector<TraceEvent>& trace, const Store& st) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& ev : trace)
    events.push_back({{"location", static_cast<std::uint64_t>(ev.loc)},
                      {"hit", ev.hit},
                      {"branch", branch_to_json(ev.branch)}});
  nlohmann::json tables = nlohmann::json::array();
  for (std::uint64_t l = 1; l <= st.size(); ++l) tables.push_back(table_to_json(st, Location{l}));
  return {{"events", std::move(events)}, {"tables", std::move(tables)}};
}

OverheadRow measure_overhead(const Program& p, std::uint64_t seed, std::string label) {
  OverheadRow row;
  row.label = std::move(label);
  {
    PureEvaluator pure;
    pure.run(p);
    row.pure_steps = pure.stats().steps;
  }
  {
    Store st(seed);
    EvalConfig cfg;
    cfg.cold = true;
    MemoEvaluator memo(st, cfg);
    memo.run(p);
    row.cold_steps = memo.stats().steps;
    row.cold_probes = memo.stats().probes;
  }
  {
    Store st(seed);
    MemoEvaluator memo(st, EvalConfig{});
    memo.run(p);
    row.memo_steps = memo.stats().steps;
  }
  row.ratio = row.pure_steps
                  ? static_cast<double>(row.cold_steps + row.cold_probes) / row.pure_steps
                  : 0.0;
  return row;
}

std::vector<OverheadRow> fib_overhead(const std::vector<std::int64_t>& sizes, std::uint64_t seed) {
  const Program fib = corpus_program("fib");
  std::vector<OverheadRow> rows;
  for (std::int64_t n : sizes) {
    Program p = with_main(fib, mk::apply(mk::var("mfib"), mk::bang(mk::integer(n))));
    rows.push_back(measure_overhead(p, seed, "fib " + std::to_string(n)));
  }
  return rows;
}

nlohmann::json to_json(const std::vector<OverheadRow>& rows, std::uint64_t seed) {
  nlohmann::json out = {{"benchmark", "overhead"}, {"seed", seed}, {"rows", nlohmann::json::array()}};
  for (const auto& r : rows) {
    out["rows"].push_back({{"label", r.label},
                           {"pure_steps", r.pure_steps},
                           {"cold_steps", r.cold_steps},
                           {"cold_probes", r.cold_probes},
                           {"memo_steps", r.memo_steps},
                           {"ratio", r.ratio}});
  }
  return out;
}

QuicksortTrial quicksort_trial(std::size_t n, std::uint64_t seed) {
  static const Program qs = corpus_program("quicksort");
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = 2 * static_cast<std::int64_t>(i);
  std::shuffle(keys.begin(), keys.end(), rng);
  // An odd key, so it is distinct from all others; its rank is uniform.
  const std::int64_t a =
      2 * std::uniform_int_distribution<std::int64_t>(0, static_cast<std::int64_t>(n))(rng) - 1;

  Store st(mix64(seed));
  MemoEvaluator ev(st, EvalConfig{});
  const Subst env = ev.run_decls(qs);
  const Value& hcons = lookup(env, "hcons");
  const Value& mqs = lookup(env, "mqs");
  const MemoTable& mqs_table = st.table(mqs->location());

  auto cons = [&](std::int64_t k, const Value& tail) {
    return ev.eval_term(mk::apply(hcons, mk::pair(mk::bang(mk::integer(k)), mk::bang(tail))));
  };
  Value list = lookup(env, "empty");
  for (auto it = keys.rbegin(); it != keys.rend(); ++it) list = cons(*it, list);

  std::vector<std::int64_t> sorted = keys;
  std::sort(sorted.begin(), sorted.end());

  QuicksortTrial t;
  EvalStats s0 = ev.stats();
  std::uint64_t h0 = mqs_table.hits, m0 = mqs_table.misses;
  Value out = ev.eval_term(mk::apply(mqs, mk::bang(list)));
  EvalStats s1 = ev.stats();
  if (list_keys(out, st) != sorted) throw std::logic_error("quicksort output is not sorted");
  t.fresh_steps = s1.steps - s0.steps;
  t.fresh_hits = mqs_table.hits - h0;
  t.fresh_misses = mqs_table.misses - m0;

  Value changed = cons(a, list);
  sorted.insert(std::lower_bound(sorted.begin(), sorted.end(), a), a);

  s0 = ev.stats();
  h0 = mqs_table.hits;
  m0 = mqs_table.misses;
  out = ev.eval_term(mk::apply(mqs, mk::bang(changed)));
  s1 = ev.stats();
  if (list_keys(out, st) != sorted) throw std::logic_error("quicksort output is not sorted");
  t.rerun_steps = s1.steps - s0.steps;
  t.rerun_hits = mqs_table.hits - h0;
  t.rerun_misses = mqs_table.misses - m0;
  t.rerun_hits_all = s1.memo_hits - s0.memo_hits;
  t.rerun_probes = s1.probes - s0.probes;
  return t;
}

QuicksortBench bench_quicksort(const std::vector<std::size_t>& sizes, std::size_t trials,
                               std::uint64_t seed, unsigned jobs) {
  struct Job {
    std::size_t row;
    std::size_t n;
    std::uint64_t seed;
  };
  std::vector<Job> work;
  for (std::size_t r = 0; r < sizes.size(); ++r)
    for (std::size_t k = 0; k < trials; ++k)
      work.push_back({r, sizes[r], mix64(seed ^ mix64(sizes[r] * 1'000'003ULL + k))});

  std::vector<QuicksortTrial> results(work.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr error;
  auto worker = [&] {
    try {
      run_on_big_stack([&] {
        for (std::size_t i = next++; i < work.size(); i = next++)
          results[i] = quicksort_trial(work[i].n, work[i].seed);
      });
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mu);
      if (!error) error = std::current_exception();
      next = work.size();
    }
  };
  jobs = std::max(1u, jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  QuicksortBench b;
  b.seed = seed;
  for (std::size_t r = 0; r < sizes.size(); ++r) {
    QuicksortRow row;
    row.n = sizes[r];
    row.trials = trials;
    b.rows.push_back(row);
  }
  for (std::size_t i = 0; i < work.size(); ++i) {
    QuicksortRow& row = b.rows[work[i].row];
    const QuicksortTrial& t = results[i];
    row.fresh_steps += static_cast<double>(t.fresh_steps);
    row.rerun_steps += static_cast<double>(t.rerun_steps);
    row.rerun_hits += static_cast<double>(t.rerun_hits);
    row.rerun_misses += static_cast<double>(t.rerun_misses);
    row.rerun_hits_all += static_cast<double>(t.rerun_hits_all);
    row.rerun_probes += static_cast<double>(t.rerun_probes);
  }
  for (auto& row : b.rows) {
    if (!row.trials) continue;
    const double k = static_cast<double>(row.trials);
    row.fresh_steps /= k;
    row.rerun_steps /= k;
    row.rerun_hits /= k;
    row.rerun_misses /= k;
    row.rerun_hits_all /= k;
    row.rerun_probes /= k;
  }
  return b;
}

nlohmann::json to_json(const QuicksortBench& b) {
  nlohmann::json out = {{"benchmark", "quicksort"}, {"seed", b.seed}, {"rows", nlohmann::json::array()}};
  for (const auto& r : b.rows) {
    out["rows"].push_back({{"n", r.n},
                           {"trials", r.trials},
                           {"fresh_steps", r.fresh_steps},
                           {"rerun_steps", r.rerun_steps},
                           {"rerun_hits", r.rerun_hits},
                           {"rerun_misses", r.rerun_misses},
                           {"rerun_hits_all", r.rerun_hits_all},
                           {"rerun_probes", r.rerun_probes}});
  }
  return out;
}

}  // namespace mfl
