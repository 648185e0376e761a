#include "mfl/mfl.h"

#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include "json.hpp"
#include "mfl/big_stack.hpp"
#include "mfl/diff.hpp"
#include "mfl/errors.hpp"
#include "mfl/eval_memo.hpp"
#include "mfl/eval_pure.hpp"
#include "mfl/gen.hpp"
#include "mfl/instrument.hpp"
#include "mfl/parser.hpp"
#include "mfl/prelude.hpp"
#include "mfl/printer.hpp"
#include "mfl/typecheck.hpp"

struct mfl_program {
  mfl::Program program;
};

struct mfl_result {
  std::string value;
  std::string stats_json;
  std::string trace_json;
  bool has_trace = false;
};

namespace {

thread_local std::string last_error;

mfl_status fail(mfl_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

std::string at(mfl::Pos p) { return std::to_string(p.line) + ":" + std::to_string(p.col) + ": "; }

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

mfl_status eval_status(mfl::EvalErrorKind k) {
  using K = mfl::EvalErrorKind;
  switch (k) {
    case K::DivisionByZero: return MFL_ERR_RUNTIME;
    case K::StepLimit:
    case K::DepthExceeded: return MFL_ERR_LIMIT;
    case K::Stuck:
    case K::DuplicateBranch:
    case K::NonIndexableValue: return MFL_ERR_BREACH;
  }
  return MFL_ERR_INTERNAL;
}

// Maps the library's exceptions to status codes and the thread's error text.
template <typename F>
mfl_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const mfl::SyntaxError& e) {
    return fail(MFL_ERR_SYNTAX, at(e.pos()) + "syntax error: " + e.what());
  } catch (const mfl::TypeError& e) {
    return fail(MFL_ERR_TYPE,
                at(e.pos()) + "type error: " + mfl::to_string(e.kind()) + ": " + e.what());
  } catch (const mfl::EvalError& e) {
    return fail(eval_status(e.kind()),
                std::string("runtime error: ") + mfl::to_string(e.kind()) + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return fail(MFL_ERR_INTERNAL, "internal error: out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(MFL_ERR_IO, std::string("io error: ") + e.what());
  } catch (const std::exception& e) {
    return fail(MFL_ERR_INTERNAL, std::string("internal error: ") + e.what());
  }
}

mfl::Fault to_fault(mfl_fault f) {
  switch (f) {
    case MFL_FAULT_SKIP_INSERT: return mfl::Fault::SkipInsert;
    case MFL_FAULT_WRONG_BRANCH: return mfl::Fault::WrongBranchInsert;
    default: return mfl::Fault::None;
  }
}

mfl::EvalConfig memo_config(const mfl_run_options& o) {
  mfl::EvalConfig cfg;
  cfg.cold = o.cold != 0;
  cfg.checked = o.checked != 0;
  cfg.fault = to_fault(o.fault);
  cfg.max_steps = o.max_steps;
  cfg.max_depth = o.max_depth;
  cfg.trace = o.trace != 0;
  return cfg;
}

}  // namespace

extern "C" {

const char* mfl_status_string(mfl_status s) {
  switch (s) {
    case MFL_OK: return "ok";
    case MFL_ERR_SYNTAX: return "syntax error";
    case MFL_ERR_TYPE: return "type error";
    case MFL_ERR_RUNTIME: return "runtime error";
    case MFL_ERR_LIMIT: return "resource limit";
    case MFL_ERR_BREACH: return "invariant breach";
    case MFL_MISMATCH: return "mismatch";
    case MFL_ERR_ARGUMENT: return "invalid argument";
    case MFL_ERR_IO: return "io error";
    case MFL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mfl_last_error(void) { return last_error.c_str(); }

void mfl_string_free(char* s) { std::free(s); }

mfl_status mfl_parse(const char* source, size_t length, mfl_program** out) {
  if (!source || !out) return fail(MFL_ERR_ARGUMENT, "invalid argument: null pointer");
  *out = nullptr;
  return guarded([&] {
    auto p = std::make_unique<mfl_program>();
    p->program = mfl::parse(std::string_view(source, length));
    *out = p.release();
    return MFL_OK;
  });
}

void mfl_program_free(mfl_program* p) { delete p; }

size_t mfl_corpus_count(void) { return mfl::corpus().size(); }

const char* mfl_corpus_name(size_t i) {
  return i < mfl::corpus().size() ? mfl::corpus()[i].name.c_str() : nullptr;
}

const char* mfl_corpus_source(size_t i) {
  return i < mfl::corpus().size() ? mfl::corpus()[i].source.c_str() : nullptr;
}

const char* mfl_corpus_expected(size_t i) {
  return i < mfl::corpus().size() ? mfl::corpus()[i].expected.c_str() : nullptr;
}

mfl_status mfl_check(const mfl_program* p, char** type_out) {
  if (!p) return fail(MFL_ERR_ARGUMENT, "invalid argument: null program");
  return guarded([&] {
    mfl::TypePtr t = mfl::check_program(p->program);
    if (type_out) *type_out = dup(mfl::print_type(t));
    return MFL_OK;
  });
}

mfl_status mfl_print(const mfl_program* p, char** out) {
  if (!p || !out) return fail(MFL_ERR_ARGUMENT, "invalid argument: null pointer");
  return guarded([&] {
    *out = dup(mfl::print_program(p->program));
    return MFL_OK;
  });
}

void mfl_run_options_init(mfl_run_options* o) {
  if (!o) return;
  o->semantics = MFL_MEMO;
  o->cold = 0;
  o->checked = 1;
  o->fault = MFL_FAULT_NONE;
  o->seed = 0;
  o->max_steps = 0;
  o->max_depth = 1'000'000;
  o->trace = 0;
}

mfl_status mfl_run(const mfl_program* p, const mfl_run_options* o, mfl_result** out) {
  if (!p || !o || !out) return fail(MFL_ERR_ARGUMENT, "invalid argument: null pointer");
  *out = nullptr;
  return guarded([&] {
    mfl::check_program(p->program);
    auto r = std::make_unique<mfl_result>();
    mfl::with_big_stack([&] {
      if (o->semantics == MFL_PURE) {
        mfl::PureEvaluator ev(mfl::PureConfig{o->max_steps, o->max_depth});
        mfl::Value v = ev.run(p->program);
        r->value = mfl::print_value(v, &ev.boxes());
        r->stats_json = mfl::stats_to_json(ev.stats()).dump(2);
      } else {
        mfl::Store st(o->seed);
        mfl::MemoEvaluator ev(st, memo_config(*o));
        mfl::Value v = ev.run(p->program);
        r->value = mfl::print_value(v, &st.boxes());
        r->stats_json = mfl::stats_to_json(ev.stats()).dump(2);
        if (o->trace) {
          r->trace_json = mfl::trace_to_json(ev.trace(), st).dump(2);
          r->has_trace = true;
        }
      }
    });
    *out = r.release();
    return MFL_OK;
  });
}

const char* mfl_result_value(const mfl_result* r) { return r ? r->value.c_str() : nullptr; }

const char* mfl_result_stats_json(const mfl_result* r) {
  return r ? r->stats_json.c_str() : nullptr;
}

const char* mfl_result_trace_json(const mfl_result* r) {
  return r && r->has_trace ? r->trace_json.c_str() : nullptr;
}

void mfl_result_free(mfl_result* r) { delete r; }

mfl_status mfl_diff(const mfl_program* p, const mfl_run_options* o, char** report_json) {
  if (!p || !o) return fail(MFL_ERR_ARGUMENT, "invalid argument: null pointer");
  return guarded([&] {
    mfl::check_program(p->program);
    mfl::DiffOptions opts;
    opts.memo = memo_config(*o);
    opts.seed = o->seed;
    opts.max_steps = o->max_steps;
    opts.max_depth = o->max_depth;
    mfl::DiffReport rep = mfl::with_big_stack([&] { return mfl::diff_check(p->program, opts); });
    if (report_json) {
      nlohmann::json j = {{"verdict", mfl::to_string(rep.verdict)},
                          {"memo_value", rep.memo_value},
                          {"pure_value", rep.pure_value},
                          {"memo_stats", mfl::stats_to_json(rep.memo_stats)},
                          {"pure_stats", mfl::stats_to_json(rep.pure_stats)},
                          {"tag_bijection", rep.tag_bijection},
                          {"detail", rep.detail}};
      *report_json = dup(j.dump(2));
    }
    switch (rep.verdict) {
      case mfl::Verdict::Ok: return MFL_OK;
      case mfl::Verdict::Mismatch: return fail(MFL_MISMATCH, "mismatch: " + rep.detail);
      case mfl::Verdict::Breach: return fail(MFL_ERR_BREACH, "invariant breach: " + rep.detail);
      case mfl::Verdict::Skipped: return fail(MFL_ERR_LIMIT, "resource limit: " + rep.detail);
    }
    return MFL_ERR_INTERNAL;
  });
}

void mfl_fuzz_options_init(mfl_fuzz_options* o) {
  if (!o) return;
  mfl::FuzzOptions d;
  o->count = d.count;
  o->seed = 0;
  o->fault = MFL_FAULT_NONE;
  o->checked = 1;
  o->cold = 0;
  o->max_steps = d.max_steps;
  o->out_dir = nullptr;
}

mfl_status mfl_fuzz(const mfl_fuzz_options* o, char** summary_json) {
  if (!o) return fail(MFL_ERR_ARGUMENT, "invalid argument: null options");
  return guarded([&] {
    mfl::FuzzOptions opts;
    opts.count = o->count;
    opts.seed = o->seed;
    opts.fault = to_fault(o->fault);
    opts.checked = o->checked != 0;
    opts.cold = o->cold != 0;
    opts.max_steps = o->max_steps;
    if (o->out_dir) opts.out_dir = o->out_dir;
    mfl::FuzzSummary s = mfl::with_big_stack([&] { return mfl::fuzz(opts); });
    if (summary_json) {
      nlohmann::json j = {{"seed", o->seed},
                          {"generated", s.generated},
                          {"ok", s.ok},
                          {"mismatches", s.mismatches},
                          {"breaches", s.breaches},
                          {"skipped", s.skipped},
                          {"ill_typed", s.ill_typed},
                          {"memo_hits", s.memo_hits},
                          {"failures", s.failures}};
      *summary_json = dup(j.dump(2));
    }
    if (s.breaches) return fail(MFL_ERR_BREACH, "invariant breach in fuzzing");
    if (s.mismatches || s.ill_typed) return fail(MFL_MISMATCH, "mismatch in fuzzing");
    return MFL_OK;
  });
}

mfl_status mfl_bench_quicksort(const size_t* sizes, size_t n_sizes, size_t trials, uint64_t seed,
                               unsigned jobs, char** json) {
  if ((!sizes && n_sizes) || !json) return fail(MFL_ERR_ARGUMENT, "invalid argument: null pointer");
  return guarded([&] {
    std::vector<std::size_t> sz(sizes, sizes + n_sizes);
    *json = dup(mfl::to_json(mfl::bench_quicksort(sz, trials, seed, jobs)).dump(2));
    return MFL_OK;
  });
}

mfl_status mfl_bench_overhead(const int64_t* sizes, size_t n_sizes, uint64_t seed, char** json) {
  if ((!sizes && n_sizes) || !json) return fail(MFL_ERR_ARGUMENT, "invalid argument: null pointer");
  return guarded([&] {
    std::vector<std::int64_t> sz(sizes, sizes + n_sizes);
    auto rows = mfl::with_big_stack([&] { return mfl::fib_overhead(sz, seed); });
    *json = dup(mfl::to_json(rows, seed).dump(2));
    return MFL_OK;
  });
}

}  // extern "C"
