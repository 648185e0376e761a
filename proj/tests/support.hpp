#pragma once

// Helpers and independent oracles shared by the unit tests and the
// acceptance binary. Oracles are written against the host language only;
// none of them calls into the evaluators.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mfl/ast.hpp"
#include "mfl/big_stack.hpp"
#include "mfl/errors.hpp"
#include "mfl/eval_memo.hpp"
#include "mfl/eval_pure.hpp"
#include "mfl/memo_store.hpp"
#include "mfl/parser.hpp"
#include "mfl/printer.hpp"
#include "mfl/typecheck.hpp"

namespace mfl::testing {

struct MemoRun {
  std::unique_ptr<Store> store;
  Value value;
  std::string printed;
  EvalStats stats;
  std::vector<TraceEvent> trace;
};

inline MemoRun run_memo(const Program& p, std::uint64_t seed = 1, EvalConfig cfg = {}) {
  return with_big_stack([&] {
    MemoRun r;
    r.store = std::make_unique<Store>(seed);
    MemoEvaluator ev(*r.store, cfg);
    r.value = ev.run(p);
    r.printed = print_value(r.value, &r.store->boxes());
    r.stats = ev.stats();
    r.trace = ev.trace();
    return r;
  });
}

struct PureRun {
  std::string printed;
  EvalStats stats;
};

inline PureRun run_pure(const Program& p) {
  return with_big_stack([&] {
    PureEvaluator ev;
    Value v = ev.run(p);
    return PureRun{print_value(v, &ev.boxes()), ev.stats()};
  });
}

/// Every (location, branch, value) binding of the store, printed.
inline std::map<std::pair<std::uint64_t, std::string>, std::string> snapshot(const Store& st) {
  std::map<std::pair<std::uint64_t, std::string>, std::string> out;
  for (std::uint64_t l = 1; l <= st.size(); ++l) {
    for (const auto& [b, v] : st.table(Location{l}).entries()) {
      std::string key;
      for (const auto& ev : b) {
        const EncodedEvent e = encode_event(ev);
        key += std::to_string(e.kind) + ":" + std::to_string(e.payload) + ";";
      }
      out[{l, key}] = print_term(v);
    }
  }
  return out;
}

/// Source of a boxed-list literal built by folding hcons over `xs`.
inline std::string hcons_list(const std::vector<std::int64_t>& xs) {
  std::string s = "!empty";
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
    const std::string k = *it < 0 ? "(" + std::to_string(*it) + ")" : std::to_string(*it);
    s = "!(hcons (!" + k + ", " + s + "))";
  }
  return s;
}

inline std::string list_text(const std::vector<std::int64_t>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
  return s + "]";
}

namespace oracle {

/// Memoized call tree of mfib: a call with an argument seen before is a
/// hit, otherwise a miss whose body calls n-1 then n-2 when n >= 2.
struct FibCounts {
  std::uint64_t misses = 0;
  std::uint64_t hits = 0;
};

inline void fib_calls(std::int64_t n, std::set<std::int64_t>& done, FibCounts& c) {
  if (done.count(n)) {
    ++c.hits;
    return;
  }
  ++c.misses;
  if (n >= 2) {
    fib_calls(n - 1, done, c);
    fib_calls(n - 2, done, c);
  }
  done.insert(n);
}

inline FibCounts fib_counts(std::int64_t n) {
  std::set<std::int64_t> done;
  FibCounts c;
  fib_calls(n, done, c);
  return c;
}

inline std::int64_t fib(std::int64_t n) {
  std::int64_t a = 0, b = 1;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t t = a + b;
    a = b;
    b = t;
  }
  return a;
}

/// Best total value over all subsets of `items` (weight, value) within `cap`.
inline std::int64_t knapsack(std::int64_t cap, const std::vector<std::pair<std::int64_t, std::int64_t>>& items) {
  std::int64_t best = 0;
  const std::size_t n = items.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::int64_t w = 0, v = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        w += items[i].first;
        v += items[i].second;
      }
    if (w <= cap) best = std::max(best, v);
  }
  return best;
}

}  // namespace oracle

/// The negative typechecking suite: each program must be rejected with the
/// given error kind.
struct NegativeCase {
  const char* name;
  const char* source;  // null: `term` is checked instead
  TypeErrorKind kind;
  TermPtr term = nullptr;
};

/// Parses or builds the case and typechecks it; returns the error kind, or
/// nothing if the program was accepted.
inline std::optional<TypeErrorKind> rejection(const NegativeCase& c) {
  try {
    if (c.source)
      check_program(parse(c.source));
    else
      check_term(TypeContext{}, c.term);
  } catch (const TypeError& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline const std::vector<NegativeCase>& negative_cases() {
  using K = TypeErrorKind;
  static const std::vector<NegativeCase> cases = {
      {"resource in return",
       "main mfun f (a : !int) : !int is return a end", K::ResourceInReturn},
      {"resource in return under a pair",
       "main mfun f (a : !int) : int * !int is return (1, a) end", K::ResourceInReturn},
      {"resource from let* in return",
       "main mfun f (a : int * int) : int is let* (x, y) = a in return x end", K::ResourceInReturn},
      {"resource from mcase in return",
       "main mfun f (a : int + int) : int is mcase a of inl x => return x | inr y => return 0 end end",
       K::ResourceInReturn},
      {"resource in bang body",
       "main mfun f (a : int) : int is let !x = !a in return x end", K::ResourceInBang},
      {"bang of product", "main !(1, 2)", K::NotIndexable},
      {"bang of sum", "main !(inl[int + int] 1)", K::NotIndexable},
      {"bang annotation over arrow",
       "main mfun f (a : !(!int -> int)) : int is return 0 end", K::NotIndexable},
      {"unbound resource", nullptr, K::UnboundResource,
       mk::mfun("f", "a", ty::bang(ty::integer()), ty::integer(),
                mk::let_bang("x", nullptr, mk::res("b"), mk::ret(mk::var("x"))))},
      {"unbound variable", "main y + 1", K::UnboundVar},
      {"decl used before definition", "val f = g\nval g = 1\nmain f", K::UnboundVar},
      {"sum arm type mismatch",
       "main case inl[int + int] 1 of inl x => x | inr y => () end", K::Mismatch},
      {"mcase arm type mismatch",
       "main mfun f (a : int + int) : int is "
       "mcase a of inl x => return 1 | inr y => return () end end",
       K::Mismatch},
      {"if branch mismatch", "main if 1 then 2 else ()", K::Mismatch},
      {"apply non-function", "main 3 !4", K::Mismatch},
      {"argument type mismatch",
       "val f = mfun f (a : !int) : int is return 0 end\nmain f ()", K::Mismatch},
      {"body type mismatch", "main mfun f (a : !int) : int is return () end", K::Mismatch},
      {"let! of non-bang", "main mfun f (a : int) : int is let !x = a in return x end", K::Mismatch},
      {"unbox of int", "main unbox 3", K::Mismatch},
      {"let* of non-product", "main mfun f (a : !int) : int is let* (x, y) = a in return 0 end",
       K::Mismatch},
  };
  return cases;
}

}  // namespace mfl::testing
