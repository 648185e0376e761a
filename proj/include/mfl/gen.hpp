#pragma once

// Random well-typed programs and the fuzzing loop built on diff_check.

#include <cstdint>
#include <string>
#include <vector>

#include "mfl/ast.hpp"
#include "mfl/diff.hpp"

namespace mfl {

struct GenOptions {
  std::size_t max_size = 60;  // nodes, declarations and main together
  std::int64_t min_int = -8;
  std::int64_t max_int = 8;
  int max_decls = 3;
};

/// Top-down, type-directed generation. Declarations are memoized functions
/// that may call earlier ones; a declaration over `!int` may call itself
/// with a decremented argument, to a depth of at most 8. `keyof` is never
/// generated.
Program generate_program(std::uint64_t seed, const GenOptions& opts = {});

std::size_t term_size(const TermPtr& t);
std::size_t expr_size(const ExprPtr& e);
std::size_t program_size(const Program& p);

struct FuzzOptions {
  std::uint64_t count = 500;  // programs that must reach a verdict
  std::uint64_t seed = 0;
  Fault fault = Fault::None;
  bool checked = true;
  bool cold = false;
  std::uint64_t max_steps = 200'000;
  std::string out_dir;  // counterexamples go here; empty: not written
  GenOptions gen;
};

struct FuzzSummary {
  std::uint64_t generated = 0;
  std::uint64_t ok = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t breaches = 0;
  std::uint64_t skipped = 0;
  std::uint64_t ill_typed = 0;  // generator defects; expected to stay 0
  std::uint64_t memo_hits = 0;
  std::vector<std::string> failures;  // files written, or program texts if out_dir is empty
};

FuzzSummary fuzz(const FuzzOptions& opts);

}  // namespace mfl
