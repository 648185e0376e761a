#pragma once

#include <string>

#include "mfl/ast.hpp"
#include "mfl/memo_store.hpp"

namespace mfl {

/// Types are printed with minimal parentheses and parse back to an equal type.
std::string print_type(const TypePtr& t);

/// Terms, expressions and programs are printed fully parenthesized in the
/// concrete syntax; parsing the output yields an equal tree. MFunVal prints
/// as its erasure and BoxVal as `box#N`, which does not parse.
std::string print_term(const TermPtr& t);
std::string print_expr(const ExprPtr& e);
std::string print_program(const Program& p);

/// Human-readable rendering of a run-time value. With a registry, boxes are
/// shown by content and boxed lists as `[1, 2, 3]`.
std::string print_value(const Value& v, const BoxRegistry* boxes = nullptr);

}  // namespace mfl
