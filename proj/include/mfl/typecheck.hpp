#pragma once

// The two typing judgments G;D |- t : T and G;D |- e : T.
//
// Return bodies and the operand of `!` are checked with the resource
// context emptied. A resource referenced there is reported as
// ResourceInReturn or ResourceInBang rather than as unbound.

#include "mfl/ast.hpp"
#include "mfl/errors.hpp"

namespace mfl {

/// Throws TypeError.
TypePtr check_term(const TypeContext& ctx, const TermPtr& t);
TypePtr check_expr(const TypeContext& ctx, const ExprPtr& e);

/// Checks declarations left to right, each one seeing the earlier names as
/// variables, and returns the type of main.
TypePtr check_program(const Program& p);

/// Well-formedness of a type annotation: `!` only over unit, int or boxes,
/// and no free type variables.
void check_type_wf(const TypePtr& t, Pos pos);

}  // namespace mfl
