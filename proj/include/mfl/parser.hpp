#pragma once

// Concrete syntax for `.mfl` files. See docs/grammar.md.

#include <string_view>

#include "mfl/ast.hpp"
#include "mfl/errors.hpp"

namespace mfl {

/// Parse a whole program: `type` and `val` declarations followed by one
/// `main` term. Throws SyntaxError (first error only) or DuplicateDecl.
Program parse(std::string_view source);

/// Parse a closed, stand-alone term (no declarations in scope).
TermPtr parse_term(std::string_view source);

/// Parse a stand-alone expression. Names listed in `resources` resolve as
/// resources, everything else as variables.
ExprPtr parse_expr(std::string_view source, const std::vector<std::string>& resources = {});

TypePtr parse_type(std::string_view source);

}  // namespace mfl
