#pragma once

// Core syntax of MFL: types, terms, expressions, typing contexts.
//
// Terms and expressions are immutable trees shared through shared_ptr.
// Run-time values are terms too (the evaluators are substitution based),
// so every node caches its set of free names; substitution stops at any
// subtree that does not mention the substituted names.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mfl {

struct Pos {
  int line = 0;
  int col = 0;
};

enum class Location : std::uint64_t {};
enum class BoxTag : std::uint64_t {};

constexpr std::uint64_t raw(Location l) { return static_cast<std::uint64_t>(l); }
constexpr std::uint64_t raw(BoxTag t) { return static_cast<std::uint64_t>(t); }

// ---------------------------------------------------------------------------
// Types

enum class TypeKind { Unit, Int, Box, Bang, Prod, Sum, Rec, Var, MArrow };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

/// Box and Bang use `left`; Prod, Sum and MArrow use both; Rec binds `var`
/// over `left`; Var names a Rec-bound type variable.
struct Type {
  TypeKind kind;
  TypePtr left;
  TypePtr right;
  std::string var;
};

namespace ty {
TypePtr unit();
TypePtr integer();
TypePtr box(TypePtr t);
TypePtr bang(TypePtr t);
TypePtr prod(TypePtr a, TypePtr b);
TypePtr sum(TypePtr a, TypePtr b);
TypePtr rec(std::string var, TypePtr body);
TypePtr var(std::string name);
TypePtr arrow(TypePtr a, TypePtr b);
}  // namespace ty

/// Unit, Int and boxed types: the types whose values have an index.
bool is_indexable(const Type& t);

/// Structural equality, alpha-equivalence on Rec binders.
bool type_equal(const TypePtr& a, const TypePtr& b);

/// [replacement/var]body. `replacement` must be closed.
TypePtr subst_type(const TypePtr& body, const std::string& var, const TypePtr& replacement);

/// One-step unfolding of a Rec type: [rec u.t / u] t.
TypePtr unfold(const TypePtr& rec_type);

// ---------------------------------------------------------------------------
// Names

enum class Sort : std::uint8_t { Variable, Resource };

struct FreeName {
  Sort sort;
  std::string name;
  auto operator<=>(const FreeName&) const = default;
};

/// Sorted, duplicate free.
using FreeSet = std::vector<FreeName>;

// ---------------------------------------------------------------------------
// Terms and expressions

enum class TermKind {
  Var,
  Res,
  Unit,
  Int,
  PrimOp,
  Pair,
  MFun,
  MFunVal,
  Apply,
  Bang,
  Inl,
  Inr,
  Roll,
  Unroll,
  Box,
  BoxVal,
  Unbox,
  KeyOf,
  Case,
  Split,
};

enum class PrimOpKind { Add, Sub, Mul, Div, Lt, Le, Eq, IntToSum };

std::string_view primop_symbol(PrimOpKind op);
std::size_t primop_arity(PrimOpKind op);

enum class ExprKind { Return, LetBang, LetPair, MCase };

struct Term;
struct Expr;
using TermPtr = std::shared_ptr<const Term>;
using ExprPtr = std::shared_ptr<const Expr>;
using Value = TermPtr;

// Field usage per kind:
//   Var, Res        x = name
//   Int             num = literal
//   PrimOp          op, kids = operands
//   Pair, Apply     kids[0], kids[1]
//   MFun            x = self name, y = resource name, ty1 -> ty2, body
//   MFunVal         as MFun, plus num = location
//   Bang, Unroll, Box, Unbox, KeyOf   kids[0]
//   Roll            kids[0], ty1 = the Rec type being introduced
//   Inl, Inr        kids[0], ty1 + ty2 = the sum type
//   BoxVal          num = tag
//   Case            kids = {scrutinee, inl arm, inr arm}; x, y = arm binders
//   Split           kids = {scrutinee, body}; x, y = component binders
// Case and Split bind ordinary variables.
struct Term {
  TermKind kind{};
  Pos pos;
  std::int64_t num = 0;
  PrimOpKind op{};
  std::string x;
  std::string y;
  TypePtr ty1;
  TypePtr ty2;
  std::vector<TermPtr> kids;
  ExprPtr body;
  FreeSet free;

  bool closed() const { return free.empty(); }
  bool is_value() const;
  Location location() const { return static_cast<Location>(num); }
  BoxTag tag() const { return static_cast<BoxTag>(num); }
};

// Field usage per kind:
//   Return   term
//   LetBang  x : ty1 (nullable, taken from the scrutinee) = term in e1
//   LetPair  (x : ty1, y : ty2) = term in e1   (annotations nullable)
//   MCase    term of inl x : ty1 => e1 | inr y : ty2 => e2
// LetBang binds a variable; LetPair and MCase bind resources.
struct Expr {
  ExprKind kind{};
  Pos pos;
  std::string x;
  std::string y;
  TypePtr ty1;
  TypePtr ty2;
  TermPtr term;
  ExprPtr e1;
  ExprPtr e2;
  FreeSet free;
};

namespace mk {
TermPtr var(std::string name, Pos p = {});
TermPtr res(std::string name, Pos p = {});
TermPtr unit(Pos p = {});
TermPtr integer(std::int64_t n, Pos p = {});
TermPtr primop(PrimOpKind op, std::vector<TermPtr> args, Pos p = {});
TermPtr pair(TermPtr a, TermPtr b, Pos p = {});
TermPtr mfun(std::string self, std::string param, TypePtr arg, TypePtr result, ExprPtr body,
             Pos p = {});
TermPtr mfun_val(Location loc, std::string self, std::string param, TypePtr arg, TypePtr result,
                 ExprPtr body, Pos p = {});
TermPtr apply(TermPtr f, TermPtr arg, Pos p = {});
TermPtr bang(TermPtr t, Pos p = {});
TermPtr inl(TermPtr t, TypePtr left, TypePtr right, Pos p = {});
TermPtr inr(TermPtr t, TypePtr left, TypePtr right, Pos p = {});
TermPtr roll(TermPtr t, TypePtr rec_type, Pos p = {});
TermPtr unroll(TermPtr t, Pos p = {});
TermPtr box(TermPtr t, Pos p = {});
TermPtr box_val(BoxTag tag, Pos p = {});
TermPtr unbox(TermPtr t, Pos p = {});
TermPtr keyof(TermPtr t, Pos p = {});
TermPtr term_case(TermPtr scrutinee, std::string x1, TermPtr arm1, std::string x2, TermPtr arm2,
                  Pos p = {});
TermPtr split(TermPtr scrutinee, std::string x1, std::string x2, TermPtr body, Pos p = {});
/// `if c then a else b`, i.e. Case(int2sum c, _ => a, _ => b).
TermPtr if_then_else(TermPtr cond, TermPtr then_t, TermPtr else_t, Pos p = {});

ExprPtr ret(TermPtr t, Pos p = {});
ExprPtr let_bang(std::string x, TypePtr eta, TermPtr t, ExprPtr body, Pos p = {});
ExprPtr let_pair(std::string a1, TypePtr t1, std::string a2, TypePtr t2, TermPtr t, ExprPtr body,
                 Pos p = {});
ExprPtr mcase(TermPtr t, std::string a1, TypePtr t1, ExprPtr e1, std::string a2, TypePtr t2,
              ExprPtr e2, Pos p = {});
}  // namespace mk

/// Rebuild a node with new children, recomputing the free set.
TermPtr rebuild(const Term& proto, std::vector<TermPtr> kids, ExprPtr body);
ExprPtr rebuild(const Expr& proto, TermPtr term, ExprPtr e1, ExprPtr e2);

// ---------------------------------------------------------------------------
// Operations

std::vector<std::string> free_resources(const TermPtr& t);
std::vector<std::string> free_resources(const ExprPtr& e);

struct Binding {
  Sort sort;
  std::string name;
  TermPtr value;  // closed
};
using Subst = std::vector<Binding>;

/// Simultaneous substitution of closed terms. Capture cannot occur because
/// every substituted term is closed.
TermPtr substitute(const TermPtr& t, const Subst& s);
ExprPtr substitute(const ExprPtr& e, const Subst& s);

/// Replace every MFunVal by the corresponding MFun (location erased).
TermPtr erase(const TermPtr& t);
ExprPtr erase(const ExprPtr& e);

/// Structural equality ignoring source positions.
bool term_equal(const TermPtr& a, const TermPtr& b);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// ---------------------------------------------------------------------------
// Contexts and programs

struct TypeContext {
  std::map<std::string, TypePtr> gamma;  // variables
  std::map<std::string, TypePtr> delta;  // resources
};

struct Decl {
  std::string name;
  TermPtr term;
  Pos pos;
};

struct Program {
  std::vector<Decl> decls;
  TermPtr main;
};

/// Copy of `p` with its main term replaced.
Program with_main(const Program& p, TermPtr main);

}  // namespace mfl
