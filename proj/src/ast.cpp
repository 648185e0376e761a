#include "mfl/ast.hpp"

#include <algorithm>
#include <utility>

namespace mfl {

// ---------------------------------------------------------------------------
// Types

namespace ty {
namespace {
TypePtr make(TypeKind k, TypePtr l = nullptr, TypePtr r = nullptr, std::string v = {}) {
  return std::make_shared<const Type>(Type{k, std::move(l), std::move(r), std::move(v)});
}
}  // namespace

TypePtr unit() {
  static const TypePtr t = make(TypeKind::Unit);
  return t;
}
TypePtr integer() {
  static const TypePtr t = make(TypeKind::Int);
  return t;
}
TypePtr box(TypePtr t) { return make(TypeKind::Box, std::move(t)); }
TypePtr bang(TypePtr t) { return make(TypeKind::Bang, std::move(t)); }
TypePtr prod(TypePtr a, TypePtr b) { return make(TypeKind::Prod, std::move(a), std::move(b)); }
TypePtr sum(TypePtr a, TypePtr b) { return make(TypeKind::Sum, std::move(a), std::move(b)); }
TypePtr rec(std::string var, TypePtr body) {
  return make(TypeKind::Rec, std::move(body), nullptr, std::move(var));
}
TypePtr var(std::string name) { return make(TypeKind::Var, nullptr, nullptr, std::move(name)); }
TypePtr arrow(TypePtr a, TypePtr b) { return make(TypeKind::MArrow, std::move(a), std::move(b)); }
}  // namespace ty

bool is_indexable(const Type& t) {
  return t.kind == TypeKind::Unit || t.kind == TypeKind::Int || t.kind == TypeKind::Box;
}

namespace {

using BoundPairs = std::vector<std::pair<std::string, std::string>>;

bool type_equal_in(const TypePtr& a, const TypePtr& b, BoundPairs& bound) {
  if (a == b && bound.empty()) return true;
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Unit:
    case TypeKind::Int:
      return true;
    case TypeKind::Var: {
      for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
        const bool lhs = it->first == a->var;
        const bool rhs = it->second == b->var;
        if (lhs || rhs) return lhs && rhs;
      }
      return a->var == b->var;
    }
    case TypeKind::Box:
    case TypeKind::Bang:
      return type_equal_in(a->left, b->left, bound);
    case TypeKind::Prod:
    case TypeKind::Sum:
    case TypeKind::MArrow:
      return type_equal_in(a->left, b->left, bound) && type_equal_in(a->right, b->right, bound);
    case TypeKind::Rec: {
      bound.emplace_back(a->var, b->var);
      const bool eq = type_equal_in(a->left, b->left, bound);
      bound.pop_back();
      return eq;
    }
  }
  return false;
}

}  // namespace

bool type_equal(const TypePtr& a, const TypePtr& b) {
  BoundPairs bound;
  return type_equal_in(a, b, bound);
}

TypePtr subst_type(const TypePtr& body, const std::string& var, const TypePtr& replacement) {
  if (!body) return body;
  switch (body->kind) {
    case TypeKind::Unit:
    case TypeKind::Int:
      return body;
    case TypeKind::Var:
      return body->var == var ? replacement : body;
    case TypeKind::Box:
      return ty::box(subst_type(body->left, var, replacement));
    case TypeKind::Bang:
      return ty::bang(subst_type(body->left, var, replacement));
    case TypeKind::Prod:
      return ty::prod(subst_type(body->left, var, replacement),
                      subst_type(body->right, var, replacement));
    case TypeKind::Sum:
      return ty::sum(subst_type(body->left, var, replacement),
                     subst_type(body->right, var, replacement));
    case TypeKind::MArrow:
      return ty::arrow(subst_type(body->left, var, replacement),
                       subst_type(body->right, var, replacement));
    case TypeKind::Rec:
      if (body->var == var) return body;
      return ty::rec(body->var, subst_type(body->left, var, replacement));
  }
  return body;
}

TypePtr unfold(const TypePtr& rec_type) {
  return subst_type(rec_type->left, rec_type->var, rec_type);
}

// ---------------------------------------------------------------------------
// Primitive operators

std::string_view primop_symbol(PrimOpKind op) {
  switch (op) {
    case PrimOpKind::Add: return "+";
    case PrimOpKind::Sub: return "-";
    case PrimOpKind::Mul: return "*";
    case PrimOpKind::Div: return "div";
    case PrimOpKind::Lt: return "<";
    case PrimOpKind::Le: return "<=";
    case PrimOpKind::Eq: return "==";
    case PrimOpKind::IntToSum: return "int2sum";
  }
  return "?";
}

std::size_t primop_arity(PrimOpKind op) { return op == PrimOpKind::IntToSum ? 1 : 2; }

// ---------------------------------------------------------------------------
// Free-name bookkeeping

namespace {

void merge_into(FreeSet& acc, const FreeSet& more) {
  if (more.empty()) return;
  if (acc.empty()) {
    acc = more;
    return;
  }
  FreeSet out;
  out.reserve(acc.size() + more.size());
  std::set_union(acc.begin(), acc.end(), more.begin(), more.end(), std::back_inserter(out));
  acc = std::move(out);
}

void merge_without(FreeSet& acc, const FreeSet& more, Sort sort, const std::string& a,
                   const std::string* b = nullptr) {
  if (more.empty()) return;
  FreeSet filtered;
  filtered.reserve(more.size());
  for (const auto& n : more) {
    if (n.sort == sort && (n.name == a || (b && n.name == *b))) continue;
    filtered.push_back(n);
  }
  merge_into(acc, filtered);
}

void compute_free(Term& t) {
  t.free.clear();
  switch (t.kind) {
    case TermKind::Var:
      t.free.push_back({Sort::Variable, t.x});
      return;
    case TermKind::Res:
      t.free.push_back({Sort::Resource, t.x});
      return;
    case TermKind::MFun:
    case TermKind::MFunVal: {
      FreeSet inner;
      merge_without(inner, t.body->free, Sort::Resource, t.y);
      merge_without(t.free, inner, Sort::Variable, t.x);
      return;
    }
    case TermKind::Case:
      merge_into(t.free, t.kids[0]->free);
      merge_without(t.free, t.kids[1]->free, Sort::Variable, t.x);
      merge_without(t.free, t.kids[2]->free, Sort::Variable, t.y);
      return;
    case TermKind::Split:
      merge_into(t.free, t.kids[0]->free);
      merge_without(t.free, t.kids[1]->free, Sort::Variable, t.x, &t.y);
      return;
    default:
      for (const auto& k : t.kids) merge_into(t.free, k->free);
      return;
  }
}

void compute_free(Expr& e) {
  e.free.clear();
  merge_into(e.free, e.term->free);
  switch (e.kind) {
    case ExprKind::Return:
      return;
    case ExprKind::LetBang:
      merge_without(e.free, e.e1->free, Sort::Variable, e.x);
      return;
    case ExprKind::LetPair:
      merge_without(e.free, e.e1->free, Sort::Resource, e.x, &e.y);
      return;
    case ExprKind::MCase:
      merge_without(e.free, e.e1->free, Sort::Resource, e.x);
      merge_without(e.free, e.e2->free, Sort::Resource, e.y);
      return;
  }
}

TermPtr finish(Term t) {
  compute_free(t);
  return std::make_shared<const Term>(std::move(t));
}

ExprPtr finish(Expr e) {
  compute_free(e);
  return std::make_shared<const Expr>(std::move(e));
}

Term node(TermKind k, Pos p) {
  Term t;
  t.kind = k;
  t.pos = p;
  return t;
}

}  // namespace

bool Term::is_value() const {
  switch (kind) {
    case TermKind::Unit:
    case TermKind::Int:
    case TermKind::MFunVal:
    case TermKind::BoxVal:
      return true;
    case TermKind::MFun:
      return closed();
    case TermKind::Pair:
      return kids[0]->is_value() && kids[1]->is_value();
    case TermKind::Bang:
    case TermKind::Inl:
    case TermKind::Inr:
    case TermKind::Roll:
      return kids[0]->is_value();
    default:
      return false;
  }
}

namespace mk {

TermPtr var(std::string name, Pos p) {
  auto t = node(TermKind::Var, p);
  t.x = std::move(name);
  return finish(std::move(t));
}

TermPtr res(std::string name, Pos p) {
  auto t = node(TermKind::Res, p);
  t.x = std::move(name);
  return finish(std::move(t));
}

TermPtr unit(Pos p) {
  if (p.line == 0) {
    static const TermPtr shared = finish(node(TermKind::Unit, {}));
    return shared;
  }
  return finish(node(TermKind::Unit, p));
}

TermPtr integer(std::int64_t n, Pos p) {
  auto t = node(TermKind::Int, p);
  t.num = n;
  return finish(std::move(t));
}

TermPtr primop(PrimOpKind op, std::vector<TermPtr> args, Pos p) {
  auto t = node(TermKind::PrimOp, p);
  t.op = op;
  t.kids = std::move(args);
  return finish(std::move(t));
}

TermPtr pair(TermPtr a, TermPtr b, Pos p) {
  auto t = node(TermKind::Pair, p);
  t.kids = {std::move(a), std::move(b)};
  return finish(std::move(t));
}

TermPtr mfun(std::string self, std::string param, TypePtr arg, TypePtr result, ExprPtr body,
             Pos p) {
  auto t = node(TermKind::MFun, p);
  t.x = std::move(self);
  t.y = std::move(param);
  t.ty1 = std::move(arg);
  t.ty2 = std::move(result);
  t.body = std::move(body);
  return finish(std::move(t));
}

TermPtr mfun_val(Location loc, std::string self, std::string param, TypePtr arg, TypePtr result,
                 ExprPtr body, Pos p) {
  auto t = node(TermKind::MFunVal, p);
  t.num = static_cast<std::int64_t>(raw(loc));
  t.x = std::move(self);
  t.y = std::move(param);
  t.ty1 = std::move(arg);
  t.ty2 = std::move(result);
  t.body = std::move(body);
  return finish(std::move(t));
}

TermPtr apply(TermPtr f, TermPtr arg, Pos p) {
  auto t = node(TermKind::Apply, p);
  t.kids = {std::move(f), std::move(arg)};
  return finish(std::move(t));
}

namespace {
TermPtr unary(TermKind k, TermPtr sub, Pos p) {
  auto t = node(k, p);
  t.kids = {std::move(sub)};
  return finish(std::move(t));
}
}  // namespace

TermPtr bang(TermPtr t, Pos p) { return unary(TermKind::Bang, std::move(t), p); }

TermPtr inl(TermPtr sub, TypePtr left, TypePtr right, Pos p) {
  auto t = node(TermKind::Inl, p);
  t.kids = {std::move(sub)};
  t.ty1 = std::move(left);
  t.ty2 = std::move(right);
  return finish(std::move(t));
}

TermPtr inr(TermPtr sub, TypePtr left, TypePtr right, Pos p) {
  auto t = node(TermKind::Inr, p);
  t.kids = {std::move(sub)};
  t.ty1 = std::move(left);
  t.ty2 = std::move(right);
  return finish(std::move(t));
}

TermPtr roll(TermPtr sub, TypePtr rec_type, Pos p) {
  auto t = node(TermKind::Roll, p);
  t.kids = {std::move(sub)};
  t.ty1 = std::move(rec_type);
  return finish(std::move(t));
}

TermPtr unroll(TermPtr t, Pos p) { return unary(TermKind::Unroll, std::move(t), p); }
TermPtr box(TermPtr t, Pos p) { return unary(TermKind::Box, std::move(t), p); }
TermPtr unbox(TermPtr t, Pos p) { return unary(TermKind::Unbox, std::move(t), p); }
TermPtr keyof(TermPtr t, Pos p) { return unary(TermKind::KeyOf, std::move(t), p); }

TermPtr box_val(BoxTag tag, Pos p) {
  auto t = node(TermKind::BoxVal, p);
  t.num = static_cast<std::int64_t>(raw(tag));
  return finish(std::move(t));
}

TermPtr term_case(TermPtr scrutinee, std::string x1, TermPtr arm1, std::string x2, TermPtr arm2,
                  Pos p) {
  auto t = node(TermKind::Case, p);
  t.kids = {std::move(scrutinee), std::move(arm1), std::move(arm2)};
  t.x = std::move(x1);
  t.y = std::move(x2);
  return finish(std::move(t));
}

TermPtr split(TermPtr scrutinee, std::string x1, std::string x2, TermPtr body, Pos p) {
  auto t = node(TermKind::Split, p);
  t.kids = {std::move(scrutinee), std::move(body)};
  t.x = std::move(x1);
  t.y = std::move(x2);
  return finish(std::move(t));
}

TermPtr if_then_else(TermPtr cond, TermPtr then_t, TermPtr else_t, Pos p) {
  return term_case(primop(PrimOpKind::IntToSum, {std::move(cond)}, p), "_", std::move(then_t),
                   "_", std::move(else_t), p);
}

ExprPtr ret(TermPtr t, Pos p) {
  Expr e;
  e.kind = ExprKind::Return;
  e.pos = p;
  e.term = std::move(t);
  return finish(std::move(e));
}

ExprPtr let_bang(std::string x, TypePtr eta, TermPtr t, ExprPtr body, Pos p) {
  Expr e;
  e.kind = ExprKind::LetBang;
  e.pos = p;
  e.x = std::move(x);
  e.ty1 = std::move(eta);
  e.term = std::move(t);
  e.e1 = std::move(body);
  return finish(std::move(e));
}

ExprPtr let_pair(std::string a1, TypePtr t1, std::string a2, TypePtr t2, TermPtr t, ExprPtr body,
                 Pos p) {
  Expr e;
  e.kind = ExprKind::LetPair;
  e.pos = p;
  e.x = std::move(a1);
  e.ty1 = std::move(t1);
  e.y = std::move(a2);
  e.ty2 = std::move(t2);
  e.term = std::move(t);
  e.e1 = std::move(body);
  return finish(std::move(e));
}

ExprPtr mcase(TermPtr t, std::string a1, TypePtr t1, ExprPtr e1, std::string a2, TypePtr t2,
              ExprPtr e2, Pos p) {
  Expr e;
  e.kind = ExprKind::MCase;
  e.pos = p;
  e.term = std::move(t);
  e.x = std::move(a1);
  e.ty1 = std::move(t1);
  e.e1 = std::move(e1);
  e.y = std::move(a2);
  e.ty2 = std::move(t2);
  e.e2 = std::move(e2);
  return finish(std::move(e));
}

}  // namespace mk

TermPtr rebuild(const Term& proto, std::vector<TermPtr> kids, ExprPtr body) {
  Term t;
  t.kind = proto.kind;
  t.pos = proto.pos;
  t.num = proto.num;
  t.op = proto.op;
  t.x = proto.x;
  t.y = proto.y;
  t.ty1 = proto.ty1;
  t.ty2 = proto.ty2;
  t.kids = std::move(kids);
  t.body = std::move(body);
  return finish(std::move(t));
}

ExprPtr rebuild(const Expr& proto, TermPtr term, ExprPtr e1, ExprPtr e2) {
  Expr e;
  e.kind = proto.kind;
  e.pos = proto.pos;
  e.x = proto.x;
  e.y = proto.y;
  e.ty1 = proto.ty1;
  e.ty2 = proto.ty2;
  e.term = std::move(term);
  e.e1 = std::move(e1);
  e.e2 = std::move(e2);
  return finish(std::move(e));
}

// ---------------------------------------------------------------------------
// free_resources

namespace {
std::vector<std::string> resources_of(const FreeSet& fs) {
  std::vector<std::string> out;
  for (const auto& n : fs)
    if (n.sort == Sort::Resource) out.push_back(n.name);
  return out;
}
}  // namespace

std::vector<std::string> free_resources(const TermPtr& t) { return resources_of(t->free); }
std::vector<std::string> free_resources(const ExprPtr& e) { return resources_of(e->free); }

// ---------------------------------------------------------------------------
// Substitution

namespace {

Subst relevant(const FreeSet& free, const Subst& s) {
  Subst out;
  if (free.empty()) return out;
  for (const auto& b : s) {
    if (std::binary_search(free.begin(), free.end(), FreeName{b.sort, b.name})) out.push_back(b);
  }
  return out;
}

Subst without(const Subst& s, Sort sort, const std::string& a, const std::string* b = nullptr) {
  Subst out;
  for (const auto& x : s) {
    if (x.sort == sort && (x.name == a || (b && x.name == *b))) continue;
    out.push_back(x);
  }
  return out;
}

TermPtr subst_term(const TermPtr& t, const Subst& s);
ExprPtr subst_expr(const ExprPtr& e, const Subst& s);

TermPtr subst_term(const TermPtr& t, const Subst& outer) {
  Subst s = relevant(t->free, outer);
  if (s.empty()) return t;
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Res: {
      const Sort sort = t->kind == TermKind::Var ? Sort::Variable : Sort::Resource;
      for (const auto& b : s)
        if (b.sort == sort && b.name == t->x) return b.value;
      return t;
    }
    case TermKind::MFun:
    case TermKind::MFunVal: {
      Subst inner = without(without(s, Sort::Variable, t->x), Sort::Resource, t->y);
      return rebuild(*t, {}, subst_expr(t->body, inner));
    }
    case TermKind::Case: {
      return rebuild(*t,
                     {subst_term(t->kids[0], s),
                      subst_term(t->kids[1], without(s, Sort::Variable, t->x)),
                      subst_term(t->kids[2], without(s, Sort::Variable, t->y))},
                     nullptr);
    }
    case TermKind::Split: {
      return rebuild(*t,
                     {subst_term(t->kids[0], s),
                      subst_term(t->kids[1], without(s, Sort::Variable, t->x, &t->y))},
                     nullptr);
    }
    default: {
      std::vector<TermPtr> kids;
      kids.reserve(t->kids.size());
      for (const auto& k : t->kids) kids.push_back(subst_term(k, s));
      return rebuild(*t, std::move(kids), t->body);
    }
  }
}

ExprPtr subst_expr(const ExprPtr& e, const Subst& outer) {
  Subst s = relevant(e->free, outer);
  if (s.empty()) return e;
  TermPtr term = subst_term(e->term, s);
  switch (e->kind) {
    case ExprKind::Return:
      return rebuild(*e, std::move(term), nullptr, nullptr);
    case ExprKind::LetBang:
      return rebuild(*e, std::move(term), subst_expr(e->e1, without(s, Sort::Variable, e->x)),
                     nullptr);
    case ExprKind::LetPair:
      return rebuild(*e, std::move(term),
                     subst_expr(e->e1, without(s, Sort::Resource, e->x, &e->y)), nullptr);
    case ExprKind::MCase:
      return rebuild(*e, std::move(term), subst_expr(e->e1, without(s, Sort::Resource, e->x)),
                     subst_expr(e->e2, without(s, Sort::Resource, e->y)));
  }
  return e;
}

}  // namespace

TermPtr substitute(const TermPtr& t, const Subst& s) { return subst_term(t, s); }
ExprPtr substitute(const ExprPtr& e, const Subst& s) { return subst_expr(e, s); }

// ---------------------------------------------------------------------------
// Erasure

TermPtr erase(const TermPtr& t) {
  if (!t) return t;
  bool changed = t->kind == TermKind::MFunVal;
  std::vector<TermPtr> kids;
  kids.reserve(t->kids.size());
  for (const auto& k : t->kids) {
    kids.push_back(erase(k));
    changed |= kids.back() != k;
  }
  ExprPtr body = t->body ? erase(t->body) : nullptr;
  changed |= body != t->body;
  if (!changed) return t;
  if (t->kind == TermKind::MFunVal) return mk::mfun(t->x, t->y, t->ty1, t->ty2, body, t->pos);
  return rebuild(*t, std::move(kids), std::move(body));
}

ExprPtr erase(const ExprPtr& e) {
  if (!e) return e;
  TermPtr term = erase(e->term);
  ExprPtr e1 = erase(e->e1);
  ExprPtr e2 = erase(e->e2);
  if (term == e->term && e1 == e->e1 && e2 == e->e2) return e;
  return rebuild(*e, std::move(term), std::move(e1), std::move(e2));
}

// ---------------------------------------------------------------------------
// Structural equality

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->num != b->num || a->x != b->x || a->y != b->y) return false;
  if (a->kind == TermKind::PrimOp && a->op != b->op) return false;
  if (!type_equal(a->ty1, b->ty1) || !type_equal(a->ty2, b->ty2)) return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!term_equal(a->kids[i], b->kids[i])) return false;
  return expr_equal(a->body, b->body);
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->x != b->x || a->y != b->y) return false;
  if (!type_equal(a->ty1, b->ty1) || !type_equal(a->ty2, b->ty2)) return false;
  return term_equal(a->term, b->term) && expr_equal(a->e1, b->e1) && expr_equal(a->e2, b->e2);
}

Program with_main(const Program& p, TermPtr main) {
  Program out = p;
  out.main = std::move(main);
  return out;
}

}  // namespace mfl
