#include "mfl/eval_pure.hpp"

#include <string>

#include "primops.hpp"

namespace mfl {
namespace {

[[noreturn]] void stuck(const std::string& what) { throw EvalError(EvalErrorKind::Stuck, what); }

}  // namespace

PureEvaluator::PureEvaluator(PureConfig cfg) : cfg_(cfg) {}

void PureEvaluator::step() {
  ++stats_.steps;
  if (cfg_.max_steps && stats_.steps > cfg_.max_steps)
    throw EvalError(EvalErrorKind::StepLimit,
                    "step limit " + std::to_string(cfg_.max_steps) + " exceeded");
}

Value PureEvaluator::eval_term(const TermPtr& t) { return term(t); }

Value PureEvaluator::eval_expr(const ExprPtr& e) { return expr(e); }

Value PureEvaluator::run(const Program& p) {
  Subst env;
  for (const auto& d : p.decls) {
    Value v = term(substitute(erase(d.term), env));
    env.push_back({Sort::Variable, d.name, v});
  }
  return term(substitute(erase(p.main), env));
}

Value PureEvaluator::term(const TermPtr& t) {
  detail::DepthGuard guard(depth_, cfg_.max_depth);
  step();
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Res: stuck("free name '" + t->x + "' at run time");
    case TermKind::MFunVal: stuck("location-carrying function in pure evaluation");
    case TermKind::Unit:
    case TermKind::Int:
    case TermKind::MFun:
    case TermKind::BoxVal: return t;
    case TermKind::PrimOp: {
      std::vector<Value> args;
      args.reserve(t->kids.size());
      for (const auto& k : t->kids) args.push_back(term(k));
      return detail::apply_primop(t->op, args);
    }
    case TermKind::Pair: {
      Value a = term(t->kids[0]);
      Value b = term(t->kids[1]);
      if (a == t->kids[0] && b == t->kids[1]) return t;
      return rebuild(*t, {a, b}, nullptr);
    }
    case TermKind::Apply: {
      Value f = term(t->kids[0]);
      Value arg = term(t->kids[1]);
      if (f->kind != TermKind::MFun) stuck("application of a non-function value");
      return expr(substitute(f->body, {{Sort::Variable, f->x, f}, {Sort::Resource, f->y, arg}}));
    }
    case TermKind::Bang:
    case TermKind::Inl:
    case TermKind::Inr:
    case TermKind::Roll: {
      Value v = term(t->kids[0]);
      if (v == t->kids[0]) return t;
      return rebuild(*t, {v}, nullptr);
    }
    case TermKind::Unroll: {
      Value v = term(t->kids[0]);
      if (v->kind != TermKind::Roll) stuck("unroll of a non-rolled value");
      return v->kids[0];
    }
    case TermKind::Box: {
      Value v = term(t->kids[0]);
      ++stats_.boxes_allocated;
      return boxes_.alloc(v);
    }
    case TermKind::Unbox: {
      Value v = term(t->kids[0]);
      if (v->kind != TermKind::BoxVal) stuck("unbox of a non-box value");
      return boxes_.unbox(v->tag());
    }
    case TermKind::KeyOf: {
      Value v = term(t->kids[0]);
      if (v->kind != TermKind::BoxVal) stuck("keyof of a non-box value");
      return mk::integer(v->num);
    }
    case TermKind::Case: {
      Value v = term(t->kids[0]);
      if (v->kind == TermKind::Inl)
        return term(substitute(t->kids[1], {{Sort::Variable, t->x, v->kids[0]}}));
      if (v->kind == TermKind::Inr)
        return term(substitute(t->kids[2], {{Sort::Variable, t->y, v->kids[0]}}));
      stuck("case on a non-sum value");
    }
    case TermKind::Split: {
      Value v = term(t->kids[0]);
      if (v->kind != TermKind::Pair) stuck("split of a non-pair value");
      return term(substitute(t->kids[1], {{Sort::Variable, t->x, v->kids[0]},
                                          {Sort::Variable, t->y, v->kids[1]}}));
    }
  }
  stuck("unknown term form");
}

Value PureEvaluator::expr(const ExprPtr& e) {
  detail::DepthGuard guard(depth_, cfg_.max_depth);
  step();
  switch (e->kind) {
    case ExprKind::Return: return term(e->term);
    case ExprKind::LetBang: {
      Value v = term(e->term);
      if (v->kind != TermKind::Bang) stuck("let! of a non-modal value");
      return expr(substitute(e->e1, {{Sort::Variable, e->x, v->kids[0]}}));
    }
    case ExprKind::LetPair: {
      Value v = term(e->term);
      if (v->kind != TermKind::Pair) stuck("let* of a non-pair value");
      return expr(substitute(e->e1, {{Sort::Resource, e->x, v->kids[0]},
                                     {Sort::Resource, e->y, v->kids[1]}}));
    }
    case ExprKind::MCase: {
      Value v = term(e->term);
      if (v->kind == TermKind::Inl)
        return expr(substitute(e->e1, {{Sort::Resource, e->x, v->kids[0]}}));
      if (v->kind == TermKind::Inr)
        return expr(substitute(e->e2, {{Sort::Resource, e->y, v->kids[0]}}));
      stuck("mcase on a non-sum value");
    }
  }
  stuck("unknown expression form");
}

}  // namespace mfl
