#include "mfl/eval_memo.hpp"

#include <algorithm>
#include <string>

#include "primops.hpp"

namespace mfl {
namespace {

[[noreturn]] void stuck(const std::string& what) { throw EvalError(EvalErrorKind::Stuck, what); }

Event perturb(const Event& ev) {
  switch (ev.kind) {
    case EventKind::Bang: return Event::bang(ev.index + 1);
    case EventKind::Inl: return Event::inr();
    case EventKind::Inr: return Event::inl();
  }
  return ev;
}

bool has_free_resource(const FreeSet& fs) {
  return std::any_of(fs.begin(), fs.end(),
                     [](const FreeName& n) { return n.sort == Sort::Resource; });
}

}  // namespace

MemoEvaluator::MemoEvaluator(Store& store, EvalConfig cfg) : store_(store), cfg_(cfg) {}

void MemoEvaluator::step() {
  ++stats_.steps;
  if (cfg_.max_steps && stats_.steps > cfg_.max_steps)
    throw EvalError(EvalErrorKind::StepLimit,
                    "step limit " + std::to_string(cfg_.max_steps) + " exceeded");
}

Value MemoEvaluator::eval_term(const TermPtr& t) { return term(t); }

Value MemoEvaluator::eval_expr(Location l, Branch& beta, const ExprPtr& e) {
  Activation act{l, beta, beta.size()};
  Value v = expr(act, e);
  beta = std::move(act.beta);
  return v;
}

Subst MemoEvaluator::run_decls(const Program& p) {
  Subst env;
  for (const auto& d : p.decls) {
    Value v = term(substitute(d.term, env));
    env.push_back({Sort::Variable, d.name, v});
  }
  return env;
}

Value MemoEvaluator::run(const Program& p) {
  Subst env = run_decls(p);
  return term(substitute(p.main, env));
}

Value MemoEvaluator::term(const TermPtr& t) {
  detail::DepthGuard guard(depth_, cfg_.max_depth);
  step();
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Res: stuck("free name '" + t->x + "' at run time");
    case TermKind::Unit:
    case TermKind::Int:
    case TermKind::MFunVal:
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
    case TermKind::MFun: {
      Location l = store_.alloc_table();
      ++stats_.tables_allocated;
      return mk::mfun_val(l, t->x, t->y, t->ty1, t->ty2, t->body, t->pos);
    }
    case TermKind::Apply: {
      Value f = term(t->kids[0]);
      Value arg = term(t->kids[1]);
      if (f->kind != TermKind::MFunVal) stuck("application of a non-function value");
      ExprPtr body =
          substitute(f->body, {{Sort::Variable, f->x, f}, {Sort::Resource, f->y, arg}});
      Activation act{f->location(), {}, 0};
      return expr(act, body);
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
      return store_.alloc_box(v);
    }
    case TermKind::Unbox: {
      Value v = term(t->kids[0]);
      if (v->kind != TermKind::BoxVal) stuck("unbox of a non-box value");
      return store_.unbox(v->tag());
    }
    case TermKind::KeyOf: {
      Value v = term(t->kids[0]);
      if (v->kind != TermKind::BoxVal) stuck("keyof of a non-box value");
      return mk::integer(index_of(v));
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

Value MemoEvaluator::expr(Activation& act, const ExprPtr& e) {
  detail::DepthGuard guard(depth_, cfg_.max_depth);
  step();
  auto extend = [&](Event ev) {
    act.beta.push_back(ev);
    ++act.constructs;
    ++stats_.branch_events;
    stats_.max_branch_len = std::max<std::uint64_t>(stats_.max_branch_len, act.beta.size());
  };
  switch (e->kind) {
    case ExprKind::Return: return ret(act, e);
    case ExprKind::LetBang: {
      Value v = term(e->term);
      if (v->kind != TermKind::Bang) stuck("let! of a non-modal value");
      const Value& inner = v->kids[0];
      extend(Event::bang(index_of(inner)));
      return expr(act, substitute(e->e1, {{Sort::Variable, e->x, inner}}));
    }
    case ExprKind::LetPair: {
      Value v = term(e->term);
      if (v->kind != TermKind::Pair) stuck("let* of a non-pair value");
      return expr(act, substitute(e->e1, {{Sort::Resource, e->x, v->kids[0]},
                                          {Sort::Resource, e->y, v->kids[1]}}));
    }
    case ExprKind::MCase: {
      Value v = term(e->term);
      if (v->kind == TermKind::Inl) {
        extend(Event::inl());
        return expr(act, substitute(e->e1, {{Sort::Resource, e->x, v->kids[0]}}));
      }
      if (v->kind == TermKind::Inr) {
        extend(Event::inr());
        return expr(act, substitute(e->e2, {{Sort::Resource, e->y, v->kids[0]}}));
      }
      stuck("mcase on a non-sum value");
    }
  }
  stuck("unknown expression form");
}

Value MemoEvaluator::ret(Activation& act, const ExprPtr& e) {
  if (cfg_.checked) {
    if (has_free_resource(e->term->free)) stuck("return body mentions a resource");
    if (act.beta.size() != act.constructs) stuck("branch length differs from constructs traversed");
  }
  MemoTable& table = store_.table(act.loc);
  const std::uint64_t before = table.probes();
  std::optional<Value> found = table.lookup(act.beta);
  stats_.probes += table.probes() - before;

  const bool hit = found.has_value() && !cfg_.cold;
  if (cfg_.trace) trace_.push_back({act.loc, hit, act.beta});
  if (hit) {
    ++stats_.memo_hits;
    ++table.hits;
    return *found;
  }

  Value v = term(e->term);
  ++stats_.memo_misses;
  // The table may have grown during the body; it is the same object.
  MemoTable& after = store_.table(act.loc);
  ++after.misses;
  if (found) return v;  // cold mode: the branch was already recorded

  const Branch* key = &act.beta;
  Branch altered;
  switch (cfg_.fault) {
    case Fault::None: break;
    case Fault::SkipInsert: return v;
    case Fault::WrongBranchInsert:
      if (act.beta.empty()) return v;
      altered = act.beta;
      altered.back() = perturb(altered.back());
      if (!after.can_insert(altered)) return v;
      key = &altered;
      break;
  }

  const std::uint64_t before_insert = after.probes();
  if (cfg_.checked || after.can_insert(*key)) after.insert(*key, v);
  stats_.probes += after.probes() - before_insert;
  return v;
}

}  // namespace mfl
