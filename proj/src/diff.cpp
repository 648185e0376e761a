#include "mfl/diff.hpp"

#include "mfl/eval_pure.hpp"
#include "mfl/printer.hpp"

namespace mfl {
namespace {

bool same_type(const TypePtr& a, const TypePtr& b) {
  if (!a || !b) return !a && !b;
  return type_equal(a, b);
}

TermKind normalized(TermKind k) { return k == TermKind::MFunVal ? TermKind::MFun : k; }

struct Outcome {
  std::optional<Value> value;
  std::optional<EvalError> error;
};

bool is_limit(EvalErrorKind k) {
  return k == EvalErrorKind::StepLimit || k == EvalErrorKind::DepthExceeded;
}

std::string describe(const EvalError& e) {
  return std::string("error ") + to_string(e.kind()) + ": " + e.what();
}

}  // namespace

ValueMatcher::ValueMatcher(const BoxRegistry& memo_boxes, const BoxRegistry& pure_boxes)
    : mb_(memo_boxes), pb_(pure_boxes) {}

bool ValueMatcher::equal(const Value& memo, const Value& pure) { return term(memo, pure); }

bool ValueMatcher::boxes(BoxTag a, BoxTag b) {
  const std::uint64_t ta = raw(a);
  const std::uint64_t tb = raw(b);
  auto m = m2p_.find(ta);
  if (m == m2p_.end())
    m2p_.emplace(ta, tb);
  else if (m->second != tb)
    bijective_ = false;
  auto p = p2m_.find(tb);
  if (p == p2m_.end())
    p2m_.emplace(tb, ta);
  else if (p->second != ta)
    bijective_ = false;

  auto& row = seen_[ta];
  auto hit = row.find(tb);
  if (hit != row.end()) return hit->second;
  if (!mb_.contains(a) || !pb_.contains(b)) return row[tb] = false;
  const bool eq = term(mb_.unbox(a), pb_.unbox(b));
  seen_[ta][tb] = eq;
  return eq;
}

bool ValueMatcher::term(const TermPtr& a, const TermPtr& b) {
  if (normalized(a->kind) != normalized(b->kind)) return false;
  switch (a->kind) {
    case TermKind::BoxVal: return boxes(a->tag(), b->tag());
    case TermKind::Int: return a->num == b->num;
    case TermKind::PrimOp:
      if (a->op != b->op) return false;
      break;
    default: break;
  }
  if (a->x != b->x || a->y != b->y) return false;
  if (!same_type(a->ty1, b->ty1) || !same_type(a->ty2, b->ty2)) return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!term(a->kids[i], b->kids[i])) return false;
  if (!a->body != !b->body) return false;
  return !a->body || expr(a->body, b->body);
}

bool ValueMatcher::expr(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind || a->x != b->x || a->y != b->y) return false;
  if (!same_type(a->ty1, b->ty1) || !same_type(a->ty2, b->ty2)) return false;
  if (!term(a->term, b->term)) return false;
  if (!a->e1 != !b->e1 || !a->e2 != !b->e2) return false;
  if (a->e1 && !expr(a->e1, b->e1)) return false;
  return !a->e2 || expr(a->e2, b->e2);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Ok: return "OK";
    case Verdict::Mismatch: return "MISMATCH";
    case Verdict::Breach: return "BREACH";
    case Verdict::Skipped: return "SKIPPED";
  }
  return "?";
}

DiffReport diff_check(const Program& p, const DiffOptions& opts) {
  DiffReport r;
  Store store(opts.seed);
  EvalConfig mcfg = opts.memo;
  mcfg.max_steps = opts.max_steps;
  mcfg.max_depth = opts.max_depth;
  MemoEvaluator memo(store, mcfg);
  Outcome mo;
  try {
    mo.value = memo.run(p);
  } catch (const EvalError& e) {
    mo.error = e;
  }
  r.memo_stats = memo.stats();

  PureEvaluator pure(PureConfig{opts.max_steps, opts.max_depth});
  Outcome po;
  try {
    po.value = pure.run(p);
  } catch (const EvalError& e) {
    po.error = e;
  }
  r.pure_stats = pure.stats();

  r.memo_value = mo.value ? print_value(*mo.value, &store.boxes()) : describe(*mo.error);
  r.pure_value = po.value ? print_value(*po.value, &pure.boxes()) : describe(*po.error);

  auto breach = [](const Outcome& o) {
    return o.error && !is_limit(o.error->kind()) &&
           o.error->kind() != EvalErrorKind::DivisionByZero;
  };
  if (breach(mo) || breach(po)) {
    r.verdict = Verdict::Breach;
    r.detail = breach(mo) ? "memo: " + r.memo_value : "pure: " + r.pure_value;
    return r;
  }
  if ((mo.error && is_limit(mo.error->kind())) || (po.error && is_limit(po.error->kind()))) {
    r.verdict = Verdict::Skipped;
    r.detail = "resource limit reached";
    return r;
  }
  if (mo.error || po.error) {
    const bool same = mo.error && po.error && mo.error->kind() == po.error->kind();
    r.verdict = same ? Verdict::Ok : Verdict::Mismatch;
    if (!same) r.detail = "outcomes differ";
    return r;
  }
  ValueMatcher m(store.boxes(), pure.boxes());
  const bool eq = m.equal(*mo.value, *po.value);
  r.tag_bijection = m.tags_bijective();
  r.verdict = eq ? Verdict::Ok : Verdict::Mismatch;
  if (!eq) r.detail = "values differ";
  return r;
}

}  // namespace mfl
