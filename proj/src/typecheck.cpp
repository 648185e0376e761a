#include "mfl/typecheck.hpp"

#include <set>

#include "mfl/printer.hpp"

namespace mfl {
namespace {

void wf(const TypePtr& t, Pos pos, std::vector<std::string>& bound) {
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Int: return;
    case TypeKind::Var:
      for (const auto& b : bound)
        if (b == t->var) return;
      throw TypeError(TypeErrorKind::Mismatch, pos, "free type variable '" + t->var + "'");
    case TypeKind::Bang:
      if (!is_indexable(*t->left))
        throw TypeError(TypeErrorKind::NotIndexable, pos,
                        "'!' applied to non-indexable type " + print_type(t->left), nullptr,
                        t->left);
      wf(t->left, pos, bound);
      return;
    case TypeKind::Box: wf(t->left, pos, bound); return;
    case TypeKind::Prod:
    case TypeKind::Sum:
    case TypeKind::MArrow:
      wf(t->left, pos, bound);
      wf(t->right, pos, bound);
      return;
    case TypeKind::Rec:
      bound.push_back(t->var);
      wf(t->left, pos, bound);
      bound.pop_back();
      return;
  }
}

class Checker {
 public:
  explicit Checker(const TypeContext& ctx) : gamma_(ctx.gamma), delta_(ctx.delta) {}

  TypePtr term(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Var: {
        auto it = gamma_.find(t->x);
        if (it == gamma_.end())
          throw TypeError(TypeErrorKind::UnboundVar, t->pos, "unbound variable '" + t->x + "'");
        return it->second;
      }
      case TermKind::Res: {
        auto it = delta_.find(t->x);
        if (it != delta_.end()) return it->second;
        auto h = hidden_.find(t->x);
        if (h != hidden_.end()) {
          const char* where = h->second == TypeErrorKind::ResourceInReturn ? "return" : "'!'";
          throw TypeError(h->second, t->pos,
                          "resource '" + t->x + "' used inside " + where + " body");
        }
        throw TypeError(TypeErrorKind::UnboundResource, t->pos,
                        "unbound resource '" + t->x + "'");
      }
      case TermKind::Unit: return ty::unit();
      case TermKind::Int: return ty::integer();
      case TermKind::PrimOp: {
        if (t->kids.size() != primop_arity(t->op))
          throw TypeError(TypeErrorKind::ArityOrOp, t->pos,
                          "operator '" + std::string(primop_symbol(t->op)) + "' expects " +
                              std::to_string(primop_arity(t->op)) + " operands");
        for (const auto& k : t->kids) expect(k, ty::integer(), "operand");
        if (t->op == PrimOpKind::IntToSum) return ty::sum(ty::unit(), ty::unit());
        return ty::integer();
      }
      case TermKind::Pair: return ty::prod(term(t->kids[0]), term(t->kids[1]));
      case TermKind::MFun:
      case TermKind::MFunVal: {
        check_type_wf(t->ty1, t->pos);
        check_type_wf(t->ty2, t->pos);
        TypePtr fty = ty::arrow(t->ty1, t->ty2);
        Bind gv(gamma_, t->x, fty);
        Bind rv(delta_, t->y, t->ty1);
        Unhide uh(hidden_, t->y);
        TypePtr body = expr(t->body);
        if (!type_equal(body, t->ty2))
          throw TypeError(TypeErrorKind::Mismatch, t->body->pos,
                          "body of '" + t->x + "' has type " + print_type(body) +
                              ", declared " + print_type(t->ty2),
                          t->ty2, body);
        return fty;
      }
      case TermKind::Apply: {
        TypePtr f = term(t->kids[0]);
        if (f->kind != TypeKind::MArrow)
          throw TypeError(TypeErrorKind::Mismatch, t->kids[0]->pos,
                          "applying a term of non-function type " + print_type(f), nullptr, f);
        expect(t->kids[1], f->left, "argument");
        return f->right;
      }
      case TermKind::Bang: {
        TypePtr inner = hiding(TypeErrorKind::ResourceInBang, [&] { return term(t->kids[0]); });
        if (!is_indexable(*inner))
          throw TypeError(TypeErrorKind::NotIndexable, t->pos,
                          "'!' applied to a term of non-indexable type " + print_type(inner),
                          nullptr, inner);
        return ty::bang(inner);
      }
      case TermKind::Inl:
      case TermKind::Inr: {
        check_type_wf(t->ty1, t->pos);
        check_type_wf(t->ty2, t->pos);
        expect(t->kids[0], t->kind == TermKind::Inl ? t->ty1 : t->ty2, "injected term");
        return ty::sum(t->ty1, t->ty2);
      }
      case TermKind::Roll: {
        check_type_wf(t->ty1, t->pos);
        if (t->ty1->kind != TypeKind::Rec)
          throw TypeError(TypeErrorKind::Mismatch, t->pos, "roll annotation is not a rec type");
        expect(t->kids[0], unfold(t->ty1), "rolled term");
        return t->ty1;
      }
      case TermKind::Unroll: {
        TypePtr r = term(t->kids[0]);
        if (r->kind != TypeKind::Rec)
          throw TypeError(TypeErrorKind::Mismatch, t->kids[0]->pos,
                          "unroll of non-recursive type " + print_type(r), nullptr, r);
        return unfold(r);
      }
      case TermKind::Box: return ty::box(term(t->kids[0]));
      case TermKind::Unbox:
      case TermKind::KeyOf: {
        TypePtr b = term(t->kids[0]);
        if (b->kind != TypeKind::Box)
          throw TypeError(TypeErrorKind::Mismatch, t->kids[0]->pos,
                          std::string(t->kind == TermKind::Unbox ? "unbox" : "keyof") +
                              " of non-box type " + print_type(b),
                          nullptr, b);
        return t->kind == TermKind::Unbox ? b->left : ty::integer();
      }
      case TermKind::BoxVal:
        throw TypeError(TypeErrorKind::Mismatch, t->pos, "run-time box value has no static type");
      case TermKind::Case: {
        TypePtr s = term(t->kids[0]);
        if (s->kind != TypeKind::Sum)
          throw TypeError(TypeErrorKind::Mismatch, t->kids[0]->pos,
                          "case on non-sum type " + print_type(s), nullptr, s);
        TypePtr a, b;
        {
          Bind g(gamma_, t->x, s->left);
          a = term(t->kids[1]);
        }
        {
          Bind g(gamma_, t->y, s->right);
          b = term(t->kids[2]);
        }
        if (!type_equal(a, b))
          throw TypeError(TypeErrorKind::Mismatch, t->kids[2]->pos,
                          "case arms have types " + print_type(a) + " and " + print_type(b), a,
                          b);
        return a;
      }
      case TermKind::Split: {
        TypePtr s = term(t->kids[0]);
        if (s->kind != TypeKind::Prod)
          throw TypeError(TypeErrorKind::Mismatch, t->kids[0]->pos,
                          "split of non-product type " + print_type(s), nullptr, s);
        Bind g1(gamma_, t->x, s->left);
        Bind g2(gamma_, t->y, s->right);
        return term(t->kids[1]);
      }
    }
    throw TypeError(TypeErrorKind::Mismatch, t->pos, "unknown term form");
  }

  TypePtr expr(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Return:
        return hiding(TypeErrorKind::ResourceInReturn, [&] { return term(e->term); });
      case ExprKind::LetBang: {
        TypePtr s = term(e->term);
        if (s->kind != TypeKind::Bang)
          throw TypeError(TypeErrorKind::Mismatch, e->term->pos,
                          "let! of non-modal type " + print_type(s), nullptr, s);
        if (e->ty1) {
          check_type_wf(e->ty1, e->pos);
          if (!type_equal(e->ty1, s->left))
            throw TypeError(TypeErrorKind::Mismatch, e->pos,
                            "let! annotation " + print_type(e->ty1) + " does not match " +
                                print_type(s->left),
                            e->ty1, s->left);
        }
        Bind g(gamma_, e->x, s->left);
        return expr(e->e1);
      }
      case ExprKind::LetPair: {
        TypePtr s = term(e->term);
        if (s->kind != TypeKind::Prod)
          throw TypeError(TypeErrorKind::Mismatch, e->term->pos,
                          "let* of non-product type " + print_type(s), nullptr, s);
        annotation(e->ty1, s->left, e->pos);
        annotation(e->ty2, s->right, e->pos);
        Bind r1(delta_, e->x, s->left);
        Bind r2(delta_, e->y, s->right);
        Unhide u1(hidden_, e->x);
        Unhide u2(hidden_, e->y);
        return expr(e->e1);
      }
      case ExprKind::MCase: {
        TypePtr s = term(e->term);
        if (s->kind != TypeKind::Sum)
          throw TypeError(TypeErrorKind::Mismatch, e->term->pos,
                          "mcase on non-sum type " + print_type(s), nullptr, s);
        annotation(e->ty1, s->left, e->pos);
        annotation(e->ty2, s->right, e->pos);
        TypePtr a, b;
        {
          Bind r(delta_, e->x, s->left);
          Unhide u(hidden_, e->x);
          a = expr(e->e1);
        }
        {
          Bind r(delta_, e->y, s->right);
          Unhide u(hidden_, e->y);
          b = expr(e->e2);
        }
        if (!type_equal(a, b))
          throw TypeError(TypeErrorKind::Mismatch, e->e2->pos,
                          "mcase arms have types " + print_type(a) + " and " + print_type(b), a,
                          b);
        return a;
      }
    }
    throw TypeError(TypeErrorKind::Mismatch, e->pos, "unknown expression form");
  }

 private:
  using Ctx = std::map<std::string, TypePtr>;
  using Hidden = std::map<std::string, TypeErrorKind>;

  // Scoped binding that restores any shadowed entry.
  class Bind {
   public:
    Bind(Ctx& ctx, const std::string& name, TypePtr t) : ctx_(ctx), name_(name) {
      auto it = ctx_.find(name);
      if (it != ctx_.end()) saved_ = it->second;
      ctx_[name] = std::move(t);
    }
    ~Bind() {
      if (saved_)
        ctx_[name_] = saved_;
      else
        ctx_.erase(name_);
    }
    Bind(const Bind&) = delete;
    Bind& operator=(const Bind&) = delete;

   private:
    Ctx& ctx_;
    std::string name_;
    TypePtr saved_;
  };

  // A fresh resource binder shadows a hidden one of the same name.
  class Unhide {
   public:
    Unhide(Hidden& h, const std::string& name) : h_(h), name_(name) {
      auto it = h_.find(name);
      if (it != h_.end()) {
        saved_ = it->second;
        had_ = true;
        h_.erase(it);
      }
    }
    ~Unhide() {
      if (had_) h_[name_] = saved_;
    }
    Unhide(const Unhide&) = delete;
    Unhide& operator=(const Unhide&) = delete;

   private:
    Hidden& h_;
    std::string name_;
    TypeErrorKind saved_{};
    bool had_ = false;
  };

  template <typename F>
  TypePtr hiding(TypeErrorKind why, F&& body) {
    Ctx saved_delta;
    saved_delta.swap(delta_);
    Hidden saved_hidden = hidden_;
    for (const auto& [name, t] : saved_delta) hidden_[name] = why;
    struct Restore {
      Checker& c;
      Ctx& d;
      Hidden& h;
      ~Restore() {
        c.delta_.swap(d);
        c.hidden_.swap(h);
      }
    } restore{*this, saved_delta, saved_hidden};
    return body();
  }

  void expect(const TermPtr& t, const TypePtr& want, const char* what) {
    TypePtr got = term(t);
    if (!type_equal(got, want))
      throw TypeError(TypeErrorKind::Mismatch, t->pos,
                      std::string(what) + " has type " + print_type(got) + ", expected " +
                          print_type(want),
                      want, got);
  }

  void annotation(const TypePtr& ann, const TypePtr& actual, Pos pos) {
    if (!ann) return;
    check_type_wf(ann, pos);
    if (!type_equal(ann, actual))
      throw TypeError(TypeErrorKind::Mismatch, pos,
                      "annotation " + print_type(ann) + " does not match " + print_type(actual),
                      ann, actual);
  }

  Ctx gamma_;
  Ctx delta_;
  Hidden hidden_;
};

}  // namespace

void check_type_wf(const TypePtr& t, Pos pos) {
  std::vector<std::string> bound;
  wf(t, pos, bound);
}

TypePtr check_term(const TypeContext& ctx, const TermPtr& t) { return Checker(ctx).term(t); }

TypePtr check_expr(const TypeContext& ctx, const ExprPtr& e) { return Checker(ctx).expr(e); }

TypePtr check_program(const Program& p) {
  TypeContext ctx;
  for (const auto& d : p.decls) {
    TypePtr t = check_term(ctx, d.term);
    ctx.gamma[d.name] = t;
  }
  return check_term(ctx, p.main);
}

}  // namespace mfl
