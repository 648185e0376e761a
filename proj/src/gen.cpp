#include "mfl/gen.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "mfl/printer.hpp"
#include "mfl/typecheck.hpp"

namespace mfl {
namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Ctx = std::vector<std::pair<std::string, TypePtr>>;

TypePtr ilist_type() {
  static const TypePtr t =
      ty::rec("u", ty::sum(ty::unit(), ty::prod(ty::integer(), ty::box(ty::var("u")))));
  return t;
}

struct FnSig {
  std::string name;
  TypePtr arg;
  TypePtr res;
};

class Generator {
 public:
  // Each shrink level halves the per-piece budget and drops one declaration.
  Generator(std::uint64_t seed, const GenOptions& opts, int shrink = 0)
      : rng_(seed), opts_(opts), shrink_(shrink) {}

  Program program() {
    Program p;
    const int max_decls = std::max(1, opts_.max_decls - shrink_);
    const int ndecls = static_cast<int>(uniform(1, max_decls));
    const int share = (static_cast<int>(opts_.max_size) / (ndecls + 1)) >> shrink_;
    for (int i = 0; i < ndecls; ++i) {
      budget_ = share;
      p.decls.push_back(decl("f" + std::to_string(i + 1)));
    }
    budget_ = share;
    p.main = main_term();
    return p;
  }

 private:
  // -- randomness ---------------------------------------------------------

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool chance(int percent) { return uniform(1, 100) <= percent; }

  std::size_t pick(const std::vector<int>& weights) {
    int total = 0;
    for (int w : weights) total += w;
    std::int64_t r = uniform(1, total);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      r -= weights[i];
      if (r <= 0) return i;
    }
    return weights.size() - 1;
  }

  std::string fresh_var() { return "x" + std::to_string(++fresh_); }
  std::string fresh_res() { return "a" + std::to_string(++fresh_); }

  // -- types ----------------------------------------------------------------

  TypePtr value_type(int depth) {
    const int c = depth > 0 ? 1 : 0;
    switch (pick({6, 1, 1, 2 * c, 2 * c, c})) {
      case 0: return ty::integer();
      case 1: return ty::unit();
      case 2: return ty::box(ty::integer());
      case 3: return ty::prod(value_type(depth - 1), value_type(depth - 1));
      case 4: return ty::sum(value_type(depth - 1), value_type(depth - 1));
      default: return ilist_type();
    }
  }

  TypePtr arg_type(int depth) {
    const int c = depth > 0 ? 1 : 0;
    switch (pick({6, 1, 1, 1, 3 * c, 2 * c})) {
      case 0: return ty::bang(ty::integer());
      case 1: return ty::bang(ty::unit());
      case 2: return ty::bang(ty::box(ty::integer()));
      case 3: return ty::integer();
      case 4: return ty::prod(arg_type(depth - 1), arg_type(depth - 1));
      default: return ty::sum(arg_type(depth - 1), arg_type(depth - 1));
    }
  }

  // -- terms ----------------------------------------------------------------

  std::vector<std::string> names_of(const Ctx& ctx, const TypePtr& t) {
    std::vector<std::string> out;
    for (const auto& [n, ty] : ctx)
      if (type_equal(ty, t)) out.push_back(n);
    return out;
  }

  std::vector<const FnSig*> fns_returning(const Ctx& gamma, const TypePtr& t) {
    std::vector<const FnSig*> out;
    for (const auto& f : fns_) {
      bool visible = false;
      for (const auto& [n, ty] : gamma)
        if (n == f.name) visible = true;
      if (visible && type_equal(f.res, t)) out.push_back(&f);
    }
    return out;
  }

  TermPtr literal() { return mk::integer(uniform(opts_.min_int, opts_.max_int)); }

  TermPtr leaf(const Ctx& gamma, const Ctx& delta, const TypePtr& t) {
    auto vars = names_of(gamma, t);
    auto res = names_of(delta, t);
    if (!vars.empty() && (res.empty() || chance(60)))
      return mk::var(vars[uniform(0, vars.size() - 1)]);
    if (!res.empty()) return mk::res(res[uniform(0, res.size() - 1)]);
    switch (t->kind) {
      case TypeKind::Int: return literal();
      case TypeKind::Unit: return mk::unit();
      case TypeKind::Box: return mk::box(leaf(gamma, delta, t->left));
      case TypeKind::Bang: return mk::bang(leaf(gamma, {}, t->left));
      case TypeKind::Prod: return mk::pair(leaf(gamma, delta, t->left), leaf(gamma, delta, t->right));
      case TypeKind::Sum:
        return chance(50) ? mk::inl(leaf(gamma, delta, t->left), t->left, t->right)
                          : mk::inr(leaf(gamma, delta, t->right), t->left, t->right);
      case TypeKind::Rec: {
        TypePtr body = unfold(t);
        return mk::roll(mk::inl(mk::unit(), body->left, body->right), t);
      }
      default: return literal();
    }
  }

  TermPtr term(const Ctx& gamma, const Ctx& delta, const TypePtr& t) {
    if (--budget_ <= 0) return leaf(gamma, delta, t);

    auto vars = names_of(gamma, t);
    auto res = names_of(delta, t);
    auto fns = fns_returning(gamma, t);
    const bool is_int = t->kind == TypeKind::Int;
    const bool unrollable = type_equal(t, unfold(ilist_type()));

    enum { kLeaf, kIntro, kPrim, kIf, kCase, kSplit, kUnbox, kApply, kUnroll };
    const std::vector<int> weights = {
        3 + (vars.empty() ? 0 : 2) + (res.empty() ? 0 : 2),  // kLeaf
        t->kind == TypeKind::Int || t->kind == TypeKind::Unit ? 0 : 4,  // kIntro
        is_int ? 4 : 0,                                                   // kPrim
        1,                                                                // kIf
        1,                                                                // kCase
        1,                                                                // kSplit
        1,                                                                // kUnbox
        fns.empty() ? 0 : 4,                                              // kApply
        unrollable ? 2 : 0,                                               // kUnroll
    };
    switch (pick(weights)) {
      case kLeaf: return leaf(gamma, delta, t);
      case kIntro: return intro(gamma, delta, t);
      case kPrim: {
        static const PrimOpKind ops[] = {PrimOpKind::Add, PrimOpKind::Sub, PrimOpKind::Mul,
                                         PrimOpKind::Lt,  PrimOpKind::Le,  PrimOpKind::Eq,
                                         PrimOpKind::Div};
        const std::size_t i = pick({4, 4, 2, 2, 2, 2, 1});
        TermPtr a = term(gamma, delta, ty::integer());
        TermPtr b = term(gamma, delta, ty::integer());
        return mk::primop(ops[i], {a, b});
      }
      case kIf: {
        TermPtr c = term(gamma, delta, ty::integer());
        TermPtr a = term(gamma, delta, t);
        TermPtr b = term(gamma, delta, t);
        return mk::if_then_else(c, a, b);
      }
      case kCase: {
        TypePtr l = value_type(0), r = value_type(0);
        TermPtr s = term(gamma, delta, ty::sum(l, r));
        std::string x = fresh_var(), y = fresh_var();
        Ctx g1 = gamma, g2 = gamma;
        g1.emplace_back(x, l);
        g2.emplace_back(y, r);
        TermPtr a = term(g1, delta, t);
        TermPtr b = term(g2, delta, t);
        return mk::term_case(s, x, a, y, b);
      }
      case kSplit: {
        TypePtr l = value_type(0), r = value_type(0);
        TermPtr s = term(gamma, delta, ty::prod(l, r));
        std::string x = fresh_var(), y = fresh_var();
        Ctx g = gamma;
        g.emplace_back(x, l);
        g.emplace_back(y, r);
        return mk::split(s, x, y, term(g, delta, t));
      }
      case kUnbox: return mk::unbox(term(gamma, delta, ty::box(t)));
      case kApply: {
        const FnSig* f = fns[uniform(0, fns.size() - 1)];
        return mk::apply(mk::var(f->name), term(gamma, delta, f->arg));
      }
      case kUnroll: return mk::unroll(term(gamma, delta, ilist_type()));
    }
    return leaf(gamma, delta, t);
  }

  TermPtr intro(const Ctx& gamma, const Ctx& delta, const TypePtr& t) {
    switch (t->kind) {
      case TypeKind::Box: return mk::box(term(gamma, delta, t->left));
      case TypeKind::Bang: return mk::bang(term(gamma, {}, t->left));
      case TypeKind::Prod: {
        TermPtr a = term(gamma, delta, t->left);
        TermPtr b = term(gamma, delta, t->right);
        return mk::pair(a, b);
      }
      case TypeKind::Sum:
        return chance(50) ? mk::inl(term(gamma, delta, t->left), t->left, t->right)
                          : mk::inr(term(gamma, delta, t->right), t->left, t->right);
      case TypeKind::Rec: return mk::roll(term(gamma, delta, unfold(t)), t);
      default: return leaf(gamma, delta, t);
    }
  }

  // -- expressions ----------------------------------------------------------

  ExprPtr expr(const Ctx& gamma, const Ctx& delta, const TypePtr& res) {
    if (budget_ <= 2) return mk::ret(term(gamma, {}, res));
    --budget_;

    std::vector<std::size_t> bangs, prods, sums;
    for (std::size_t i = 0; i < delta.size(); ++i) {
      switch (delta[i].second->kind) {
        case TypeKind::Bang: bangs.push_back(i); break;
        case TypeKind::Prod: prods.push_back(i); break;
        case TypeKind::Sum: sums.push_back(i); break;
        default: break;
      }
    }
    enum { kReturn, kLetBang, kLetPair, kMCase, kMIf, kBangTerm };
    const std::vector<int> weights = {2, bangs.empty() ? 0 : 4, prods.empty() ? 0 : 4,
                                      sums.empty() ? 0 : 3, 1, 1};
    auto without = [&](std::size_t i) {
      Ctx d = delta;
      d.erase(d.begin() + static_cast<std::ptrdiff_t>(i));
      return d;
    };
    switch (pick(weights)) {
      case kReturn: return mk::ret(term(gamma, {}, res));
      case kLetBang: {
        const std::size_t i = bangs[uniform(0, bangs.size() - 1)];
        const auto& [a, at] = delta[i];
        std::string x = fresh_var();
        Ctx g = gamma;
        g.emplace_back(x, at->left);
        return mk::let_bang(x, at->left, mk::res(a), expr(g, without(i), res));
      }
      case kLetPair: {
        const std::size_t i = prods[uniform(0, prods.size() - 1)];
        const auto [a, at] = delta[i];
        std::string a1 = fresh_res(), a2 = fresh_res();
        Ctx d = without(i);
        d.emplace_back(a1, at->left);
        d.emplace_back(a2, at->right);
        return mk::let_pair(a1, at->left, a2, at->right, mk::res(a), expr(gamma, d, res));
      }
      case kMCase: {
        const std::size_t i = sums[uniform(0, sums.size() - 1)];
        const auto [a, at] = delta[i];
        std::string a1 = fresh_res(), a2 = fresh_res();
        Ctx d1 = without(i), d2 = without(i);
        d1.emplace_back(a1, at->left);
        d2.emplace_back(a2, at->right);
        ExprPtr e1 = expr(gamma, d1, res);
        ExprPtr e2 = expr(gamma, d2, res);
        return mk::mcase(mk::res(a), a1, at->left, e1, a2, at->right, e2);
      }
      case kMIf: {
        TermPtr c = term(gamma, delta, ty::integer());
        ExprPtr e1 = expr(gamma, delta, res);
        ExprPtr e2 = expr(gamma, delta, res);
        return mk::mcase(mk::primop(PrimOpKind::IntToSum, {c}), "_", nullptr, e1, "_", nullptr,
                         e2);
      }
      case kBangTerm: {
        std::string x = fresh_var();
        TermPtr bound = mk::bang(term(gamma, {}, ty::integer()));
        Ctx g = gamma;
        g.emplace_back(x, ty::integer());
        return mk::let_bang(x, nullptr, bound, expr(g, delta, res));
      }
    }
    return mk::ret(term(gamma, {}, res));
  }

  // -- declarations -------------------------------------------------------

  Ctx decl_context() const {
    Ctx g;
    for (const auto& f : fns_) g.emplace_back(f.name, ty::arrow(f.arg, f.res));
    return g;
  }

  Decl decl(const std::string& name) {
    const bool recursive = chance(35);
    TypePtr arg = recursive ? ty::bang(ty::integer()) : arg_type(2);
    TypePtr res = value_type(1);
    const std::string a = fresh_res();
    Ctx gamma = decl_context();
    ExprPtr body;
    if (recursive) {
      // let !n = a in return
      //   if n <= 0 then B1 else if 8 < n then B1 else let val y = f !(n - 1) in B2
      const std::string n = fresh_var(), y = fresh_var();
      Ctx g = gamma;
      g.emplace_back(n, ty::integer());
      TermPtr b1 = term(g, {}, res);
      Ctx g2 = g;
      g2.emplace_back(y, res);
      TermPtr b2 = term(g2, {}, res);
      TermPtr call = mk::apply(
          mk::var(name),
          mk::bang(mk::primop(PrimOpKind::Sub, {mk::var(n), mk::integer(1)})));
      TermPtr step = mk::split(mk::pair(call, mk::unit()), y, "_", b2);
      TermPtr guard = mk::if_then_else(
          mk::primop(PrimOpKind::Lt, {mk::integer(8), mk::var(n)}), b1, step);
      TermPtr top =
          mk::if_then_else(mk::primop(PrimOpKind::Le, {mk::var(n), mk::integer(0)}), b1, guard);
      body = mk::let_bang(n, ty::integer(), mk::res(a), mk::ret(top));
    } else {
      body = expr(gamma, {{a, arg}}, res);
    }
    fns_.push_back({name, arg, res});
    return {name, mk::mfun(name, a, arg, res, body), {}};
  }

  TermPtr main_term() {
    Ctx gamma = decl_context();
    const int calls = static_cast<int>(uniform(2, 4));
    std::vector<TermPtr> items;
    for (int i = 0; i < calls; ++i) {
      // Later declarations are favoured; they tend to call the earlier ones.
      const std::size_t k =
          chance(60) ? fns_.size() - 1 : static_cast<std::size_t>(uniform(0, fns_.size() - 1));
      const FnSig& f = fns_[k];
      items.push_back(mk::apply(mk::var(f.name), term(gamma, {}, f.arg)));
    }
    TermPtr acc = items.back();
    for (std::size_t i = items.size() - 1; i-- > 0;) acc = mk::pair(items[i], acc);
    return acc;
  }

  std::mt19937_64 rng_;
  GenOptions opts_;
  int shrink_ = 0;
  int budget_ = 0;
  int fresh_ = 0;
  std::vector<FnSig> fns_;
};

}  // namespace

std::size_t term_size(const TermPtr& t) {
  std::size_t n = 1;
  for (const auto& k : t->kids) n += term_size(k);
  if (t->body) n += expr_size(t->body);
  return n;
}

std::size_t expr_size(const ExprPtr& e) {
  std::size_t n = 1 + term_size(e->term);
  if (e->e1) n += expr_size(e->e1);
  if (e->e2) n += expr_size(e->e2);
  return n;
}

std::size_t program_size(const Program& p) {
  std::size_t n = term_size(p.main);
  for (const auto& d : p.decls) n += term_size(d.term);
  return n;
}

Program generate_program(std::uint64_t seed, const GenOptions& opts) {
  // Budgets are soft, so oversized drafts are thrown away and later
  // attempts draw from a smaller budget.
  for (std::uint64_t attempt = 0;; ++attempt) {
    const int shrink = static_cast<int>(std::min<std::uint64_t>(attempt / 16, 3));
    Program p = Generator(mix64(mix64(seed) + attempt), opts, shrink).program();
    if (program_size(p) <= opts.max_size) return p;
    if (attempt >= 4096) throw std::invalid_argument("generate_program: max_size too small");
  }
}

FuzzSummary fuzz(const FuzzOptions& opts) {
  FuzzSummary s;
  const std::uint64_t max_attempts = opts.count * 10 + 100;
  if (!opts.out_dir.empty()) std::filesystem::create_directories(opts.out_dir);
  for (std::uint64_t i = 0; s.ok + s.mismatches + s.breaches < opts.count && i < max_attempts; ++i) {
    const std::uint64_t pseed = mix64(opts.seed ^ mix64(i));
    Program p = generate_program(pseed, opts.gen);
    ++s.generated;
    try {
      check_program(p);
    } catch (const TypeError&) {
      ++s.ill_typed;
      continue;
    }
    DiffOptions d;
    d.memo.checked = opts.checked;
    d.memo.cold = opts.cold;
    d.memo.fault = opts.fault;
    d.seed = pseed;
    d.max_steps = opts.max_steps;
    DiffReport r = diff_check(p, d);
    s.memo_hits += r.memo_stats.memo_hits;
    switch (r.verdict) {
      case Verdict::Ok: ++s.ok; continue;
      case Verdict::Skipped: ++s.skipped; continue;
      case Verdict::Mismatch: ++s.mismatches; break;
      case Verdict::Breach: ++s.breaches; break;
    }
    std::string text = "(* " + std::string(to_string(r.verdict)) + ", program seed " +
                       std::to_string(pseed) + "\n   memo: " + r.memo_value +
                       "\n   pure: " + r.pure_value + " *)\n\n" + print_program(p);
    if (opts.out_dir.empty()) {
      s.failures.push_back(std::move(text));
    } else {
      std::string file = opts.out_dir + "/fuzz-" + std::to_string(opts.seed) + "-" +
                         std::to_string(i) + ".mfl";
      std::ofstream(file) << text;
      s.failures.push_back(file);
    }
  }
  return s;
}

}  // namespace mfl
