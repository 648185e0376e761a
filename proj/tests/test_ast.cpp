#include "doctest.h"
#include "mfl/gen.hpp"
#include "support.hpp"

using namespace mfl;

namespace {

TypePtr I() { return ty::integer(); }

ExprPtr id_body() { return mk::let_bang("x", I(), mk::res("a"), mk::ret(mk::var("x"))); }

}  // namespace

TEST_CASE("free resources") {
  CHECK(free_resources(mk::res("a")) == std::vector<std::string>{"a"});
  CHECK(free_resources(mk::ret(mk::integer(3))).empty());
  auto e = mk::let_pair("a1", nullptr, "a2", nullptr, mk::res("p"), mk::ret(mk::var("x")));
  CHECK(free_resources(e) == std::vector<std::string>{"p"});
  // x is a free variable, not a resource
  CHECK(e->free == FreeSet{{Sort::Variable, "x"}, {Sort::Resource, "p"}});
}

TEST_CASE("binders scope over their bodies only") {
  auto e = mk::let_pair("a1", nullptr, "a2", nullptr, mk::res("a1"),
                        mk::ret(mk::pair(mk::res("a1"), mk::res("a2"))));
  CHECK(free_resources(e) == std::vector<std::string>{"a1"});
  auto f = mk::mfun("f", "a", ty::bang(I()), I(), id_body());
  CHECK(f->closed());
  auto g = mk::mfun("f", "a", ty::bang(I()), I(),
                    mk::ret(mk::apply(mk::var("f"), mk::bang(mk::var("y")))));
  CHECK(g->free == FreeSet{{Sort::Variable, "y"}});
}

TEST_CASE("erase") {
  CHECK(term_equal(erase(mk::integer(5)), mk::integer(5)));
  auto v = mk::mfun_val(Location{7}, "f", "a", ty::bang(I()), I(), id_body());
  auto u = mk::mfun("f", "a", ty::bang(I()), I(), id_body());
  CHECK(term_equal(erase(v), u));
  auto pv = mk::pair(mk::mfun_val(Location{1}, "f", "a", ty::bang(I()), I(), id_body()),
                     mk::bang(mk::integer(2)));
  auto pu = mk::pair(u, mk::bang(mk::integer(2)));
  CHECK(term_equal(erase(pv), pu));
  CHECK_FALSE(term_equal(pv, pu));
}

TEST_CASE("erase is idempotent and commutes with substitution on generated programs") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    CAPTURE(seed);
    Program p = generate_program(seed);
    Store st(seed);
    MemoEvaluator ev(st, EvalConfig{});
    Subst env;
    try {
      env = ev.run_decls(p);
    } catch (const EvalError&) {
      continue;
    }
    Subst erased;
    for (const auto& b : env) {
      CHECK(term_equal(erase(erase(b.value)), erase(b.value)));
      erased.push_back({b.sort, b.name, erase(b.value)});
    }
    TermPtr lhs = erase(substitute(p.main, env));
    TermPtr rhs = substitute(erase(p.main), erased);
    CHECK(term_equal(lhs, rhs));
    CHECK(term_equal(erase(lhs), lhs));
  }
}

TEST_CASE("substitution replaces free occurrences only") {
  Subst s{{Sort::Variable, "x", mk::integer(4)}};
  auto t = mk::pair(mk::var("x"), mk::split(mk::pair(mk::integer(1), mk::integer(2)), "x", "y",
                                             mk::var("x")));
  auto r = substitute(t, s);
  CHECK(term_equal(r, mk::pair(mk::integer(4), mk::split(mk::pair(mk::integer(1), mk::integer(2)),
                                                         "x", "y", mk::var("x")))));
  // same name, other sort: untouched
  CHECK(term_equal(substitute(mk::res("x"), s), mk::res("x")));
}

TEST_CASE("values") {
  CHECK(mk::integer(1)->is_value());
  CHECK(mk::pair(mk::unit(), mk::bang(mk::integer(2)))->is_value());
  CHECK_FALSE(mk::pair(mk::var("x"), mk::unit())->is_value());
  CHECK_FALSE(mk::primop(PrimOpKind::Add, {mk::integer(1), mk::integer(2)})->is_value());
  CHECK(mk::box_val(BoxTag{3})->is_value());
}

TEST_CASE("types") {
  auto l1 = ty::rec("u", ty::sum(ty::unit(), ty::prod(I(), ty::box(ty::var("u")))));
  auto l2 = ty::rec("w", ty::sum(ty::unit(), ty::prod(I(), ty::box(ty::var("w")))));
  CHECK(type_equal(l1, l2));
  CHECK_FALSE(type_equal(l1, ty::rec("u", ty::sum(ty::unit(), ty::prod(I(), ty::var("u"))))));
  CHECK(type_equal(unfold(l1), ty::sum(ty::unit(), ty::prod(I(), ty::box(l1)))));
  CHECK(is_indexable(*ty::unit()));
  CHECK(is_indexable(*I()));
  CHECK(is_indexable(*ty::box(ty::prod(I(), I()))));
  CHECK_FALSE(is_indexable(*ty::prod(I(), I())));
  CHECK_FALSE(is_indexable(*ty::bang(I())));
}

TEST_CASE("with_main keeps declarations") {
  Program p = parse("val a = 1\nval b = 2\nmain a");
  Program q = with_main(p, mk::var("b"));
  REQUIRE(q.decls.size() == 2);
  CHECK(q.decls[1].name == "b");
  CHECK(term_equal(q.main, mk::var("b")));
}
