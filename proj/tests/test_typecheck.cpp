#include "doctest.h"
#include "mfl/gen.hpp"
#include "mfl/prelude.hpp"
#include "support.hpp"

using namespace mfl;
using mfl::testing::negative_cases;

namespace {

TypePtr I() { return ty::integer(); }

TypeErrorKind kind_of(const TypeContext& ctx, const TermPtr& t) {
  try {
    check_term(ctx, t);
  } catch (const TypeError& e) {
    return e.kind();
  }
  FAIL("accepted");
  return TypeErrorKind::Mismatch;
}

TypeErrorKind kind_of(const TypeContext& ctx, const ExprPtr& e) {
  try {
    check_expr(ctx, e);
  } catch (const TypeError& err) {
    return err.kind();
  }
  FAIL("accepted");
  return TypeErrorKind::Mismatch;
}

}  // namespace

TEST_CASE("mfun with a let! body") {
  auto f = mk::mfun("f", "a", ty::bang(I()), I(),
                    mk::let_bang("x", I(), mk::res("a"), mk::ret(mk::var("x"))));
  CHECK(type_equal(check_term({}, f), ty::arrow(ty::bang(I()), I())));
}

TEST_CASE("return of a resource") {
  TypeContext ctx;
  ctx.delta["a"] = ty::bang(I());
  CHECK(kind_of(ctx, mk::ret(mk::res("a"))) == TypeErrorKind::ResourceInReturn);
  try {
    check_expr(ctx, mk::ret(mk::res("a")));
  } catch (const TypeError& e) {
    CHECK(std::string(e.what()).find("'a'") != std::string::npos);
  }
}

TEST_CASE("bang of a product") {
  CHECK(kind_of({}, mk::bang(mk::pair(mk::integer(1), mk::integer(2)))) == TypeErrorKind::NotIndexable);
}

TEST_CASE("expression rules") {
  TypeContext g;
  g.gamma["x"] = I();
  CHECK(type_equal(check_expr(g, mk::ret(mk::var("x"))), I()));

  TypeContext d;
  d.delta["p"] = ty::prod(I(), I());
  CHECK(type_equal(check_expr(d, mk::let_pair("a1", I(), "a2", I(), mk::res("p"), mk::ret(mk::integer(0)))),
                   I()));

  // let! moves the bound name into the variable context
  TypeContext b;
  b.delta["a"] = ty::bang(I());
  CHECK(type_equal(check_expr(b, mk::let_bang("x", nullptr, mk::res("a"), mk::ret(mk::var("x")))), I()));
}

TEST_CASE("the partial-dependence function") {
  Program p = corpus_program("partial");
  REQUIRE(p.decls.size() == 3);
  TypeContext ctx;
  ctx.gamma["fy"] = ty::arrow(ty::bang(I()), I());
  ctx.gamma["fz"] = ty::arrow(ty::bang(I()), I());
  CHECK(type_equal(check_term(ctx, p.decls[2].term),
                   ty::arrow(ty::prod(I(), ty::prod(ty::bang(I()), ty::bang(I()))), I())));
}

TEST_CASE("programs") {
  CHECK(type_equal(check_program(corpus_program("fib")), I()));
  CHECK(type_equal(check_program(corpus_program("knapsack")), I()));
  CHECK(type_equal(check_program(corpus_program("partial")),
                   ty::prod(I(), ty::prod(I(), ty::prod(I(), I())))));
  auto blist = ty::box(ty::rec("u", ty::sum(ty::unit(), ty::prod(I(), ty::box(ty::var("u"))))));
  CHECK(type_equal(check_program(corpus_program("quicksort")), blist));
  CHECK(type_equal(check_program(corpus_program("hcons")), ty::prod(blist, blist)));
  CHECK_THROWS_AS(check_program(parse("val f = g\nval g = 1\nmain f")), TypeError);
}

TEST_CASE("the negative suite") {
  REQUIRE(negative_cases().size() == 20);
  for (const auto& c : negative_cases()) {
    CAPTURE(c.name);
    auto k = mfl::testing::rejection(c);
    REQUIRE(k.has_value());
    CHECK(std::string(to_string(*k)) == to_string(c.kind));
  }
}

TEST_CASE("type errors carry a position and the types involved") {
  try {
    check_program(parse("main\n  if 1 then 2 else ()"));
    FAIL("accepted");
  } catch (const TypeError& e) {
    CHECK(e.pos().line == 2);
    CHECK(e.kind() == TypeErrorKind::Mismatch);
    CHECK(e.expected());
    CHECK(e.found());
  }
}

TEST_CASE("generated programs typecheck, deterministically") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    CAPTURE(seed);
    Program p = generate_program(seed);
    TypePtr a = check_program(p);
    TypePtr b = check_program(p);
    CHECK(type_equal(a, b));
  }
}

TEST_CASE("weakening") {
  // A derivation under an empty variable context survives the addition of
  // fresh variables of arbitrary types.
  const std::vector<TypePtr> extra = {I(), ty::unit(), ty::arrow(ty::bang(I()), I()),
                                      ty::box(ty::prod(I(), I()))};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CAPTURE(seed);
    Program p = generate_program(seed);
    TypeContext ctx;
    for (const auto& d : p.decls) ctx.gamma[d.name] = check_term(ctx, d.term);
    TypePtr t = check_term(ctx, p.main);
    TypeContext wider = ctx;
    for (std::size_t i = 0; i < extra.size(); ++i) wider.gamma["fresh_" + std::to_string(i)] = extra[i];
    wider.delta["fresh_res"] = I();
    CHECK(type_equal(check_term(wider, p.main), t));
  }
}

TEST_CASE("resources bound outside an mfun stay visible in its body") {
  TypeContext ctx;
  ctx.delta["r"] = ty::bang(I());
  auto f = mk::mfun("f", "a", ty::bang(I()), I(),
                    mk::let_bang("x", nullptr, mk::res("r"), mk::ret(mk::var("x"))));
  CHECK(type_equal(check_term(ctx, f), ty::arrow(ty::bang(I()), I())));
}

TEST_CASE("return and bang hide resources even under nested binders") {
  TypeContext ctx;
  ctx.delta["r"] = I();
  CHECK(kind_of(ctx, mk::bang(mk::split(mk::pair(mk::integer(1), mk::res("r")), "x", "y", mk::var("x")))) ==
        TypeErrorKind::ResourceInBang);
  CHECK(kind_of(ctx, mk::ret(mk::pair(mk::integer(1), mk::res("r")))) == TypeErrorKind::ResourceInReturn);
}
