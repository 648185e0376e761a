#include "doctest.h"
#include "mfl/gen.hpp"
#include "mfl/prelude.hpp"
#include "support.hpp"

using namespace mfl;

namespace {

bool program_equal(const Program& a, const Program& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i)
    if (a.decls[i].name != b.decls[i].name || !term_equal(a.decls[i].term, b.decls[i].term))
      return false;
  return term_equal(a.main, b.main);
}

Pos error_pos(std::string_view src) {
  try {
    parse(src);
  } catch (const SyntaxError& e) {
    return e.pos();
  }
  FAIL("accepted: " << src);
  return {};
}

// 1-based line and column of the last character.
Pos last_pos(std::string_view src) {
  Pos p{1, 0};
  for (char c : src) {
    if (c == '\n') {
      ++p.line;
      p.col = 0;
    } else {
      ++p.col;
    }
  }
  return p;
}

}  // namespace

TEST_CASE("a declaration and main") {
  Program p = parse("val id = mfun f(a:!int):int is let !x = a in return x end  main id");
  REQUIRE(p.decls.size() == 1);
  CHECK(p.decls[0].name == "id");
  CHECK(p.decls[0].term->kind == TermKind::MFun);
  CHECK(term_equal(p.main, mk::var("id")));
  auto body = p.decls[0].term->body;
  REQUIRE(body->kind == ExprKind::LetBang);
  CHECK(term_equal(body->term, mk::res("a")));
  CHECK(term_equal(body->e1->term, mk::var("x")));
}

TEST_CASE("closed mfun as main") {
  Program p = parse("main mfun f(a:!int):int is return 3 end");
  CHECK(p.decls.empty());
  CHECK(p.main->kind == TermKind::MFun);
  CHECK(p.main->closed());
  CHECK(term_equal(p.main, mk::mfun("f", "a", ty::bang(ty::integer()), ty::integer(),
                                    mk::ret(mk::integer(3)))));
}

TEST_CASE("an expression in term position is rejected") {
  CHECK_THROWS_AS(parse("main let !x = !3 in return x"), SyntaxError);
  CHECK_THROWS_AS(parse("main return 3"), SyntaxError);
  CHECK_THROWS_AS(parse("main mfun f (a : !int) : int is 3 end"), SyntaxError);
}

TEST_CASE("surface sugar") {
  SUBCASE("let! and") {
    auto e = parse_expr("let !x = a and !y = b in return x + y", {"a", "b"});
    REQUIRE(e->kind == ExprKind::LetBang);
    CHECK(e->x == "x");
    REQUIRE(e->e1->kind == ExprKind::LetBang);
    CHECK(e->e1->x == "y");
  }
  SUBCASE("if") {
    auto t = parse_term("if 1 < 2 then 3 else 4");
    CHECK(term_equal(t, mk::if_then_else(mk::primop(PrimOpKind::Lt, {mk::integer(1), mk::integer(2)}),
                                         mk::integer(3), mk::integer(4))));
  }
  SUBCASE("negative literals and unary minus") {
    CHECK(term_equal(parse_term("-3"), mk::integer(-3)));
    CHECK(term_equal(parse_term("-(1)"), mk::integer(-1)));
    CHECK(term_equal(parse_term("-x"), mk::primop(PrimOpKind::Sub, {mk::integer(0), mk::var("x")})));
  }
  SUBCASE("tuples nest to the right") {
    CHECK(term_equal(parse_term("(1, 2, 3)"),
                     mk::pair(mk::integer(1), mk::pair(mk::integer(2), mk::integer(3)))));
  }
  SUBCASE("application is left associative") {
    Program p = parse("val f = 1\nmain f 2 3");
    CHECK(term_equal(p.main, mk::apply(mk::apply(mk::var("f"), mk::integer(2)), mk::integer(3))));
  }
  SUBCASE("arithmetic precedence") {
    CHECK(term_equal(parse_term("1 + 2 * 3"),
                     mk::primop(PrimOpKind::Add, {mk::integer(1), mk::primop(PrimOpKind::Mul,
                                                                             {mk::integer(2), mk::integer(3)})})));
  }
  SUBCASE("nested comments") {
    CHECK(term_equal(parse("(* a (* b *) c *) main (* d *) 1").main, mk::integer(1)));
  }
}

TEST_CASE("binding sorts") {
  auto e = parse_expr(
      "let* (p, q) = a in mcase p of inl l => let !x = q in return x | inr r => return 0 end", {"a"});
  REQUIRE(e->kind == ExprKind::LetPair);
  CHECK(term_equal(e->term, mk::res("a")));
  REQUIRE(e->e1->kind == ExprKind::MCase);
  CHECK(term_equal(e->e1->term, mk::res("p")));
  CHECK(term_equal(e->e1->e1->term, mk::res("q")));
  CHECK(term_equal(e->e1->e1->e1->term, mk::var("x")));
}

TEST_CASE("types") {
  auto t = parse_type("!int * int + unit -> int box");
  CHECK(type_equal(t, ty::arrow(ty::sum(ty::prod(ty::bang(ty::integer()), ty::integer()), ty::unit()),
                                ty::box(ty::integer()))));
  CHECK(type_equal(parse_type("rec u. unit + int * u box"),
                   ty::rec("u", ty::sum(ty::unit(), ty::prod(ty::integer(), ty::box(ty::var("u")))))));
  Program p = parse("type t = int * int\nval f = mfun f (a : t) : int is return 0 end\nmain 0");
  CHECK(type_equal(p.decls[0].term->ty1, ty::prod(ty::integer(), ty::integer())));
}

TEST_CASE("parse of print is the identity on the corpus") {
  for (const auto& c : corpus()) {
    CAPTURE(c.name);
    Program p = parse(c.source);
    Program q = parse(print_program(p));
    CHECK(program_equal(p, q));
    CHECK(print_program(q) == print_program(p));
  }
}

TEST_CASE("parse of print is the identity on generated programs") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    CAPTURE(seed);
    Program p = generate_program(seed);
    const std::string text = print_program(p);
    CAPTURE(text);
    CHECK(program_equal(parse(text), p));
  }
}

TEST_CASE("syntax errors carry a position inside the input") {
  const std::vector<std::string> bad = {
      "main",
      "main 1 +",
      "main (1, 2",
      "val x = 1",
      "val = 1 main 2",
      "main mfun f (a : !int) : int is return 3",
      "main case 1 of inl x => 2",
      "main 1 $ 2",
      "main (* never closed",
      "val x = 1\nval x = 2\nmain x",
      "main roll[int] 3",
      "main inl[int] 3",
      "type t = int\ntype t = int\nmain 1",
      "main 99999999999999999999999",
  };
  for (const auto& src : bad) {
    CAPTURE(src);
    Pos p = error_pos(src);
    Pos end = last_pos(src);
    CHECK(p.line >= 1);
    CHECK(p.col >= 1);
    CHECK((p.line < end.line || (p.line == end.line && p.col <= end.col)));
  }
}

TEST_CASE("duplicate declarations") {
  CHECK_THROWS_AS(parse("val x = 1\nval x = 2\nmain x"), DuplicateDecl);
}
