#include <doctest.h>

#include "klab/reduce.hpp"
#include "klab/term.hpp"

using namespace klab;

TEST_CASE("parse and print round trip") {
  Term t = parse_term("(\\x.(x)x)\\y.y");
  CHECK(t.is_app());
  CHECK(t.fun().is_abs());
  CHECK(t.arg().is_abs());
  CHECK(pretty(t) == "(\\x.(x)x)\\y.y");

  CHECK(pretty(Term::app(Term::app(Term::var("x"), Term::var("y")), Term::var("z"))) == "(x)y z");
  CHECK(pretty(parse_term("\xCE\xBBx. x")) == "\\x.x");

  for (const char* s : {"(x)(y)z", "((x)(y)z)w", "(x)(y)z w", "((x)\\y.y)z", "(x)\\y.(y)z",
                        "\\f.\\x.(f)(f)(f)x", "\\x.((x)\\x1.\\y.x1)((x)\\x1.\\y.x1)\\x1.\\y.y",
                        "(\\x.x)(\\y.y)z", "((\\x.x)\\y.y)z"}) {
    Term u = parse_term(s);
    CHECK(parse_term(pretty(u)) == u);
  }
}

TEST_CASE("Krivine argument conventions") {
  Term two = parse_term("\\f.\\x.(f)(f)x");
  const Term& body = two.body().body();
  CHECK(body.fun().name() == "f");
  CHECK(body.arg().is_app());
  CHECK(parse_term("(x)y z").fun().is_app());
  Term grouped = parse_term("((x)\\y.y)z");
  CHECK(grouped.fun().arg().is_abs());
  CHECK(grouped.arg().name() == "z");
}

TEST_CASE("syntax errors report a position") {
  CHECK_THROWS_AS(parse_term("((x)"), ParseError);
  CHECK_THROWS_AS(parse_term("(\\x."), ParseError);
  CHECK_THROWS_AS(parse_term("x y"), ParseError);
  try {
    parse_term("(\\x.");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
    CHECK(std::string(e.what()).find("end of input") != std::string::npos);
  }
}

TEST_CASE("variable convention") {
  Term t = ensure_variable_convention(parse_term("\\x.\\x.x"));
  CHECK(pretty(t) == "\\x.\\x1.x1");
  CHECK(respects_variable_convention(t));
  CHECK_FALSE(respects_variable_convention(parse_term("\\x.\\x.x")));
  CHECK(pretty(ensure_variable_convention(parse_term("(\\y.y)\\y.y"))) == "(\\y.y)\\y1.y1");
  // A binder may not reuse a free name.
  Term u = ensure_variable_convention(parse_term("(x)\\x.x"));
  CHECK(pretty(u) == "(x)\\x1.x1");
  // Renaming does not capture later binders.
  Term w = ensure_variable_convention(parse_term("\\x.\\x.\\x1.x"));
  CHECK(respects_variable_convention(w));
  CHECK(alpha_equivalent(w, parse_term("\\a.\\b.\\c.b")));
  Term ok = parse_term("\\x.\\y.(x)y");
  CHECK(ensure_variable_convention(ok) == ok);
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_equivalent(parse_term("\\x.x"), parse_term("\\y.y")));
  CHECK_FALSE(alpha_equivalent(parse_term("\\x.y"), parse_term("\\y.y")));
  CHECK(alpha_equivalent(parse_term("\\x.\\y.(x)y"), parse_term("\\a.\\b.(a)b")));
}

TEST_CASE("capture avoiding substitution") {
  Term t = substitute(parse_term("\\y.(x)y"), "x", parse_term("y"));
  CHECK(alpha_equivalent(t, parse_term("\\z.(y)z")));
  CHECK(t.body().fun().name() == "y");
}

TEST_CASE("normal form predicates") {
  CHECK(is_head_normal(parse_term("\\x.(x)(\\y.y)z")));
  CHECK(is_head_normal(parse_term("\\x.(x)((\\y.y)z)")));
  CHECK_FALSE(is_normal(parse_term("\\x.(x)((\\y.y)z)")));
  CHECK_FALSE(is_head_normal(parse_term("(\\x.x)y")));
  CHECK(is_normal(parse_term("\\x.(x)\\y.y")));
}

TEST_CASE("reference reducers") {
  auto h = head_reduce(parse_term("(\\x.(x)x)\\y.y"), 100);
  CHECK(h.status == ReductionStatus::normalized);
  CHECK(h.steps == 2);
  CHECK(alpha_equivalent(h.term, parse_term("\\y.y")));

  Term omega = parse_term("(\\x.(x)x)\\x.(x)x");
  auto l = leftmost_reduce(parse_term("(\\x.y)(\\x.(x)x)\\x.(x)x"), 100);
  CHECK(l.status == ReductionStatus::normalized);
  CHECK(l.steps == 1);
  CHECK(l.term == Term::var("y"));

  auto d = head_reduce(omega, 1000);
  CHECK(d.status == ReductionStatus::fuel_exhausted);
  CHECK(d.steps == 1000);
  CHECK(head_reduction_cycles(omega, 10));
  CHECK_FALSE(head_reduction_cycles(parse_term("(\\x.(x)x)\\y.y"), 10));

  // Head normal but not normal: head reduction stops, leftmost continues.
  Term t = parse_term("\\z.(z)((\\x.x)z)");
  CHECK(head_reduce(t, 10).steps == 0);
  auto n = leftmost_reduce(t, 10);
  CHECK(n.steps == 1);
  CHECK(alpha_equivalent(n.term, parse_term("\\z.(z)z")));
}
