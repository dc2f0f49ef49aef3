#include <doctest.h>

#include "klab/derivation.hpp"

using namespace klab;

namespace {

TypeExpr T(const char* s) { return parse_type(s); }
Term P(const char* s) { return parse_term(s); }

Derivation identity_derivation() { return Derivation::abstraction("x", Derivation::axiom("x", T("g0"))); }

}  // namespace

TEST_CASE("axiom and abstraction") {
  Derivation ax = Derivation::axiom("x", T("g0"));
  Typing t = check_derivation(ax);
  CHECK(t.context == Context::single("x", {T("g0")}));
  CHECK(ax.size() == 1);
  Derivation id = identity_derivation();
  CHECK(check_derivation(id).type == T("([g0],g0)"));
  CHECK(check_derivation(id).context.empty());
  CHECK(id.size() == 2);
}

TEST_CASE("application with no argument premises") {
  Derivation v = Derivation::abstraction("y", Derivation::axiom("z", T("g0")));
  Derivation d = Derivation::application(v, {}, P("(\\x.(x)x)\\x.(x)x"));
  CHECK(is_valid(d));
  CHECK(d.type() == T("g0"));
  CHECK(d.size() == 3);
}

TEST_CASE("invalid derivations report a path") {
  Derivation f = Derivation::axiom("x", T("([g0,g0],g1)"));
  Derivation a = Derivation::axiom("y", T("g0"));
  Derivation bad = Derivation::make(Derivation::Rule::application, P("(x)y"),
                                    f.context() + a.context(), T("g1"), {f, a});
  CHECK_FALSE(is_valid(bad));
  CHECK_THROWS_AS(check_derivation(bad), DerivationError);
  Derivation id = identity_derivation();
  Derivation wrong = Derivation::make(Derivation::Rule::abstraction, P("\\x.x"), Context(), T("([g1],g0)"),
                                      {id.premises()[0]});
  try {
    check_derivation(Derivation::make(Derivation::Rule::abstraction, P("\\y.\\x.x"), Context(),
                                      T("([],([g1],g0))"), {wrong}));
    FAIL("expected an error");
  } catch (const DerivationError& e) {
    CHECK(e.path() == "/0");
  }
}

TEST_CASE("equivalence up to argument permutation") {
  Derivation f = Derivation::axiom("x", T("([g1,g2],g0)"));
  Derivation a1 = Derivation::axiom("y", T("g1"));
  Derivation a2 = Derivation::axiom("y", T("g2"));
  Derivation d1 = Derivation::application(f, {a1, a2}, P("y"));
  Derivation d2 = Derivation::application(f, {a2, a1}, P("y"));
  CHECK(is_valid(d1));
  CHECK(is_valid(d2));
  CHECK(equivalent(d1, d1));
  CHECK(equivalent(d1, d2));
  CHECK_FALSE(equivalent(Derivation::axiom("x", T("g0")), identity_derivation()));
}

TEST_CASE("substitution keeps derivations valid and equivalent") {
  Derivation f = Derivation::axiom("x", T("([g1,g2],g0)"));
  Derivation d = Derivation::application(f, {Derivation::axiom("y", T("g1")), Derivation::axiom("y", T("g2"))},
                                         P("y"));
  Substitution s;
  s.bind(1, T("([g0],g0)"));
  s.bind(2, T("g0"));
  Derivation e = apply_substitution(s, d);
  CHECK(is_valid(e));
  CHECK(equivalent(d, e));
  CHECK(e.size() == d.size());
}

TEST_CASE("principal typings") {
  CHECK(principal_typing(P("\\y.y")).type == T("([g0],g0)"));
  Typing x = principal_typing(P("x"));
  CHECK(x.context == Context::single("x", {T("g0")}));
  CHECK(equivalent_up_to_renaming(principal_typing(P("\\x.(x)\\y.y")),
                                  Typing{Context(), T("([([([g1],g1)],g0)],g0)")}));
  CHECK(is_valid(principal_derivation(P("\\x.\\y.(x)(y)x y"))));
  CHECK_THROWS(principal_typing(P("(\\x.x)y")));
}

TEST_CASE("1-typings") {
  auto ts = one_typings(P("\\y.y"), 10);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].type == T("([g0],g0)"));
  for (const char* s : {"\\x.(x)x", "\\x.\\y.(x)(y)x", "\\f.\\x.(f)(f)x", "\\x.(x)\\y.y"}) {
    Term t = P(s);
    Typing p = principal_typing(t);
    auto all = one_typings(t, 100);
    CHECK(!all.empty());
    for (const auto& ty : all) {
      CHECK(ty.context.empty());
      CHECK(is_exact(ty.type));
      CHECK(has_one_typing_shape(ty.context, ty.type));
      CHECK(is_instance(p, ty));
    }
  }
  // Identifying atoms of the principal typing of \x.(x)x gives ([([g0],g0)],g0) among others.
  auto xx = one_typings(P("\\x.(x)x"), 100);
  bool collapsed = false;
  for (const auto& ty : xx)
    if (equivalent_up_to_renaming(ty, Typing{Context(), T("([([g0],g0),g0],g0)")})) collapsed = true;
  CHECK(collapsed);
  CHECK(one_typings(P("\\x.(x)x"), 2).empty());
}

TEST_CASE("size and aux agree on curried typings of normal terms") {
  for (const char* s : {"\\y.y", "\\x.(x)x", "\\x.(x)\\y.y", "(x)y z", "\\f.\\x.(f)(f)x"}) {
    Derivation d = principal_derivation(P(s));
    TypeExpr c = curry(d.context(), d.type());
    CHECK(c.size() == c.aux());
    CHECK(d.size() <= c.size());
  }
}

TEST_CASE("text and json output") {
  Derivation id = identity_derivation();
  std::string text = to_text(id);
  CHECK(text.find("abs") == 0);
  CHECK(text.find("\n  ax") != std::string::npos);
  CHECK(to_json(id).find("\"rule\":\"abs\"") != std::string::npos);
}
