#include <doctest.h>

#include <set>

#include "klab/types.hpp"

using namespace klab;

namespace {

TypeExpr T(const char* s) { return parse_type(s); }

TypeExpr size_family(int n) {
  std::vector<TypeExpr> copies(n, T("([g0],g0)"));
  return TypeExpr::arrow(TypeMultiset(copies), T("([g0],g0)"));
}

}  // namespace

TEST_CASE("type syntax round trips") {
  for (const char* s : {"γ0", "([γ0],γ0)", "([],γ3)", "([γ0,([γ1],γ1)],([],γ2))", "([γ1,γ1],γ0)"}) {
    TypeExpr t = T(s);
    CHECK(parse_type(to_string(t)) == t);
  }
  CHECK(to_string(T("([g1,g0],g0)")) == "([γ0,γ1],γ0)");
  CHECK_THROWS(parse_type("([g0,g0)"));
  CHECK_THROWS(parse_type("h0"));
}

TEST_CASE("multisets compare as multisets") {
  CHECK(TypeMultiset{T("g0"), T("g1")} == TypeMultiset{T("g1"), T("g0")});
  CHECK(TypeMultiset{T("g0")} != TypeMultiset{T("g0"), T("g0")});
  CHECK((TypeMultiset{T("g0")} + TypeMultiset{T("g0")}) == TypeMultiset{T("g0"), T("g0")});
}

TEST_CASE("sizes") {
  CHECK(T("g0").size() == 1);
  CHECK(T("g0").aux() == 0);
  CHECK(T("([g0],g0)").size() == 2);
  CHECK(T("([g0],g0)").aux() == 2);
  CHECK(T("([],g0)").size() == 2);
  for (int n = 0; n <= 5; ++n) CHECK(size_family(n).size() == std::size_t(2 * n + 3));
}

TEST_CASE("exactness") {
  CHECK(is_exact(T("g0")));
  CHECK(is_coexact(T("g0")));
  CHECK(is_exact(T("([],g0)")));
  CHECK_FALSE(is_coexact(T("([],g0)")));
  CHECK_FALSE(is_exact(T("([([],g0)],g0)")));
  CHECK(is_exact(T("([([g1],g0)],g0)")));
  // The empty multiset sits in a negative position of the result here.
  CHECK(is_exact(T("([g0],([],g0))")));
  CHECK_FALSE(is_exact(T("([([g0],([],g0))],g0)")));
  Context c = Context::single("x", TypeMultiset{T("g0")});
  CHECK(is_exact(c));
  Context d = Context::single("x", TypeMultiset{T("([],g0)")});
  CHECK_FALSE(is_exact(d));
}

TEST_CASE("contexts and currying") {
  Context a = Context::single("x", {T("g0")});
  Context b = Context::single("x", {T("g1")}) + Context::single("y", {T("g2")});
  Context s = a + b;
  CHECK(s.at("x") == TypeMultiset{T("g0"), T("g1")});
  CHECK(s.at("z").empty());
  CHECK(s.without("x").entries().size() == 1);
  CHECK(curry(s, T("g3")) == T("([g0,g1],([g2],g3))"));
}

TEST_CASE("substitutions") {
  Substitution s;
  s.bind(0, T("([g0],g0)"));
  CHECK(s.apply(T("g0")) == T("([g0],g0)"));
  CHECK(Substitution().apply(T("([g0],g1)")) == T("([g0],g1)"));
  Substitution r;
  r.bind(1, T("g0"));
  CHECK(r.apply(TypeMultiset{T("g1"), T("g1")}) == TypeMultiset{T("g0"), T("g0")});
  CHECK(r.apply(T("([g1,g2],g1)")) == T("([g0,g2],g0)"));
}

TEST_CASE("renaming and matching") {
  CHECK(canonical_atoms(T("([g5],g7)")) == T("([g0],g1)"));
  CHECK(equivalent_up_to_renaming(T("([g3,g4],g3)"), T("([g1,g0],g0)")));
  CHECK_FALSE(equivalent_up_to_renaming(T("([g0,g1],g0)"), T("([g0,g0],g0)")));
  Substitution m;
  CHECK(match(T("([g0],g0)"), T("([([g1],g1)],([g1],g1))"), m));
  Substitution n;
  CHECK_FALSE(match(T("([g0],g0)"), T("([g1],g2)"), n));
}
