#include <doctest.h>

#include <vector>

#include "klab/machine.hpp"
#include "klab/search.hpp"
#include "klab/semantics.hpp"

using namespace klab;

namespace {

TypeExpr T(const char* s) { return parse_type(s); }
Term P(const char* s) { return parse_term(s); }

Term church(int n) {
  std::string body = "x";
  for (int i = 0; i < n; ++i) body = "(f)" + body;
  return parse_term("\\f.\\x." + body);
}

const Term I = parse_term("\\y.y");

std::size_t machine_steps(const Term& v, const Term& u, Machine m) {
  auto r = run(Term::app(v, u), m, 10000);
  REQUIRE(r.status == RunStatus::finished);
  return r.steps;
}

}  // namespace

TEST_CASE("interpretation of the identity") {
  SemSet s = interpret(I, 4);
  CHECK(s.complete);
  CHECK(s.points == PointSet{T("([g0],g0)"), T("([([],g0)],([],g0))")});
  SemSet big = interpret(I, 6);
  for (const auto& p : big.points) {
    CHECK(p.is_arrow());
    CHECK(p.arg().count() == 1);
    CHECK(p.arg()[0] == p.result());
  }
  CHECK(interpret(P("(\\x.(x)x)\\x.(x)x"), 8).points.empty());
}

TEST_CASE("interpretation of zero and of open terms") {
  CHECK(interpret(P("\\x.\\y.y"), 3).points.count(T("([],([g0],g0))")));
  SemSet x = interpret(P("x"), 3);
  CHECK(x.vars == std::vector<std::string>{"x"});
  CHECK(x.points.count(T("([g0],g0)")));
}

TEST_CASE("points have witnesses and are beta invariant") {
  for (const char* s : {"\\x.(x)x", "\\x.\\y.(x)(y)x", "(\\x.(x)x)\\y.y", "\\f.\\x.(f)(f)x"}) {
    Term t = P(s);
    SemSet sem = interpret(t, 6);
    for (const auto& p : sem.points) {
      auto d = derive_typing(t, Typing{Context(), p}, 20);
      REQUIRE_MESSAGE(d, s << " " << to_string(p));
      CHECK(is_valid(*d));
    }
  }
  CHECK(interpret(P("(\\x.(x)x)\\y.y"), 7).points == interpret(I, 7).points);
  CHECK(interpret(P("(\\f.\\x.(f)x)\\y.y"), 7).points == interpret(P("\\x.x"), 7).points);
}

TEST_CASE("interpretation is complete against derivation search") {
  // Every type of size <= 5 derivable with at most 12 nodes is a point.
  for (const char* s : {"\\x.(x)x", "\\x.\\y.(y)x", "\\x.(x)\\y.y"}) {
    Term t = P(s);
    SemSet sem = interpret(t, 5);
    for (const auto& item : enumerate_typings(t, 12))
      if (item.typing.type.size() <= 5) CHECK(sem.points.count(canonical_atoms(item.typing.type)));
  }
}

TEST_CASE("interpretation in an environment") {
  SemEnv rho{{"x", {T("g0")}}};
  CHECK(interpret_in_env(P("x"), rho, 4) == PointSet{T("g0")});
  SemEnv r1{{"y", {T("([g0],g0)")}}, {"x", {T("g0")}}};
  CHECK(interpret_in_env(P("(y)x"), r1, 6) == PointSet{T("g0")});
  SemEnv r2{{"y", {T("([g0,g0],g0)")}}, {"x", {T("g0")}}};
  CHECK(interpret_in_env(P("(y)x"), r2, 6) == PointSet{T("g0")});
}

TEST_CASE("the semantics is not a lambda model") {
  Term t1 = P("(y)x");
  Term t2 = P("(z)x");
  SemEnv rho{{"y", {T("([g0],g0)")}}, {"z", {T("([g0,g0],g0)")}}};
  std::vector<PointSet> ds = {{}, {T("g0")}, {T("g1")}, {T("g0"), T("g1")}, {T("([g0],g0)")},
                              {T("g0"), T("([g0],g0)")}, {T("([],g0)"), T("g0")}};
  for (const auto& d : ds) {
    SemEnv r = rho;
    r["x"] = d;
    CHECK(interpret_in_env(t1, r, 8) == interpret_in_env(t2, r, 8));
  }
  PointSet a1 = interpret_in_env(P("\\x.(y)x"), rho, 8);
  PointSet a2 = interpret_in_env(P("\\x.(z)x"), rho, 8);
  CHECK(a1 != a2);
  CHECK(a1.count(T("([g0],g0)")));
  CHECK(a2.count(T("([g0,g0],g0)")));
}

TEST_CASE("semantic application") {
  CHECK(semantic_apply({T("([g0],g0)")}, {T("g0")}) == PointSet{T("g0")});
  CHECK(semantic_apply({T("([g0],g0)")}, {T("g1")}).empty());
  CHECK(semantic_apply({T("([],g0)")}, {}) == PointSet{T("g0")});
  for (const char* v : {"\\x.(x)x", "\\x.\\y.y", "\\f.\\x.(f)(f)x"}) {
    PointSet app = semantic_apply(interpret(P(v), 6).points, interpret(I, 6).points);
    SemSet whole = interpret(Term::app(P(v), I), 6);
    for (const auto& p : app) CHECK(whole.points.count(canonical_atoms(p)));
  }
}

TEST_CASE("step bounds") {
  CHECK(step_bound(T("([([g0],g0),([g0],g0)],([g0],g0))")) == 12);
  CHECK(step_bound(T("([],g0)")) == 3);
  CHECK(step_bound(T("([g0],g0)")) == 5);
  CHECK_THROWS(step_bound(T("g0")));
}

TEST_CASE("ground points") {
  auto id = ground_points(I, 6);
  REQUIRE(!id.empty());
  CHECK(id[0] == T("([g0],g0)"));
  auto zero = ground_points(P("\\x.\\y.y"), 4);
  CHECK(std::find(zero.begin(), zero.end(), T("([],([g0],g0))")) != zero.end());
  for (const auto& p : ground_points(P("\\x.(x)x"), 8)) CHECK(p.size() <= 8);
  CHECK_THROWS(ground_points(P("(\\x.x)\\y.y"), 4));
  CHECK_THROWS(ground_points(P("\\x.y"), 4));
}

TEST_CASE("exact predictor on the worked example") {
  auto p = predict_steps(P("\\x.(x)x"), I, PredictMode::head, 16);
  REQUIRE(p);
  CHECK(p->steps == 9);
  CHECK(p->witness.fun_point.size() == 4);
  CHECK(p->witness.arg_points.size() == 4);
  CHECK(p->steps == machine_steps(P("\\x.(x)x"), I, Machine::head));
}

TEST_CASE("church numerals") {
  for (int n = 1; n <= 4; ++n) {
    auto p = predict_steps(church(n), I, PredictMode::head, 32);
    REQUIRE(p);
    CHECK(p->steps == std::size_t(4 * (n + 1)));
    CHECK(p->witness.fun_point.size() == std::size_t(2 * n + 3));
    CHECK(p->witness.arg_points.size() == std::size_t(2 * n));
  }
  // Distinct numerals are told apart.
  for (int p = 1; p <= 4; ++p)
    for (int q = p + 1; q <= 4; ++q)
      CHECK(predict_steps(church(p), I, PredictMode::head, 32)->steps !=
            predict_steps(church(q), I, PredictMode::head, 32)->steps);
}

TEST_CASE("empty multiset point") {
  auto p = predict_steps(P("\\x.\\z.z"), I, PredictMode::head, 16);
  REQUIRE(p);
  CHECK(p->steps == 4);
  CHECK(p->witness.arg_points.empty());
  CHECK(p->steps == machine_steps(P("\\x.\\z.z"), I, Machine::head));
}

TEST_CASE("predictions agree with the machines") {
  std::vector<Term> fs = {P("\\x.(x)x"), P("\\x.\\z.z"), P("\\x.x"), P("\\x.\\y.(x)y"), P("\\x.(x)\\y.y"),
                          P("\\x.\\y.(y)x"), P("\\x.((x)x)x"), church(2)};
  std::vector<Term> as = {I, P("\\x.\\y.x"), P("\\x.\\y.y"), P("\\x.(x)x"), church(2)};
  for (const auto& v : fs)
    for (const auto& u : as)
      for (auto [mode, m] : {std::pair{PredictMode::head, Machine::head}, std::pair{PredictMode::beta, Machine::beta}}) {
        auto r = run(Term::app(v, u), m, 10000);
        auto p = predict_steps(v, u, mode, 32);
        if (r.status == RunStatus::finished && p)
          CHECK_MESSAGE(p->steps == r.steps, pretty(v) << " " << pretty(u));
      }
}

TEST_CASE("the bound theorem on unifiable pairs") {
  Term v = P("\\x.(x)x");
  for (auto [mode, m] : {std::pair{PredictMode::head, Machine::head}, std::pair{PredictMode::beta, Machine::beta}}) {
    std::size_t steps = machine_steps(v, I, m);
    auto pairs = unifiable_pairs(v, I, mode, 14);
    CHECK(!pairs.empty());
    for (const auto& pr : pairs) {
      CHECK(pr.unifier.apply(pr.fun_point.arg()) == pr.unifier.apply(pr.arg_points));
      CHECK(steps <= step_bound(pr.instance()));
    }
  }
}

TEST_CASE("normalizability from the semantics") {
  CHECK(check_app_normalizability(P("\\x.(x)x"), I, 16) == Normalizability::yes_normal);
  CHECK(check_app_normalizability(P("\\x.(x)x"), P("\\x.(x)x"), 16) == Normalizability::unknown_within_bound);
  CHECK(check_app_normalizability(P("\\x.\\z.z"), P("\\x.(x)x"), 16) == Normalizability::yes_normal);
  CHECK_THROWS(check_app_normalizability(P("(\\x.x)\\y.y"), I, 8));
}

TEST_CASE("non-uniformity") {
  // The chimerical point reads its argument once as a type of one and once as
  // a type of zero.
  Term t = P("\\x.((x)\\a.\\b.a)((x)\\a.\\b.a)\\a.\\b.b");
  TypeExpr d = T("([],([g0],g0))");
  TypeExpr b = T("([g0],([],g0))");
  TypeExpr empty_then = TypeExpr::arrow({}, TypeExpr::arrow({d}, d));
  TypeExpr a1 = TypeExpr::arrow({empty_then, empty_then}, d);
  TypeExpr a2 = TypeExpr::arrow({TypeExpr::arrow({}, TypeExpr::arrow({b}, b)), TypeExpr::arrow({b}, TypeExpr::arrow({}, b))}, b);
  for (const auto& target : {a1, a2}) {
    auto w = derive_typing(t, Typing{Context(), target}, target.size());
    REQUIRE_MESSAGE(w, to_string(target));
    CHECK(is_valid(*w));
  }
}
