#include <doctest.h>

#include <string>
#include <vector>

#include "klab/machine.hpp"
#include "klab/reduce.hpp"

using namespace klab;

namespace {

Term church(int n) {
  std::string body = "x";
  for (int i = 0; i < n; ++i) body = "(f)" + body;
  return parse_term("\\f.\\x." + body);
}

Term app(const Term& a, const Term& b) { return Term::app(a, b); }

}  // namespace

TEST_CASE("state transitions") {
  Term t = parse_term("(\\x.x)y");
  State s = initial_state(t);
  StateStep a = step_state(s);
  REQUIRE(a.kind == StateStepKind::next);
  CHECK(*a.rule == Rule::push);
  CHECK(a.next->stack.size() == 1);
  StateStep b = step_state(*a.next);
  CHECK(*b.rule == Rule::bind);
  StateStep c = step_state(*b.next);
  CHECK(*c.rule == Rule::lookup);
  CHECK(c.next->head.term == Term::var("y"));
  CHECK(step_state(*c.next).kind == StateStepKind::stuck_free_var);
  CHECK(step_state(initial_state(parse_term("\\x.x"))).kind == StateStepKind::stuck_abs_empty_stack);
}

TEST_CASE("head forms do not step") {
  KForm k = KForm::app(KForm::var("x"), parse_term("\\y.y"));
  CHECK_FALSE(step_h(k));
  CHECK_FALSE(step_beta(k));
  CHECK_FALSE(step_h(KForm::var("x")));
}

TEST_CASE("golden trace of (\\x.(x)x)\\y.y") {
  RunReport r = run(parse_term("(\\x.(x)x)\\y.y"), Machine::head, 100, {true, false});
  CHECK(r.status == RunStatus::finished);
  CHECK(r.steps == 9);
  CHECK(pretty(r.final_term()) == "\\y.y");
  std::vector<std::string> rules;
  for (const auto& e : r.trace)
    if (e.rule) rules.push_back(rule_name(*e.rule));
  CHECK(rules == std::vector<std::string>{"push", "bind", "push", "lookup", "bind", "lookup",
                                          "lookup", "under-lambda", "stuck-var"});
  // The configuration after step 5: (y, {y -> (x, e)}) with an empty stack.
  const State& s5 = r.trace[5].form.as_state();
  CHECK(s5.head.term == Term::var("y"));
  CHECK(s5.stack.empty());
  CHECK(s5.head.env.lookup("y")->term == Term::var("x"));
  CHECK(s5.head.env.depth() == 2);
  // The under-lambda step produces an abstraction over a state.
  CHECK(r.trace[8].form.kind() == KForm::Kind::Abs);
  CHECK(r.trace[9].path == std::vector<Frame>{Frame::lambda});
  // Each configuration realizes to a head reduct of the input.
  for (const auto& e : r.trace) {
    Term re = realize(e.form);
    bool ok = alpha_equivalent(re, r.input) ||
              alpha_equivalent(re, parse_term("(\\y.y)\\y.y")) ||
              alpha_equivalent(re, parse_term("\\y.y"));
    CHECK(ok);
  }
  std::string text = render_trace_text(r);
  CHECK(text.find("under-lambda") != std::string::npos);
  std::string json = render_trace_json(r);
  CHECK(json.find("\"steps\":9") != std::string::npos);
}

TEST_CASE("Church numerals applied to the identity") {
  for (int n = 1; n <= 6; ++n) {
    RunReport r = run(app(church(n), parse_term("\\y.y")), Machine::head, 10000);
    CHECK(r.status == RunStatus::finished);
    CHECK(r.steps == static_cast<std::size_t>(4 * (n + 1)));
    CHECK(alpha_equivalent(r.final_term(), parse_term("\\x.x")));
  }
}

TEST_CASE("small step counts") {
  CHECK(run(parse_term("x"), Machine::head, 10).steps == 1);
  CHECK(run(parse_term("\\y.y"), Machine::beta, 10).steps == 2);
  RunReport r = run(parse_term("(\\x.y)(\\x.(x)x)\\x.(x)x"), Machine::beta, 100);
  CHECK(r.status == RunStatus::finished);
  CHECK(pretty(r.final_term()) == "y");
}

TEST_CASE("the beta machine evaluates arguments left to right") {
  // Two pushes and a stuck-var, then 4 steps for each argument.
  RunReport r = run(parse_term("((x)(\\a.a)y)(\\b.b)z"), Machine::beta, 100, {true, false});
  CHECK(r.status == RunStatus::finished);
  CHECK(pretty(r.final_term()) == "(x)y z");
  std::size_t first_arg = 0, second_arg = 0;
  for (const auto& e : r.trace) {
    if (e.path.size() >= 2 && e.path[0] == Frame::fun && e.path[1] == Frame::arg) ++first_arg;
    if (e.path.size() >= 1 && e.path[0] == Frame::arg) {
      ++second_arg;
      CHECK(first_arg == 4);
    }
  }
  CHECK(first_arg == 4);
  CHECK(second_arg == 4);
  CHECK(r.steps == 3 + 4 + 4);
}

TEST_CASE("machines agree with the reference reducers") {
  const char* terms[] = {"(\\x.(x)x)\\y.y", "\\x.(x)(\\y.y)z", "(\\f.\\x.(f)(f)x)\\y.y",
                         "\\x.(x)((\\y.y)z)", "(\\x.\\y.(y)x)z", "((\\x.\\y.x)a)b"};
  for (const char* s : terms) {
    Term t = parse_term(s);
    RunReport h = run(t, Machine::head, 10000);
    REQUIRE(h.status == RunStatus::finished);
    CHECK(alpha_equivalent(h.final_term(), head_reduce(t, 10000).term));
    RunReport b = run(t, Machine::beta, 10000);
    REQUIRE(b.status == RunStatus::finished);
    CHECK(alpha_equivalent(b.final_term(), leftmost_reduce(t, 10000).term));
    CHECK(b.steps >= h.steps);
  }
}

TEST_CASE("divergence") {
  Term omega = parse_term("(\\x.(x)x)\\x.(x)x");
  RunReport r = run(omega, Machine::head, 500);
  CHECK(r.status == RunStatus::fuel_exhausted);
  CHECK(r.steps == 500);
  RunReport c = run(omega, Machine::head, 500, {false, true});
  CHECK(c.status == RunStatus::cycle_detected);
  CHECK(c.steps < 50);
  // Finite runs are never flagged.
  CHECK(run(parse_term("(\\x.(x)x)\\y.y"), Machine::head, 100, {false, true}).status ==
        RunStatus::finished);
}
