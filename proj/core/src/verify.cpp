#include "klab/verify.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "klab/corpus.hpp"
#include "klab/extract.hpp"
#include "klab/machine.hpp"
#include "klab/reduce.hpp"
#include "klab/search.hpp"
#include "klab/semantics.hpp"

namespace klab {

namespace {

struct Check {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    if (failed++ == 0) first = what;
  }

  SuiteResult result(const std::string& name) const {
    SuiteResult r;
    r.name = name;
    r.pass = failed == 0 && checked > 0;
    r.checked = checked;
    std::ostringstream os;
    if (failed)
      os << failed << " of " << checked << " failed, first: " << first;
    else
      os << checked << " checks";
    r.detail = os.str();
    return r;
  }
};

RunReport run_term(const Term& t, Machine m, std::size_t fuel) { return run(t, m, fuel, {false, true}); }

std::string show(const Term& t) { return pretty(t); }

TypeExpr curried(const Typing& t, const Term& subject) {
  TypeExpr out = t.type;
  const auto& vars = subject.free_vars();
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) out = TypeExpr::arrow(t.context.at(*it), out);
  return out;
}

Check golden_trace(const VerifyOptions&) {
  Check c;
  auto r = run(parse_term("(\\x.(x)x)\\y.y"), Machine::head, 100, {true, false});
  c.expect(r.status == RunStatus::finished, "run did not finish");
  c.expect(r.steps == 9, "steps " + std::to_string(r.steps));
  c.expect(alpha_equivalent(r.final_term(), parse_term("\\y.y")), "final " + show(r.final_term()));
  std::vector<std::string> expected = {"push", "bind", "push", "lookup", "bind",
                                       "lookup", "lookup", "under-lambda", "stuck-var"};
  std::vector<std::string> got;
  for (const auto& e : r.trace)
    if (e.rule) got.push_back(rule_name(*e.rule));
  std::string joined;
  for (const auto& g : got) joined += g + " ";
  c.expect(got == expected, "rules " + joined);
  return c;
}

Check church_law(const VerifyOptions& o) {
  Check c;
  for (unsigned n = 1; n <= 6; ++n) {
    auto r = run_term(Term::app(church(n), identity()), Machine::head, o.fuel);
    c.expect(r.status == RunStatus::finished && r.steps == 4 * (n + 1),
             "n=" + std::to_string(n) + " steps " + std::to_string(r.steps));
  }
  return c;
}

Check theorem_head(const VerifyOptions& o, Machine m, bool exact) {
  Check c;
  for (const auto& t : closed_terms(o.corpus_size)) {
    auto r = run_term(t, m, o.fuel);
    if (r.status != RunStatus::finished) continue;
    auto found = min_derivation_size(t, r.steps, exact);
    c.expect(found.status == SearchStatus::found && found.min_size == r.steps && found.witness &&
                 is_valid(*found.witness) && found.witness->size() == r.steps,
             show(t) + " machine " + std::to_string(r.steps) + " search " +
                 (found.status == SearchStatus::found ? std::to_string(found.min_size) : "none"));
    if (r.steps > 0) {
      auto below = min_derivation_size(t, r.steps - 1, exact);
      c.expect(below.status == SearchStatus::exhausted_bound, show(t) + " typable below the step count");
    }
  }
  return c;
}

Check extraction(const VerifyOptions& o) {
  Check c;
  for (const auto& t : closed_terms(o.corpus_size)) {
    auto h = run_term(t, Machine::head, o.fuel);
    if (h.status == RunStatus::finished) {
      auto e = extract_derivation_head(t, o.fuel);
      c.expect(e && e->size() == h.steps && is_valid(e->derivation), show(t) + " head extraction");
    }
    auto b = run_term(t, Machine::beta, o.fuel);
    if (b.status == RunStatus::finished) {
      auto e = extract_derivation_beta(t, o.fuel);
      bool ok = e && e->size() == b.steps && is_valid(e->derivation);
      if (ok) {
        Term nf = b.final_term();
        Typing root = e->derivation.typing();
        ok = has_one_typing_shape(root.context, root.type) && is_instance(principal_typing(nf), root);
      }
      c.expect(ok, show(t) + " beta extraction");
    }
  }
  return c;
}

std::vector<Term> divergent_family() {
  Term delta3 = parse_term("\\x.((x)x)x");
  return {omega(), Term::app(omega(), identity()), Term::abs("z", omega()), Term::app(delta3, delta3),
          parse_term("(\\x.((x)x)x)(\\x.(x)x)\\x.(x)x"), Term::app(omega(), omega())};
}

Check qualitative(const VerifyOptions& o) {
  Check c;
  std::vector<Term> terms = closed_terms(o.corpus_size);
  for (auto& t : divergent_family()) terms.push_back(t);
  for (const auto& t : terms) {
    auto r = run_term(t, Machine::head, o.fuel);
    if (r.status == RunStatus::finished) {
      c.expect(min_derivation_size(t, r.steps, false).status == SearchStatus::found, show(t) + " untypable");
    } else {
      auto hr = head_reduce(t, o.fuel);
      if (hr.status == ReductionStatus::normalized) {
        c.expect(false, show(t) + " head normalizes but the machine did not finish");
        continue;
      }
      c.expect(min_derivation_size(t, o.untyped_bound, false).status == SearchStatus::exhausted_bound,
               show(t) + " typable though divergent");
    }
  }
  return c;
}

// Ground point caches for the pair suites.
class PointCache {
 public:
  GroundPoints& get(const Term& t) {
    std::string key = alpha_key(t);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, std::make_unique<GroundPoints>(t)).first;
    return *it->second;
  }

 private:
  std::map<std::string, std::unique_ptr<GroundPoints>> cache_;
};

Check semantic_bound(const VerifyOptions& o) {
  Check c;
  PointCache cache;
  auto ns = closed_normal_terms(o.pair_size);
  for (const auto& v : ns) {
    for (const auto& u : ns) {
      Term app = Term::app(v, u);
      for (auto [mode, m] : {std::pair{PredictMode::head, Machine::head}, std::pair{PredictMode::beta, Machine::beta}}) {
        auto pairs = unifiable_pairs(cache.get(v), cache.get(u), mode, o.pair_cost);
        if (pairs.empty()) continue;
        auto r = run_term(app, m, o.fuel);
        for (const auto& p : pairs) {
          std::size_t b = step_bound(p.instance());
          c.expect(r.status == RunStatus::finished && r.steps <= b,
                   show(v) + " " + show(u) + " bound " + std::to_string(b) + " steps " + std::to_string(r.steps));
        }
      }
    }
  }
  return c;
}

Check exact_predictor(const VerifyOptions& o) {
  Check c;
  Term delta = parse_term("\\x.(x)x");
  auto p = predict_steps(delta, identity(), PredictMode::head, o.predict_bound);
  c.expect(p && p->steps == 9 && p->witness.fun_point.size() == 4 && p->witness.arg_points.size() == 4,
           "worked example");
  for (unsigned n = 1; n <= 3; ++n) {
    auto q = predict_steps(church(n), identity(), PredictMode::head, o.predict_bound);
    c.expect(q && q->steps == 4 * (n + 1), "church " + std::to_string(n));
  }
  PointCache cache;
  auto ns = closed_normal_terms(o.pair_size);
  for (const auto& v : ns) {
    for (const auto& u : ns) {
      Term app = Term::app(v, u);
      for (auto [mode, m] : {std::pair{PredictMode::head, Machine::head}, std::pair{PredictMode::beta, Machine::beta}}) {
        auto r = run_term(app, m, o.fuel);
        // The predictor only terminates on pairs the machine finishes.
        if (r.status != RunStatus::finished || r.steps > o.predict_bound) continue;
        auto q = predict_steps(cache.get(v), cache.get(u), mode, o.predict_bound);
        c.expect(q && q->steps == r.steps, show(v) + " " + show(u) + " machine " + std::to_string(r.steps) +
                                               " predicted " + (q ? std::to_string(q->steps) : "none"));
      }
    }
  }
  return c;
}

Check non_idempotency(const VerifyOptions&) {
  Check c;
  Term t = parse_term("\\z.\\x.(z)x");
  auto typing = [](const char* s) { return Typing{Context(), parse_type(s)}; };
  auto a = derive_typing(t, typing("([([g0],g0)],([g0],g0))"), 10);
  auto b = derive_typing(t, typing("([([g0,g0],g0)],([g0,g0],g0))"), 10);
  c.expect(a && is_valid(*a), "single copy typing missing");
  c.expect(b && is_valid(*b), "double copy typing missing");
  c.expect(!derive_typing(t, typing("([([g0],g0)],([g0,g0],g0))"), 10), "mixed typing derivable");
  return c;
}

Check not_a_lambda_model(const VerifyOptions&) {
  Check c;
  Term t1 = parse_term("(y)x");
  Term t2 = parse_term("(z)x");
  TypeExpr g0 = parse_type("g0");
  SemEnv rho{{"y", {parse_type("([g0],g0)")}}, {"z", {parse_type("([g0,g0],g0)")}}};
  std::vector<PointSet> pool = {{},
                                {g0},
                                {parse_type("g1")},
                                {g0, parse_type("g1")},
                                {parse_type("([g0],g0)")},
                                {g0, parse_type("([g0],g0)")},
                                {g0, parse_type("([],g0)"), parse_type("([g0,g0],g0)")}};
  for (const auto& d : pool) {
    SemEnv r = rho;
    r["x"] = d;
    c.expect(interpret_in_env(t1, r, 8) == interpret_in_env(t2, r, 8), "environments disagree");
  }
  PointSet a1 = interpret_in_env(Term::abs("x", t1), rho, 8);
  PointSet a2 = interpret_in_env(Term::abs("x", t2), rho, 8);
  c.expect(a1 != a2, "abstractions agree");
  return c;
}

Check size_functions(const VerifyOptions& o) {
  Check c;
  TypeExpr g = parse_type("g0");
  TypeExpr id = parse_type("([g0],g0)");
  c.expect(g.size() == 1 && g.aux() == 0, "atom size");
  for (std::size_t n = 0; n <= 5; ++n) {
    TypeExpr t = TypeExpr::arrow(TypeMultiset(std::vector<TypeExpr>(n, id)), id);
    c.expect(t.size() == 2 * n + 3, "family n=" + std::to_string(n));
  }
  for (const auto& t : closed_terms(o.corpus_size)) {
    auto r = run_term(t, Machine::head, o.fuel);
    if (r.status != RunStatus::finished) continue;
    for (const auto& item : enumerate_typings(t, r.steps)) {
      TypeExpr ct = curried(item.typing, t);
      c.expect(ct.size() == ct.aux(), show(t) + " " + to_string(ct));
    }
    if (auto e = extract_derivation_beta(t, o.fuel)) {
      TypeExpr ct = curried(e->derivation.typing(), t);
      c.expect(ct.size() == ct.aux(), show(t) + " " + to_string(ct));
    }
  }
  return c;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "golden-trace",   "church-law",      "theorem-head",    "theorem-normal",
      "extraction",     "qualitative",     "semantic-bound",  "exact-predictor",
      "non-idempotency", "not-a-lambda-model", "size-functions"};
  return names;
}

bool is_suite(const std::string& name) {
  for (const auto& n : suite_names())
    if (n == name) return true;
  return false;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& o) {
  auto start = std::chrono::steady_clock::now();
  Check c;
  if (name == "golden-trace") c = golden_trace(o);
  else if (name == "church-law") c = church_law(o);
  else if (name == "theorem-head") c = theorem_head(o, Machine::head, false);
  else if (name == "theorem-normal") c = theorem_head(o, Machine::beta, true);
  else if (name == "extraction") c = extraction(o);
  else if (name == "qualitative") c = qualitative(o);
  else if (name == "semantic-bound") c = semantic_bound(o);
  else if (name == "exact-predictor") c = exact_predictor(o);
  else if (name == "non-idempotency") c = non_idempotency(o);
  else if (name == "not-a-lambda-model") c = not_a_lambda_model(o);
  else if (name == "size-functions") c = size_functions(o);
  else throw std::invalid_argument("unknown suite: " + name);
  SuiteResult r = c.result(name);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<SuiteResult> run_all_suites(const VerifyOptions& o, const std::function<void(const SuiteResult&)>& on_done) {
  std::vector<SuiteResult> out;
  for (const auto& n : suite_names()) {
    out.push_back(run_suite(n, o));
    if (on_done) on_done(out.back());
  }
  return out;
}

}  // namespace klab
