#include "klab/machine.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace klab {

struct Env::Node {
  std::string name;
  Closure closure;
  std::shared_ptr<const Node> next;
};

Env Env::bind(const std::string& x, const Closure& c) const {
  Env e;
  e.head_ = std::make_shared<Node>(Node{x, c, head_});
  return e;
}

const Closure* Env::lookup(const std::string& x) const {
  for (const Node* n = head_.get(); n; n = n->next.get())
    if (n->name == x) return &n->closure;
  return nullptr;
}

std::vector<std::pair<std::string, Closure>> Env::entries() const {
  std::vector<std::pair<std::string, Closure>> out;
  for (const Node* n = head_.get(); n; n = n->next.get()) out.emplace_back(n->name, n->closure);
  return out;
}

std::size_t Env::depth() const {
  std::size_t d = 0;
  for (const Node* n = head_.get(); n; n = n->next.get())
    d = std::max(d, n->closure.env.depth() + 1);
  return d;
}

struct Stack::Node {
  Closure closure;
  std::shared_ptr<const Node> next;
  std::size_t size;
};

Stack Stack::push(const Closure& c) const {
  Stack s;
  s.head_ = std::make_shared<Node>(Node{c, head_, size() + 1});
  return s;
}

const Closure& Stack::top() const { return head_->closure; }

Stack Stack::pop() const {
  Stack s;
  s.head_ = head_->next;
  return s;
}

std::size_t Stack::size() const { return head_ ? head_->size : 0; }

std::vector<Closure> Stack::to_vector() const {
  std::vector<Closure> out;
  for (const Node* n = head_.get(); n; n = n->next.get()) out.push_back(n->closure);
  return out;
}

State initial_state(const Term& t) { return State{Closure{t, Env()}, Stack()}; }

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::lookup: return "lookup";
    case Rule::stuck_var: return "stuck-var";
    case Rule::bind: return "bind";
    case Rule::push: return "push";
    case Rule::under_lambda: return "under-lambda";
  }
  return "?";
}

std::string frame_name(Frame f) {
  switch (f) {
    case Frame::lambda: return "lambda";
    case Frame::fun: return "fun";
    case Frame::arg: return "arg-descent";
  }
  return "?";
}

std::string machine_name(Machine m) { return m == Machine::head ? "head" : "beta"; }

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::finished: return "finished";
    case RunStatus::fuel_exhausted: return "fuel_exhausted";
    case RunStatus::cycle_detected: return "cycle_detected";
  }
  return "?";
}

StateStep step_state(const State& s) {
  const Term& t = s.head.term;
  const Env& e = s.head.env;
  switch (t.kind()) {
    case Term::Kind::Var: {
      const Closure* c = e.lookup(t.name());
      if (!c) return {StateStepKind::stuck_free_var, std::nullopt, std::nullopt};
      return {StateStepKind::next, State{*c, s.stack}, Rule::lookup};
    }
    case Term::Kind::Abs: {
      if (s.stack.empty()) return {StateStepKind::stuck_abs_empty_stack, std::nullopt, std::nullopt};
      Env e2 = e.bind(t.name(), s.stack.top());
      return {StateStepKind::next, State{Closure{t.body(), e2}, s.stack.pop()}, Rule::bind};
    }
    case Term::Kind::App: {
      Stack st = s.stack.push(Closure{t.arg(), e});
      return {StateStepKind::next, State{Closure{t.fun(), e}, st}, Rule::push};
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------- KForm

struct KForm::Node {
  Kind kind;
  std::optional<State> state;
  std::string name;
  KForm fun;
  bool arg_is_term = false;
  Term arg_term;
  KForm arg_form;
};

KForm KForm::state(State s) {
  KForm k;
  k.node_ = std::make_shared<Node>(Node{Kind::State, std::move(s), {}, {}, false, {}, {}});
  return k;
}

KForm KForm::var(std::string x) {
  KForm k;
  k.node_ = std::make_shared<Node>(Node{Kind::Var, std::nullopt, std::move(x), {}, false, {}, {}});
  return k;
}

KForm KForm::app(KForm fun, Term arg) {
  KForm k;
  k.node_ = std::make_shared<Node>(Node{Kind::App, std::nullopt, {}, std::move(fun), true, std::move(arg), {}});
  return k;
}

KForm KForm::app(KForm fun, KForm arg) {
  KForm k;
  k.node_ = std::make_shared<Node>(Node{Kind::App, std::nullopt, {}, std::move(fun), false, {}, std::move(arg)});
  return k;
}

KForm KForm::abs(std::string binder, KForm body) {
  KForm k;
  k.node_ = std::make_shared<Node>(Node{Kind::Abs, std::nullopt, std::move(binder), std::move(body), false, {}, {}});
  return k;
}

KForm::Kind KForm::kind() const { return node_->kind; }
const State& KForm::as_state() const { return *node_->state; }
const std::string& KForm::name() const { return node_->name; }
const KForm& KForm::fun() const { return node_->fun; }
const KForm& KForm::body() const { return node_->fun; }
bool KForm::arg_is_term() const { return node_->arg_is_term; }
const Term& KForm::arg_term() const { return node_->arg_term; }
const KForm& KForm::arg_form() const { return node_->arg_form; }

// ---------------------------------------------------------------- realization

namespace {

Term substitute_many(const Term& t, const std::map<std::string, Term>& m) {
  if (m.empty()) return t;
  bool touched = false;
  for (const auto& v : t.free_vars())
    if (m.count(v)) touched = true;
  if (!touched) return t;
  switch (t.kind()) {
    case Term::Kind::Var:
      return m.at(t.name());
    case Term::Kind::App:
      return Term::app(substitute_many(t.fun(), m), substitute_many(t.arg(), m));
    case Term::Kind::Abs: {
      std::map<std::string, Term> inner = m;
      inner.erase(t.name());
      std::set<std::string> captured;
      for (const auto& v : t.body().free_vars()) {
        auto it = inner.find(v);
        if (it != inner.end() && it->second.has_free(t.name())) captured.insert(v);
      }
      if (captured.empty()) return Term::abs(t.name(), substitute_many(t.body(), inner));
      std::set<std::string> avoid(t.body().free_vars().begin(), t.body().free_vars().end());
      for (const auto& [k, u] : inner) avoid.insert(u.free_vars().begin(), u.free_vars().end());
      std::string z = fresh_name(t.name(), avoid);
      inner[t.name()] = Term::var(z);
      return Term::abs(z, substitute_many(t.body(), inner));
    }
  }
  return t;
}

}  // namespace

Term realize(const Closure& c) {
  std::map<std::string, Term> m;
  for (const auto& v : c.term.free_vars()) {
    if (const Closure* d = c.env.lookup(v)) m.emplace(v, realize(*d));
  }
  return substitute_many(c.term, m);
}

Term realize(const State& s) {
  Term t = realize(s.head);
  for (const auto& c : s.stack.to_vector()) t = Term::app(t, realize(c));
  return t;
}

Term realize(const KForm& k) {
  switch (k.kind()) {
    case KForm::Kind::State: return realize(k.as_state());
    case KForm::Kind::Var: return Term::var(k.name());
    case KForm::Kind::App:
      return Term::app(realize(k.fun()), k.arg_is_term() ? k.arg_term() : realize(k.arg_form()));
    case KForm::Kind::Abs: return Term::abs(k.name(), realize(k.body()));
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------- steps

namespace {

std::optional<KStep> step_machine(const KForm& k, Machine m) {
  switch (k.kind()) {
    case KForm::Kind::State: {
      const State& s = k.as_state();
      StateStep st = step_state(s);
      switch (st.kind) {
        case StateStepKind::next:
          return KStep{KForm::state(*st.next), *st.rule, {}};
        case StateStepKind::stuck_abs_empty_stack: {
          State inner{Closure{s.head.term.body(), s.head.env}, Stack()};
          return KStep{KForm::abs(s.head.term.name(), KForm::state(inner)), Rule::under_lambda, {}};
        }
        case StateStepKind::stuck_free_var: {
          KForm out = KForm::var(s.head.term.name());
          for (const auto& c : s.stack.to_vector()) {
            if (m == Machine::head) out = KForm::app(out, realize(c));
            else out = KForm::app(out, KForm::state(State{c, Stack()}));
          }
          return KStep{out, Rule::stuck_var, {}};
        }
      }
      return std::nullopt;
    }
    case KForm::Kind::Var:
      return std::nullopt;
    case KForm::Kind::Abs: {
      auto r = step_machine(k.body(), m);
      if (!r) return std::nullopt;
      r->next = KForm::abs(k.name(), r->next);
      r->path.insert(r->path.begin(), Frame::lambda);
      return r;
    }
    case KForm::Kind::App: {
      if (m == Machine::head) return std::nullopt;
      if (auto r = step_machine(k.fun(), m)) {
        r->next = k.arg_is_term() ? KForm::app(r->next, k.arg_term()) : KForm::app(r->next, k.arg_form());
        r->path.insert(r->path.begin(), Frame::fun);
        return r;
      }
      if (k.arg_is_term()) return std::nullopt;
      if (auto r = step_machine(k.arg_form(), m)) {
        r->next = KForm::app(k.fun(), r->next);
        r->path.insert(r->path.begin(), Frame::arg);
        return r;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<KStep> step_h(const KForm& k) { return step_machine(k, Machine::head); }
std::optional<KStep> step_beta(const KForm& k) { return step_machine(k, Machine::beta); }

RunReport run(const Term& t, Machine m, std::size_t fuel, const RunOptions& opts) {
  RunReport r;
  r.machine = m;
  r.input = ensure_variable_convention(t);
  KForm k = KForm::state(initial_state(r.input));
  if (opts.trace) r.trace.push_back(TraceEntry{0, std::nullopt, {}, k});
  std::unordered_set<std::string> seen;
  for (;;) {
    auto st = step_machine(k, m);
    if (!st) {
      r.status = RunStatus::finished;
      break;
    }
    if (r.steps == fuel) {
      r.status = RunStatus::fuel_exhausted;
      break;
    }
    k = st->next;
    ++r.steps;
    if (opts.trace) r.trace.push_back(TraceEntry{r.steps, st->rule, st->path, k});
    if (opts.detect_cycles && st->rule == Rule::bind && !seen.insert(alpha_key(realize(k))).second) {
      r.status = RunStatus::cycle_detected;
      break;
    }
  }
  r.final_form = k;
  return r;
}

// ---------------------------------------------------------------- rendering

std::string to_string(const Closure& c) {
  return "(" + pretty(c.term) + ", " + to_string(c.env) + ")";
}

std::string to_string(const Env& e) {
  if (e.empty()) return "\xE2\x88\x85";
  std::string s = "{";
  bool first = true;
  for (const auto& [x, c] : e.entries()) {
    if (!first) s += ", ";
    first = false;
    s += x + " -> " + to_string(c);
  }
  return s + "}";
}

std::string to_string(const Stack& st) {
  if (st.empty()) return "\xCE\xB5";
  std::string s;
  for (const auto& c : st.to_vector()) {
    if (!s.empty()) s += " . ";
    s += to_string(c);
  }
  return s;
}

namespace {

const char* kHole = "\x01";

// Realization with every state replaced by a hole variable; the first hole in
// evaluation order is the focus.
Term realize_with_holes(const KForm& k, const State** focus) {
  switch (k.kind()) {
    case KForm::Kind::State:
      if (!*focus) *focus = &k.as_state();
      return Term::var(kHole);
    case KForm::Kind::Var:
      return Term::var(k.name());
    case KForm::Kind::App: {
      Term f = realize_with_holes(k.fun(), focus);
      return Term::app(f, k.arg_is_term() ? k.arg_term() : realize_with_holes(k.arg_form(), focus));
    }
    case KForm::Kind::Abs:
      return Term::abs(k.name(), realize_with_holes(k.body(), focus));
  }
  throw std::logic_error("unreachable");
}

struct Row {
  std::string output, subterm, env, stack;
};

Row render_row(const KForm& k) {
  const State* focus = nullptr;
  Term holed = realize_with_holes(k, &focus);
  if (!focus) return Row{pretty(holed), "", "", ""};
  std::string text = pretty(holed);
  std::string out = text.substr(0, text.find(kHole));
  if (!out.empty() && out.back() == '(') out.pop_back();
  return Row{out, pretty(focus->head.term), to_string(focus->head.env), to_string(focus->stack)};
}

}  // namespace

std::string render_trace_text(const RunReport& r) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"#", "rule", "output", "current subterm", "environment", "stack"});
  for (const auto& e : r.trace) {
    Row row = render_row(e.form);
    rows.push_back({std::to_string(e.index), e.rule ? rule_name(*e.rule) : "", row.output,
                    row.subterm, row.env, row.stack});
  }
  auto width = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s)
      if ((c & 0xC0) != 0x80) ++w;
    return w;
  };
  std::vector<std::size_t> widths(6, 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < 6; ++i) widths[i] = std::max(widths[i], width(row[i]));
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < 6; ++i) {
      line += row[i];
      if (i + 1 < 6) line += std::string(widths[i] - width(row[i]), ' ') + " | ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  out += "steps: " + std::to_string(r.steps) + " (" + status_name(r.status) + ")\n";
  out += "result: " + pretty(r.final_term()) + "\n";
  return out;
}

std::string render_trace_json(const RunReport& r) {
  nlohmann::json j;
  j["machine"] = machine_name(r.machine);
  j["term"] = pretty(r.input);
  j["steps"] = r.steps;
  j["status"] = status_name(r.status);
  j["final"] = pretty(r.final_term());
  j["trace"] = nlohmann::json::array();
  for (const auto& e : r.trace) {
    nlohmann::json row;
    row["step"] = e.index;
    row["rule"] = e.rule ? nlohmann::json(rule_name(*e.rule)) : nlohmann::json();
    row["path"] = nlohmann::json::array();
    for (Frame f : e.path) row["path"].push_back(frame_name(f));
    row["realized"] = pretty(realize(e.form));
    j["trace"].push_back(std::move(row));
  }
  return j.dump();
}

}  // namespace klab
