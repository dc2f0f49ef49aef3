#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "klab/term.hpp"

namespace klab {

struct Closure;

// Persistent environment: identifier -> closure.
class Env {
 public:
  Env() = default;
  Env bind(const std::string& x, const Closure& c) const;
  const Closure* lookup(const std::string& x) const;
  bool empty() const { return head_ == nullptr; }
  // Most recent binding first.
  std::vector<std::pair<std::string, Closure>> entries() const;
  std::size_t depth() const;

 private:
  struct Node;
  std::shared_ptr<const Node> head_;
};

struct Closure {
  Term term;
  Env env;
};

// Persistent stack of closures.
class Stack {
 public:
  Stack() = default;
  Stack push(const Closure& c) const;
  const Closure& top() const;
  Stack pop() const;
  bool empty() const { return head_ == nullptr; }
  std::size_t size() const;
  std::vector<Closure> to_vector() const;  // top first

 private:
  struct Node;
  std::shared_ptr<const Node> head_;
};

struct State {
  Closure head;
  Stack stack;
};

State initial_state(const Term& t);

enum class Rule { lookup, stuck_var, bind, push, under_lambda };
std::string rule_name(Rule r);

enum class StateStepKind { next, stuck_free_var, stuck_abs_empty_stack };

struct StateStep {
  StateStepKind kind;
  std::optional<State> next;  // set for `next`
  std::optional<Rule> rule;   // lookup, bind or push for `next`
};

StateStep step_state(const State& s);

// Machine configurations: states, head forms and abstractions over them.
class KForm {
 public:
  enum class Kind { State, Var, App, Abs };

  KForm() = default;
  static KForm state(State s);
  static KForm var(std::string x);
  static KForm app(KForm fun, Term arg);
  static KForm app(KForm fun, KForm arg);
  static KForm abs(std::string binder, KForm body);

  Kind kind() const;
  const State& as_state() const;
  const std::string& name() const;
  const KForm& fun() const;
  bool arg_is_term() const;
  const Term& arg_term() const;
  const KForm& arg_form() const;
  const KForm& body() const;

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

enum class Frame { lambda, fun, arg };
std::string frame_name(Frame f);

struct KStep {
  KForm next;
  Rule rule;
  std::vector<Frame> path;  // congruence frames, outermost first
};

std::optional<KStep> step_h(const KForm& k);
std::optional<KStep> step_beta(const KForm& k);

Term realize(const Closure& c);
Term realize(const State& s);
Term realize(const KForm& k);

enum class Machine { head, beta };
std::string machine_name(Machine m);

enum class RunStatus { finished, fuel_exhausted, cycle_detected };
std::string status_name(RunStatus s);

struct TraceEntry {
  std::size_t index;  // 0 is the initial configuration
  std::optional<Rule> rule;
  std::vector<Frame> path;
  KForm form;
};

struct RunOptions {
  bool trace = false;
  // Stops when the realized configuration repeats after a bind step.
  bool detect_cycles = false;
};

struct RunReport {
  Machine machine;
  Term input;  // the term actually run, after enforcing the variable convention
  std::size_t steps = 0;
  RunStatus status = RunStatus::finished;
  KForm final_form;
  std::vector<TraceEntry> trace;

  Term final_term() const { return realize(final_form); }
};

RunReport run(const Term& t, Machine m, std::size_t fuel, const RunOptions& opts = {});

// Fixed-column rendering: step | output | current subterm | environment | stack.
std::string render_trace_text(const RunReport& r);
std::string render_trace_json(const RunReport& r);

std::string to_string(const Closure& c);
std::string to_string(const Env& e);
std::string to_string(const Stack& s);

}  // namespace klab
