#include "klab/reduce.hpp"

#include <algorithm>
#include <unordered_set>
#include <vector>

namespace klab {

namespace {

struct Spine {
  Term head;
  std::vector<Term> args;  // outermost last
};

Spine spine(const Term& t) {
  Spine s{t, {}};
  while (s.head.is_app()) {
    s.args.push_back(s.head.arg());
    s.head = s.head.fun();
  }
  std::reverse(s.args.begin(), s.args.end());
  return s;
}

Term rebuild(Term head, const std::vector<Term>& args, std::size_t from) {
  for (std::size_t i = from; i < args.size(); ++i) head = Term::app(head, args[i]);
  return head;
}

std::optional<Term> contract_spine(const Spine& s) {
  if (!s.head.is_abs() || s.args.empty()) return std::nullopt;
  Term r = substitute(s.head.body(), s.head.name(), s.args[0]);
  return rebuild(r, s.args, 1);
}

template <class Step>
ReductionOutcome drive(const Term& t, std::size_t fuel, Step step) {
  ReductionOutcome out{t, 0, ReductionStatus::normalized};
  for (;;) {
    auto next = step(out.term);
    if (!next) return out;
    if (out.steps == fuel) {
      out.status = ReductionStatus::fuel_exhausted;
      return out;
    }
    out.term = *next;
    ++out.steps;
  }
}

}  // namespace

std::optional<Term> head_step(const Term& t) {
  if (t.is_abs()) {
    auto r = head_step(t.body());
    if (!r) return std::nullopt;
    return Term::abs(t.name(), *r);
  }
  return contract_spine(spine(t));
}

std::optional<Term> leftmost_step(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return std::nullopt;
    case Term::Kind::Abs: {
      auto r = leftmost_step(t.body());
      if (!r) return std::nullopt;
      return Term::abs(t.name(), *r);
    }
    case Term::Kind::App: {
      Spine s = spine(t);
      if (auto r = contract_spine(s)) return r;
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (auto r = leftmost_step(s.args[i])) {
          std::vector<Term> args = s.args;
          args[i] = *r;
          return rebuild(s.head, args, 0);
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

ReductionOutcome head_reduce(const Term& t, std::size_t fuel) { return drive(t, fuel, head_step); }

ReductionOutcome leftmost_reduce(const Term& t, std::size_t fuel) {
  return drive(t, fuel, leftmost_step);
}

bool head_reduction_cycles(const Term& t, std::size_t fuel) {
  std::unordered_set<std::string> seen{alpha_key(t)};
  Term cur = t;
  for (std::size_t i = 0; i < fuel; ++i) {
    auto next = head_step(cur);
    if (!next) return false;
    cur = *next;
    if (!seen.insert(alpha_key(cur)).second) return true;
  }
  return false;
}

}  // namespace klab
