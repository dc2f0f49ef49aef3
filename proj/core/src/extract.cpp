#include "klab/extract.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "klab/machine.hpp"

namespace klab {

namespace {

// A derivation for a closure (t, e): one for t, plus derivations for the
// closures bound in e, one per occurrence of the variable's type.
struct ClosureDerivation {
  Derivation root;
  std::map<std::string, std::vector<ClosureDerivation>> env;
};

// For a state c0 . c1 ... cq; stack.back() derives c1.
struct StateDerivation {
  ClosureDerivation head;
  std::vector<std::vector<ClosureDerivation>> stack;
};

enum class FrameKind { lookup, bind, push, under_lambda };

struct Frame {
  FrameKind kind;
  std::string var;
  Term arg;
};

class Extractor {
 public:
  Extractor(Machine m, std::size_t fuel) : machine_(m), fuel_(fuel) {}

  std::size_t steps() const { return steps_; }

  std::optional<StateDerivation> extract(State s) {
    std::vector<Frame> frames;
    StateDerivation d;
    for (;;) {
      if (!consume()) return std::nullopt;
      StateStep st = step_state(s);
      if (st.kind == StateStepKind::next) {
        const Term& t = s.head.term;
        switch (*st.rule) {
          case Rule::lookup: frames.push_back({FrameKind::lookup, t.name(), {}}); break;
          case Rule::bind: frames.push_back({FrameKind::bind, t.name(), {}}); break;
          case Rule::push: frames.push_back({FrameKind::push, {}, t.arg()}); break;
          default: break;
        }
        s = *st.next;
        continue;
      }
      if (st.kind == StateStepKind::stuck_abs_empty_stack) {
        frames.push_back({FrameKind::under_lambda, s.head.term.name(), {}});
        s = State{Closure{s.head.term.body(), s.head.env}, Stack()};
        continue;
      }
      auto base = stuck(s);
      if (!base) return std::nullopt;
      d = std::move(*base);
      break;
    }
    for (auto it = frames.rbegin(); it != frames.rend(); ++it) fold(*it, d);
    return d;
  }

 private:
  bool consume() {
    if (steps_ == fuel_) return false;
    ++steps_;
    return true;
  }

  // A free head variable: x : [b1] ... [bq] g with the stack derived by b_k.
  std::optional<StateDerivation> stuck(const State& s) {
    std::vector<Closure> cs = s.stack.to_vector();
    StateDerivation d;
    std::vector<TypeMultiset> bs;
    for (const auto& c : cs) {
      if (machine_ == Machine::head) {
        bs.emplace_back();
        d.stack.emplace_back();
        continue;
      }
      auto sub = extract(State{c, Stack()});
      if (!sub) return std::nullopt;
      bs.push_back(TypeMultiset{sub->head.root.type()});
      d.stack.push_back({std::move(sub->head)});
    }
    std::reverse(d.stack.begin(), d.stack.end());
    TypeExpr ty = TypeExpr::atom(next_atom_++);
    for (std::size_t k = bs.size(); k-- > 0;) ty = TypeExpr::arrow(bs[k], ty);
    d.head.root = Derivation::axiom(s.head.term.name(), ty);
    return d;
  }

  static void merge_env(std::map<std::string, std::vector<ClosureDerivation>>& into,
                        const std::map<std::string, std::vector<ClosureDerivation>>& from) {
    for (const auto& [x, ds] : from) {
      auto& dst = into[x];
      dst.insert(dst.end(), ds.begin(), ds.end());
    }
  }

  static void fold(const Frame& f, StateDerivation& d) {
    switch (f.kind) {
      case FrameKind::lookup: {
        ClosureDerivation inner = std::move(d.head);
        ClosureDerivation head;
        head.root = Derivation::axiom(f.var, inner.root.type());
        head.env[f.var].push_back(std::move(inner));
        d.head = std::move(head);
        return;
      }
      case FrameKind::bind: {
        std::vector<ClosureDerivation> bound;
        auto it = d.head.env.find(f.var);
        if (it != d.head.env.end()) {
          bound = std::move(it->second);
          d.head.env.erase(it);
        }
        d.head.root = Derivation::abstraction(f.var, d.head.root);
        d.stack.push_back(std::move(bound));
        return;
      }
      case FrameKind::push: {
        std::vector<ClosureDerivation> arg = std::move(d.stack.back());
        d.stack.pop_back();
        std::vector<Derivation> roots;
        for (const auto& a : arg) {
          roots.push_back(a.root);
          merge_env(d.head.env, a.env);
        }
        d.head.root = Derivation::application(d.head.root, std::move(roots), f.arg);
        return;
      }
      case FrameKind::under_lambda:
        d.head.root = Derivation::abstraction(f.var, d.head.root);
        return;
    }
  }

  Machine machine_;
  std::size_t fuel_;
  std::size_t steps_ = 0;
  AtomId next_atom_ = 0;
};

std::optional<Extraction> extract_with(const Term& t, std::size_t fuel, Machine m) {
  Term input = ensure_variable_convention(t);
  Extractor ex(m, fuel);
  auto d = ex.extract(initial_state(input));
  if (!d) return std::nullopt;
  return Extraction{input, d->head.root, ex.steps()};
}

}  // namespace

std::optional<Extraction> extract_derivation_head(const Term& t, std::size_t fuel) {
  return extract_with(t, fuel, Machine::head);
}

std::optional<Extraction> extract_derivation_beta(const Term& t, std::size_t fuel) {
  return extract_with(t, fuel, Machine::beta);
}

}  // namespace klab
