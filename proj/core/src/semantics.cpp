#include "klab/semantics.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "klab/reduce.hpp"
#include "klab/search.hpp"
#include "klab/unify.hpp"

namespace klab {

namespace {

TypeExpr curry_over(const std::vector<std::string>& vars, const Typing& t) {
  TypeExpr out = t.type;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) out = TypeExpr::arrow(t.context.at(*it), out);
  return out;
}

std::set<AtomId> atoms_of(const TypeExpr& t) {
  std::set<AtomId> s;
  collect_atoms(t, s);
  return s;
}

AtomId next_free(const TypeExpr& t) {
  auto s = atoms_of(t);
  return s.empty() ? 0 : *s.rbegin() + 1;
}

// All instances of the points of size <= bound, up to renaming. Every
// substitution factors into identifications of two atoms and replacements of an
// atom by an arrow over fresh atoms, neither of which shrinks a type.
PointSet close_under_instances(const PointSet& seeds, std::size_t bound) {
  PointSet seen;
  std::vector<TypeExpr> todo;
  auto push = [&](const TypeExpr& t) {
    if (t.size() > bound) return;
    TypeExpr c = canonical_atoms(t);
    if (seen.insert(c).second) todo.push_back(c);
  };
  for (const auto& s : seeds) push(s);
  while (!todo.empty()) {
    TypeExpr t = todo.back();
    todo.pop_back();
    auto atoms = atoms_of(t);
    std::vector<AtomId> as(atoms.begin(), atoms.end());
    for (std::size_t i = 0; i < as.size(); ++i)
      for (std::size_t j = i + 1; j < as.size(); ++j) {
        Substitution s;
        s.bind(as[j], TypeExpr::atom(as[i]));
        push(s.apply(t));
      }
    AtomId fresh = next_free(t);
    for (AtomId a : as) {
      for (std::size_t k = 0;; ++k) {
        std::vector<TypeExpr> elems;
        for (std::size_t e = 0; e < k; ++e) elems.push_back(TypeExpr::atom(fresh + 1 + static_cast<AtomId>(e)));
        Substitution s;
        s.bind(a, TypeExpr::arrow(TypeMultiset(elems), TypeExpr::atom(fresh)));
        TypeExpr r = s.apply(t);
        if (r.size() > bound) break;
        push(r);
      }
    }
  }
  return seen;
}

}  // namespace

void require_closed_normal(const Term& t, const char* what) {
  if (!t.free_vars().empty()) throw std::invalid_argument(std::string(what) + " must be closed: " + pretty(t));
  if (!is_normal(t)) throw std::invalid_argument(std::string(what) + " must be normal: " + pretty(t));
}

SemSet interpret(const Term& t, std::size_t bound, const InterpretOptions& opts) {
  SemSet out;
  out.term = t;
  out.bound = bound;
  out.vars = t.free_vars();
  Term subject = t;
  std::size_t cap = bound;
  auto nf = leftmost_reduce(t, opts.fuel);
  if (nf.status == ReductionStatus::normalized) {
    // A derivation of a normal term is no larger than its curried typing.
    subject = nf.term;
  } else {
    out.complete = false;
    cap = opts.derivation_cap ? opts.derivation_cap : bound;
  }
  PointSet seeds;
  TypingEnumerator e(subject);
  for (std::size_t s = 1; s <= cap; ++s)
    for (const auto& item : e.at_size(s)) seeds.insert(curry_over(out.vars, item.typing));
  out.points = close_under_instances(seeds, bound);
  return out;
}

PointSet interpret_in_env(const Term& t, const SemEnv& rho, std::size_t derivation_cap) {
  AtomId offset = 0;
  for (const auto& [x, pts] : rho)
    for (const auto& p : pts) offset = std::max(offset, next_free(p));
  PointSet out;
  TypingEnumerator e(t);
  for (std::size_t s = 1; s <= derivation_cap; ++s) {
    for (const auto& item : e.at_size(s)) {
      Substitution shift;
      std::set<AtomId> atoms;
      collect_atoms(item.typing.context, atoms);
      collect_atoms(item.typing.type, atoms);
      for (AtomId a : atoms) shift.bind(a, TypeExpr::atom(a + offset));
      Context ctx = shift.apply(item.typing.context);
      TypeExpr ty = shift.apply(item.typing.type);
      // Match every element of every multiset against some point of ρ.
      std::vector<TypeExpr> patterns;
      std::vector<const PointSet*> targets;
      bool possible = true;
      for (const auto& [x, m] : ctx.entries()) {
        auto it = rho.find(x);
        if (it == rho.end() || it->second.empty()) {
          possible = false;
          break;
        }
        for (const auto& el : m) {
          patterns.push_back(el);
          targets.push_back(&it->second);
        }
      }
      if (!possible) continue;
      std::function<void(std::size_t, const Substitution&)> go = [&](std::size_t i, const Substitution& sg) {
        if (i == patterns.size()) {
          out.insert(sg.apply(ty));
          return;
        }
        for (const auto& target : *targets[i]) {
          Substitution next = sg;
          if (match(patterns[i], target, next)) go(i + 1, next);
        }
      };
      go(0, Substitution());
    }
  }
  return out;
}

PointSet semantic_apply(const PointSet& d1, const PointSet& d2) {
  PointSet out;
  for (const auto& p : d1) {
    if (!p.is_arrow()) continue;
    bool ok = std::all_of(p.arg().begin(), p.arg().end(), [&](const TypeExpr& e) { return d2.count(e) != 0; });
    if (ok) out.insert(p.result());
  }
  return out;
}

std::size_t step_bound(const TypeExpr& point) {
  if (!point.is_arrow()) throw std::invalid_argument("step bound needs an arrow point: " + to_string(point));
  return 2 * point.arg().size() + point.result().size() + 2;
}

struct GroundPoints::Impl {
  explicit Impl(const Term& t) : enumerator(t), by_size(1) {}
  TypingEnumerator enumerator;
  std::vector<std::vector<TypeExpr>> by_size;
};

GroundPoints::GroundPoints(const Term& t) : term_(t) {
  require_closed_normal(t, "term");
  impl_ = std::make_unique<Impl>(t);
}

GroundPoints::~GroundPoints() = default;

const std::vector<TypeExpr>& GroundPoints::at(std::size_t size) {
  auto& by = impl_->by_size;
  while (by.size() <= size) {
    std::size_t k = by.size();
    std::vector<TypeExpr> level;
    for (const auto& item : impl_->enumerator.at_size(k))
      if (item.typing.type.size() == k) level.push_back(item.typing.type);
    by.push_back(std::move(level));
  }
  return by[size];
}

std::vector<TypeExpr> ground_points(const Term& t, std::size_t max_size) {
  GroundPoints g(t);
  std::vector<TypeExpr> out;
  for (std::size_t s = 1; s <= max_size; ++s)
    for (const auto& p : g.at(s)) out.push_back(p);
  return out;
}

namespace {

bool accepts(PredictMode mode, const Substitution& sg, const TypeExpr& result) {
  return mode == PredictMode::head || is_exact(sg.apply(result));
}

// Calls visit with every pair of total cost exactly `cost`; stops when it returns false.
bool pairs_at_cost(GroundPoints& vs, GroundPoints& us, PredictMode mode, std::size_t cost,
                   const std::function<bool(const UnifPair&)>& visit) {
  for (std::size_t fs = 1; fs + 1 <= cost; ++fs) {
    std::size_t rem = cost - 1 - fs;
    for (const auto& f : vs.at(fs)) {
      if (!f.is_arrow()) continue;
      std::size_t n = f.arg().count();
      AtomId base = next_free(f);
      if (n == 0) {
        if (rem != 0) continue;
        if (accepts(mode, Substitution(), f.result()) &&
            !visit(UnifPair{f, TypeMultiset(), Substitution(), cost}))
          return false;
        continue;
      }
      // Nondecreasing choices of (size, index) among the argument's points.
      std::vector<std::pair<std::size_t, std::size_t>> flat;
      for (std::size_t s = 1; s <= rem; ++s)
        for (std::size_t i = 0; i < us.at(s).size(); ++i) flat.emplace_back(s, i);
      std::vector<std::size_t> chosen;
      std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t start, std::size_t left) {
        if (chosen.size() == n) {
          if (left != 0) return true;
          std::vector<TypeExpr> elems;
          AtomId offset = base;
          for (auto c : chosen) {
            const TypeExpr& p = us.at(flat[c].first)[flat[c].second];
            Substitution sh;
            for (AtomId a : atoms_of(p)) sh.bind(a, TypeExpr::atom(a + offset));
            elems.push_back(sh.apply(p));
            offset += next_free(p);
          }
          TypeMultiset args(elems);
          for (const auto& sg : unify_multisets(f.arg(), args)) {
            if (!accepts(mode, sg, f.result())) continue;
            if (!visit(UnifPair{f, args, sg, cost})) return false;
          }
          return true;
        }
        for (std::size_t k = start; k < flat.size(); ++k) {
          std::size_t s = flat[k].first;
          if (s * (n - chosen.size()) > left) break;
          chosen.push_back(k);
          bool cont = go(k, left - s);
          chosen.pop_back();
          if (!cont) return false;
        }
        return true;
      };
      if (!go(0, rem)) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<UnifPair> unifiable_pairs(const Term& v, const Term& u, PredictMode mode, std::size_t max_cost) {
  require_closed_normal(v, "function");
  require_closed_normal(u, "argument");
  GroundPoints vs(v), us(u);
  return unifiable_pairs(vs, us, mode, max_cost);
}

std::vector<UnifPair> unifiable_pairs(GroundPoints& vs, GroundPoints& us, PredictMode mode, std::size_t max_cost) {
  std::vector<UnifPair> out;
  for (std::size_t c = 1; c <= max_cost; ++c)
    pairs_at_cost(vs, us, mode, c, [&](const UnifPair& p) {
      out.push_back(p);
      return true;
    });
  return out;
}

std::optional<Prediction> predict_steps(const Term& v, const Term& u, PredictMode mode, std::size_t bound) {
  require_closed_normal(v, "function");
  require_closed_normal(u, "argument");
  GroundPoints vs(v), us(u);
  return predict_steps(vs, us, mode, bound);
}

std::optional<Prediction> predict_steps(GroundPoints& vs, GroundPoints& us, PredictMode mode, std::size_t bound) {
  std::size_t level = std::min<std::size_t>(8, bound);
  for (std::size_t c = 1; c <= bound; ++c) {
    if (c > level) level = std::min(bound, 2 * level);
    std::optional<UnifPair> hit;
    pairs_at_cost(vs, us, mode, c, [&](const UnifPair& p) {
      hit = p;
      return false;
    });
    if (hit) return Prediction{c, *hit, level};
  }
  return std::nullopt;
}

const char* to_string(Normalizability n) {
  switch (n) {
    case Normalizability::yes_head: return "yes_head";
    case Normalizability::yes_normal: return "yes_normal";
    case Normalizability::unknown_within_bound: return "unknown_within_bound";
  }
  return "?";
}

Normalizability check_app_normalizability(const Term& v, const Term& u, std::size_t bound) {
  if (predict_steps(v, u, PredictMode::beta, bound)) return Normalizability::yes_normal;
  if (predict_steps(v, u, PredictMode::head, bound)) return Normalizability::yes_head;
  return Normalizability::unknown_within_bound;
}

std::string to_json(const Prediction& p) {
  nlohmann::json j;
  j["steps"] = p.steps;
  j["bound"] = p.bound_used;
  j["point"] = to_string(p.witness.fun_point);
  j["point_size"] = p.witness.fun_point.size();
  j["arguments"] = to_string(p.witness.arg_points);
  j["arguments_size"] = p.witness.arg_points.size();
  j["unifier"] = to_string(p.witness.unifier);
  j["cost"] = p.witness.cost;
  return j.dump();
}

}  // namespace klab
