#include "klab/unify.hpp"

#include <algorithm>

namespace klab {

namespace {

struct Eq {
  bool multiset;
  TypeExpr a, b;
  std::vector<TypeExpr> as, bs;
};

bool occurs(AtomId x, const TypeExpr& t) {
  if (t.is_atom()) return t.atom_id() == x;
  for (const auto& e : t.arg())
    if (occurs(x, e)) return true;
  return occurs(x, t.result());
}

Substitution extend(const Substitution& s, AtomId x, const TypeExpr& t) {
  Substitution one;
  one.bind(x, t);
  Substitution out;
  for (const auto& [a, u] : s.bindings()) out.bind(a, one.apply(u));
  out.bind(x, t);
  return out;
}

class Solver {
 public:
  Solver(std::vector<Substitution>& out, std::size_t limit) : out_(out), limit_(limit) {}

  void run(std::vector<Eq> work, Substitution s) {
    while (!work.empty()) {
      if (out_.size() >= limit_) return;
      Eq eq = std::move(work.back());
      work.pop_back();
      if (!eq.multiset) {
        TypeExpr a = s.apply(eq.a);
        TypeExpr b = s.apply(eq.b);
        if (a == b) continue;
        if (!a.is_atom() && b.is_atom()) std::swap(a, b);
        if (a.is_atom()) {
          if (b.is_atom() && b.atom_id() > a.atom_id()) std::swap(a, b);
          if (occurs(a.atom_id(), b)) return;
          s = extend(s, a.atom_id(), b);
          continue;
        }
        if (a.arg().count() != b.arg().count()) return;
        work.push_back(Eq{false, a.result(), b.result(), {}, {}});
        if (!a.arg().empty())
          work.push_back(Eq{true, {}, {}, a.arg().elements(), b.arg().elements()});
        continue;
      }
      if (eq.as.size() != eq.bs.size()) return;
      if (eq.as.empty()) continue;
      TypeExpr head = s.apply(eq.as.back());
      eq.as.pop_back();
      std::vector<TypeExpr> tried;
      for (std::size_t j = 0; j < eq.bs.size(); ++j) {
        TypeExpr cand = s.apply(eq.bs[j]);
        if (std::find(tried.begin(), tried.end(), cand) != tried.end()) continue;
        tried.push_back(cand);
        if (!compatible(head, cand)) continue;
        std::vector<TypeExpr> rest = eq.bs;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
        std::vector<Eq> next = work;
        next.push_back(Eq{true, {}, {}, eq.as, std::move(rest)});
        next.push_back(Eq{false, head, cand, {}, {}});
        run(std::move(next), s);
      }
      return;
    }
    if (std::find(out_.begin(), out_.end(), s) == out_.end()) out_.push_back(std::move(s));
  }

 private:
  // Cheap necessary condition: arrows must agree on multiset cardinality.
  static bool compatible(const TypeExpr& a, const TypeExpr& b) {
    if (a.is_atom() || b.is_atom()) return true;
    return a.arg().count() == b.arg().count();
  }

  std::vector<Substitution>& out_;
  std::size_t limit_;
};

}  // namespace

std::vector<Substitution> unify_all(const TypeExpr& a, const TypeExpr& b, std::size_t limit) {
  std::vector<Substitution> out;
  Solver(out, limit).run({Eq{false, a, b, {}, {}}}, Substitution());
  return out;
}

std::optional<Substitution> unify_types(const TypeExpr& a, const TypeExpr& b) {
  auto all = unify_all(a, b, 1);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<Substitution> unify_multisets_from(const Substitution& base, const TypeMultiset& a,
                                               const TypeMultiset& b, std::size_t limit) {
  std::vector<Substitution> out;
  if (a.count() != b.count()) return out;
  Solver(out, limit).run({Eq{true, {}, {}, a.elements(), b.elements()}}, base);
  return out;
}

std::vector<Substitution> unify_multisets(const TypeMultiset& a, const TypeMultiset& b,
                                          std::size_t limit) {
  return unify_multisets_from(Substitution(), a, b, limit);
}

}  // namespace klab
