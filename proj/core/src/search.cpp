#include "klab/search.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "klab/unify.hpp"

namespace klab {

struct Skeleton::Node {
  Term::Kind kind;
  std::vector<Skeleton> children;  // Abs: body; App: fun then argument copies
  std::vector<Skeleton> args;
  std::size_t size;
};

Skeleton Skeleton::leaf() {
  Skeleton s;
  s.node_ = std::make_shared<Node>(Node{Term::Kind::Var, {}, {}, 1});
  return s;
}

Skeleton Skeleton::abs(Skeleton body) {
  Skeleton s;
  std::size_t n = body.size() + 1;
  s.node_ = std::make_shared<Node>(Node{Term::Kind::Abs, {std::move(body)}, {}, n});
  return s;
}

Skeleton Skeleton::app(Skeleton fun, std::vector<Skeleton> args) {
  Skeleton s;
  std::size_t n = fun.size() + 1;
  for (const auto& a : args) n += a.size();
  s.node_ = std::make_shared<Node>(Node{Term::Kind::App, {std::move(fun)}, std::move(args), n});
  return s;
}

Term::Kind Skeleton::kind() const { return node_->kind; }
const Skeleton& Skeleton::body() const { return node_->children[0]; }
const Skeleton& Skeleton::fun() const { return node_->children[0]; }
const std::vector<Skeleton>& Skeleton::args() const { return node_->args; }
std::size_t Skeleton::size() const { return node_->size; }

bool operator==(const Skeleton& a, const Skeleton& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: return true;
    case Term::Kind::Abs: return a.body() == b.body();
    case Term::Kind::App: return a.fun() == b.fun() && a.args() == b.args();
  }
  return false;
}

std::string to_string(const Skeleton& s) {
  switch (s.kind()) {
    case Term::Kind::Var: return "*";
    case Term::Kind::Abs: return "\\" + to_string(s.body());
    case Term::Kind::App: {
      std::string out = "(" + to_string(s.fun()) + ")[";
      for (std::size_t i = 0; i < s.args().size(); ++i) {
        if (i) out += ",";
        out += to_string(s.args()[i]);
      }
      return out + "]";
    }
  }
  return "?";
}

Skeleton skeleton_of(const Derivation& d) {
  switch (d.rule()) {
    case Derivation::Rule::axiom: return Skeleton::leaf();
    case Derivation::Rule::abstraction: return Skeleton::abs(skeleton_of(d.premises()[0]));
    case Derivation::Rule::application: {
      std::vector<Skeleton> args;
      for (std::size_t i = 1; i < d.premises().size(); ++i) args.push_back(skeleton_of(d.premises()[i]));
      return Skeleton::app(skeleton_of(d.premises()[0]), std::move(args));
    }
  }
  return Skeleton::leaf();
}

bool fits(const Skeleton& s, const Term& t) {
  if (s.kind() != t.kind()) return false;
  switch (t.kind()) {
    case Term::Kind::Var: return true;
    case Term::Kind::Abs: return fits(s.body(), t.body());
    case Term::Kind::App:
      if (!fits(s.fun(), t.fun())) return false;
      for (const auto& a : s.args())
        if (!fits(a, t.arg())) return false;
      return true;
  }
  return false;
}

namespace {

// Subterms in preorder with child links.
struct TermIndex {
  struct Entry {
    Term term;
    int a = -1, b = -1;
  };
  std::vector<Entry> nodes;

  explicit TermIndex(const Term& t) { add(t); }

  int add(const Term& t) {
    int id = static_cast<int>(nodes.size());
    nodes.push_back(Entry{t});
    if (t.is_abs()) {
      int c = add(t.body());
      nodes[id].a = c;
    } else if (t.is_app()) {
      int f = add(t.fun());
      int u = add(t.arg());
      nodes[id].a = f;
      nodes[id].b = u;
    }
    return id;
  }
};

// Calls visit with every nondecreasing index sequence into `sizes` (sorted
// ascending) whose sizes sum to `total`. With count >= 0 the length is fixed.
bool for_each_multiset(const std::vector<std::size_t>& sizes, std::size_t total, long count,
                       const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> chosen;
  std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t start, std::size_t left) {
    long have = static_cast<long>(chosen.size());
    if (left == 0) {
      if (count < 0 || have == count) return visit(chosen);
      return true;
    }
    if (count >= 0 && have >= count) return true;
    for (std::size_t i = start; i < sizes.size(); ++i) {
      if (sizes[i] > left) break;
      if (count >= 0) {
        std::size_t slots = static_cast<std::size_t>(count - have);
        if (sizes[i] * slots > left) break;
      }
      chosen.push_back(i);
      bool cont = go(i, left - sizes[i]);
      chosen.pop_back();
      if (!cont) return false;
    }
    return true;
  };
  return go(0, total);
}

class SkeletonLevels {
 public:
  explicit SkeletonLevels(const Term& t) : idx_(t), memo_(idx_.nodes.size()) {}

  const std::vector<Skeleton>& at(int node, std::size_t s) {
    auto& row = memo_[node];
    if (row.size() <= s) row.resize(s + 1);
    if (row[s]) return *row[s];
    std::vector<Skeleton> out;
    const auto& e = idx_.nodes[node];
    if (s >= 1) {
      switch (e.term.kind()) {
        case Term::Kind::Var:
          if (s == 1) out.push_back(Skeleton::leaf());
          break;
        case Term::Kind::Abs:
          for (const auto& b : at(e.a, s - 1)) out.push_back(Skeleton::abs(b));
          break;
        case Term::Kind::App:
          for (std::size_t sv = 1; sv + 1 <= s; ++sv) {
            const auto& funs = at(e.a, sv);
            if (funs.empty()) continue;
            std::size_t rem = s - 1 - sv;
            std::vector<Skeleton> pool;
            std::vector<std::size_t> sizes;
            for (std::size_t su = 1; su <= rem; ++su)
              for (const auto& u : at(e.b, su)) {
                pool.push_back(u);
                sizes.push_back(su);
              }
            for (const auto& f : funs) {
              for_each_multiset(sizes, rem, -1, [&](const std::vector<std::size_t>& pick) {
                std::vector<Skeleton> args;
                for (auto i : pick) args.push_back(pool[i]);
                out.push_back(Skeleton::app(f, std::move(args)));
                return true;
              });
            }
          }
          break;
      }
    }
    row[s] = std::move(out);
    return *row[s];
  }

 private:
  TermIndex idx_;
  std::vector<std::vector<std::optional<std::vector<Skeleton>>>> memo_;
};

std::size_t typing_key(const Typing& t) {
  std::size_t h = curry(t.context, t.type).shape_hash();
  for (const auto& [x, m] : t.context.entries()) h = h * 31 + std::hash<std::string>{}(x);
  return h;
}

void add_unique(std::vector<Derivation>& out, Derivation d) {
  for (const auto& o : out)
    if (equivalent_up_to_renaming(o.typing(), d.typing())) return;
  out.push_back(std::move(d));
}

std::vector<Derivation> infer_rec(const Term& t, const Skeleton& s, AtomId& next) {
  std::vector<Derivation> out;
  switch (t.kind()) {
    case Term::Kind::Var:
      out.push_back(Derivation::axiom(t.name(), TypeExpr::atom(next++)));
      return out;
    case Term::Kind::Abs:
      for (auto& b : infer_rec(t.body(), s.body(), next))
        out.push_back(Derivation::abstraction(t.name(), std::move(b)));
      return out;
    case Term::Kind::App: {
      std::vector<Derivation> funs = infer_rec(t.fun(), s.fun(), next);
      std::vector<std::vector<Derivation>> alts;
      for (const auto& a : s.args()) alts.push_back(infer_rec(t.arg(), a, next));
      for (const auto& alt : alts)
        if (alt.empty()) return out;
      std::vector<std::size_t> pick(alts.size(), 0);
      for (;;) {
        std::vector<Derivation> args;
        std::vector<TypeExpr> tys;
        for (std::size_t i = 0; i < alts.size(); ++i) {
          args.push_back(alts[i][pick[i]]);
          tys.push_back(args.back().type());
        }
        for (const auto& f : funs) {
          std::vector<Substitution> sigmas;
          if (f.type().is_atom()) {
            Substitution sg;
            sg.bind(f.type().atom_id(), TypeExpr::arrow(TypeMultiset(tys), TypeExpr::atom(next++)));
            sigmas.push_back(sg);
          } else {
            sigmas = unify_multisets(f.type().arg(), TypeMultiset(tys));
          }
          for (const auto& sg : sigmas) {
            std::vector<Derivation> sargs;
            for (const auto& a : args) sargs.push_back(apply_substitution(sg, a));
            add_unique(out, Derivation::application(apply_substitution(sg, f), std::move(sargs), t.arg()));
          }
        }
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == alts[i].size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
      return out;
    }
  }
  return out;
}

Typing canonical(const Context& c, const TypeExpr& t) {
  std::map<AtomId, AtomId> ren;
  canonical_atoms(curry(c, t), 0, &ren);
  Substitution s;
  for (const auto& [a, b] : ren) s.bind(a, TypeExpr::atom(b));
  return Typing{s.apply(c), s.apply(t)};
}

AtomId atom_count(const Typing& t) {
  std::set<AtomId> atoms;
  collect_atoms(t.context, atoms);
  collect_atoms(t.type, atoms);
  return atoms.empty() ? 0 : *atoms.rbegin() + 1;
}

Substitution shift(const Typing& t, AtomId offset) {
  std::set<AtomId> atoms;
  collect_atoms(t.context, atoms);
  collect_atoms(t.type, atoms);
  Substitution s;
  for (AtomId a : atoms) s.bind(a, TypeExpr::atom(a + offset));
  return s;
}

}  // namespace

void enumerate_skeletons(const Term& t, std::size_t bound,
                         const std::function<bool(const Skeleton&)>& visit) {
  SkeletonLevels levels(t);
  for (std::size_t s = 1; s <= bound; ++s)
    for (const auto& sk : levels.at(0, s))
      if (!visit(sk)) return;
}

std::vector<Derivation> infer_skeleton_derivations(const Term& t, const Skeleton& s) {
  if (!fits(s, t)) return {};
  AtomId next = 0;
  return infer_rec(t, s, next);
}

std::optional<Derivation> infer_skeleton_typing(const Term& t, const Skeleton& s, bool exact_only) {
  for (auto& d : infer_skeleton_derivations(t, s))
    if (!exact_only || (is_exact(d.context()) && is_exact(d.type()))) return d;
  return std::nullopt;
}

// ---------------------------------------------------------------- enumerator

struct TypingEnumerator::Impl {
  struct Level {
    std::vector<TypedSkeleton> items;
    std::vector<AtomId> atoms;
    std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
  };

  TermIndex idx;
  std::vector<std::vector<std::unique_ptr<Level>>> memo;
  std::size_t explored = 0;

  explicit Impl(const Term& t) : idx(t), memo(idx.nodes.size()) {}

  static void add(Level& level, std::size_t size, Typing typing, Skeleton skel) {
    Typing c = canonical(typing.context, typing.type);
    std::size_t key = typing_key(c);
    auto& bucket = level.buckets[key];
    for (std::size_t i : bucket)
      if (equivalent_up_to_renaming(level.items[i].typing, c)) return;
    bucket.push_back(level.items.size());
    level.atoms.push_back(atom_count(c));
    level.items.push_back(TypedSkeleton{size, std::move(c), std::move(skel)});
  }

  const Level& at(int node, std::size_t s) {
    auto& row = memo[node];
    if (row.size() <= s) row.resize(s + 1);
    if (row[s]) return *row[s];
    auto level_ptr = std::make_unique<Level>();
    Level& level = *level_ptr;
    const auto& e = idx.nodes[node];
    if (s >= 1) {
      switch (e.term.kind()) {
        case Term::Kind::Var:
          if (s == 1) {
            TypeExpr g = TypeExpr::atom(0);
            add(level, 1, Typing{Context::single(e.term.name(), TypeMultiset{g}), g}, Skeleton::leaf());
          }
          break;
        case Term::Kind::Abs: {
          const Level& body = at(e.a, s - 1);
          for (const auto& b : body.items) {
            ++explored;
            const std::string& x = e.term.name();
            add(level, s,
                Typing{b.typing.context.without(x),
                       TypeExpr::arrow(b.typing.context.at(x), b.typing.type)},
                Skeleton::abs(b.skeleton));
          }
          break;
        }
        case Term::Kind::App:
          app_level(level, e, s);
          break;
      }
    }
    memo[node][s] = std::move(level_ptr);
    return *memo[node][s];
  }

  void app_level(Level& level, const TermIndex::Entry& e, std::size_t s) {
    for (std::size_t sv = 1; sv + 1 <= s; ++sv) {
      std::size_t rem = s - 1 - sv;
      const Level& fl = at(e.a, sv);
      const std::vector<TypedSkeleton>& funs = fl.items;
      const std::vector<AtomId>& fun_atoms = fl.atoms;
      if (funs.empty()) continue;
      std::vector<const TypedSkeleton*> pool;
      std::vector<AtomId> pool_atoms;
      std::vector<std::size_t> sizes;
      for (std::size_t su = 1; su <= rem; ++su) {
        const Level& l = at(e.b, su);
        for (std::size_t i = 0; i < l.items.size(); ++i) {
          pool.push_back(&l.items[i]);
          pool_atoms.push_back(l.atoms[i]);
          sizes.push_back(su);
        }
      }

      for (std::size_t fi = 0; fi < funs.size(); ++fi) {
        const TypedSkeleton& f = funs[fi];
        long count = f.typing.type.is_arrow() ? static_cast<long>(f.typing.type.arg().count()) : -1;
        if (count == 0 || rem == 0) {
          if (rem != 0 || count > 0) continue;
          combine(level, s, f, fun_atoms[fi], {}, pool, pool_atoms);
          continue;
        }
        for_each_multiset(sizes, rem, count, [&](const std::vector<std::size_t>& pick) {
          combine(level, s, f, fun_atoms[fi], pick, pool, pool_atoms);
          return true;
        });
      }
    }
  }

  void combine(Level& level, std::size_t s, const TypedSkeleton& f, AtomId f_atoms,
               const std::vector<std::size_t>& pick, const std::vector<const TypedSkeleton*>& pool,
               const std::vector<AtomId>& pool_atoms) {
    ++explored;
    AtomId offset = f_atoms;
    Context ctx = f.typing.context;
    Context args_ctx;
    std::vector<TypeExpr> tys;
    std::vector<Skeleton> skels;
    for (std::size_t i : pick) {
      const TypedSkeleton& u = *pool[i];
      Substitution sh = shift(u.typing, offset);
      args_ctx = args_ctx + sh.apply(u.typing.context);
      tys.push_back(sh.apply(u.typing.type));
      skels.push_back(u.skeleton);
      offset += pool_atoms[i];
    }
    Skeleton skel = Skeleton::app(f.skeleton, std::move(skels));
    const TypeExpr& ft = f.typing.type;
    if (ft.is_atom()) {
      Substitution sg;
      TypeExpr beta = TypeExpr::atom(offset);
      sg.bind(ft.atom_id(), TypeExpr::arrow(TypeMultiset(tys), beta));
      add(level, s, Typing{sg.apply(ctx) + args_ctx, beta}, skel);
      return;
    }
    for (const auto& sg : unify_multisets(ft.arg(), TypeMultiset(tys)))
      add(level, s, Typing{sg.apply(ctx + args_ctx), sg.apply(ft.result())}, skel);
  }
};

TypingEnumerator::TypingEnumerator(const Term& t) : impl_(std::make_unique<Impl>(t)) {}
TypingEnumerator::~TypingEnumerator() = default;

const std::vector<TypedSkeleton>& TypingEnumerator::at_size(std::size_t size) {
  return impl_->at(0, size).items;
}

std::size_t TypingEnumerator::explored() const { return impl_->explored; }

std::vector<TypedSkeleton> enumerate_typings(const Term& t, std::size_t max_size) {
  TypingEnumerator e(t);
  std::vector<TypedSkeleton> out;
  for (std::size_t s = 1; s <= max_size; ++s)
    for (const auto& item : e.at_size(s)) out.push_back(item);
  return out;
}

SearchResult min_derivation_size(const Term& t, std::size_t size_bound, bool exact_only) {
  SearchResult r;
  TypingEnumerator e(t);
  for (std::size_t s = 1; s <= size_bound; ++s) {
    for (const auto& item : e.at_size(s)) {
      if (exact_only && !(is_exact(item.typing.context) && is_exact(item.typing.type))) continue;
      r.status = SearchStatus::found;
      r.min_size = s;
      r.witness = infer_skeleton_typing(t, item.skeleton, exact_only);
      r.explored = e.explored();
      return r;
    }
  }
  r.explored = e.explored();
  return r;
}

std::optional<Derivation> derive_typing(const Term& t, const Typing& target, std::size_t bound) {
  TypingEnumerator e(t);
  for (std::size_t s = 1; s <= bound; ++s) {
    for (const auto& item : e.at_size(s)) {
      if (!is_instance(item.typing, target)) continue;
      for (const auto& d : infer_skeleton_derivations(t, item.skeleton)) {
        Substitution sg;
        if (is_instance(d.typing(), target, &sg)) return apply_substitution(sg, d);
      }
    }
  }
  return std::nullopt;
}

}  // namespace klab
