#include "klab/types.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>

namespace klab {

struct TypeExpr::Node {
  bool atom = true;
  AtomId id = 0;
  TypeMultiset arg;
  TypeExpr result;
  std::size_t size = 1;
  std::size_t aux = 0;
  std::size_t hash = 0;
  std::size_t shape = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

TypeExpr TypeExpr::atom(AtomId id) {
  auto n = std::make_shared<Node>();
  n->id = id;
  n->hash = mix(11, id);
  n->shape = 11;
  return TypeExpr(std::move(n));
}

TypeExpr TypeExpr::arrow(TypeMultiset arg, TypeExpr result) {
  auto n = std::make_shared<Node>();
  n->atom = false;
  n->size = arg.aux() + result.size() + 1;
  n->aux = arg.size() + result.aux() + 1;
  std::size_t h = 13, s = 13;
  std::vector<std::size_t> shapes;
  for (const auto& e : arg) {
    h = mix(h, e.hash());
    shapes.push_back(e.shape_hash());
  }
  std::sort(shapes.begin(), shapes.end());
  for (auto v : shapes) s = mix(s, v);
  n->hash = mix(mix(h, arg.count()), result.hash());
  n->shape = mix(mix(s, arg.count()), result.shape_hash());
  n->arg = std::move(arg);
  n->result = std::move(result);
  return TypeExpr(std::move(n));
}

bool TypeExpr::is_atom() const { return node_->atom; }
AtomId TypeExpr::atom_id() const { return node_->id; }
const TypeMultiset& TypeExpr::arg() const { return node_->arg; }
const TypeExpr& TypeExpr::result() const { return node_->result; }
std::size_t TypeExpr::size() const { return node_->size; }
std::size_t TypeExpr::aux() const { return node_->aux; }
std::size_t TypeExpr::hash() const { return node_->hash; }
std::size_t TypeExpr::shape_hash() const { return node_->shape; }

TypeMultiset::TypeMultiset(std::vector<TypeExpr> elems) : elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
}

std::size_t TypeMultiset::size() const {
  std::size_t s = 0;
  for (const auto& e : elems_) s += e.size();
  return s;
}

std::size_t TypeMultiset::aux() const {
  std::size_t s = 0;
  for (const auto& e : elems_) s += e.aux();
  return s;
}

TypeMultiset TypeMultiset::operator+(const TypeMultiset& other) const {
  TypeMultiset out;
  out.elems_.reserve(elems_.size() + other.elems_.size());
  std::merge(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
             std::back_inserter(out.elems_));
  return out;
}

int compare(const TypeExpr& a, const TypeExpr& b) {
  if (a.node_ == b.node_) return 0;
  if (a.is_atom() != b.is_atom()) return a.is_atom() ? -1 : 1;
  if (a.is_atom()) return a.atom_id() < b.atom_id() ? -1 : (a.atom_id() > b.atom_id() ? 1 : 0);
  if (int c = compare(a.arg(), b.arg())) return c;
  return compare(a.result(), b.result());
}

int compare(const TypeMultiset& a, const TypeMultiset& b) {
  std::size_t n = std::min(a.count(), b.count());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare(a[i], b[i])) return c;
  if (a.count() == b.count()) return 0;
  return a.count() < b.count() ? -1 : 1;
}

// ---------------------------------------------------------------- text

std::string to_string(const TypeMultiset& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.count(); ++i) {
    if (i) s += ",";
    s += to_string(m[i]);
  }
  return s + "]";
}

std::string to_string(const TypeExpr& t) {
  if (t.is_atom()) return "\xCE\xB3" + std::to_string(t.atom_id());
  return "(" + to_string(t.arg()) + "," + to_string(t.result()) + ")";
}

namespace {

class TypeParser {
 public:
  explicit TypeParser(std::string_view s) : s_(s) {}

  TypeExpr whole_type() {
    TypeExpr t = type();
    end();
    return t;
  }

  TypeMultiset whole_multiset() {
    TypeMultiset m = multiset();
    end();
    return m;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw TypeParseError("type syntax error at position " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void end() {
    skip();
    if (pos_ != s_.size()) fail("trailing input");
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  TypeExpr type() {
    skip();
    if (eat('(')) {
      TypeMultiset m = multiset();
      expect(',');
      TypeExpr r = type();
      expect(')');
      return TypeExpr::arrow(std::move(m), std::move(r));
    }
    if (s_.substr(pos_, 2) == "\xCE\xB3") {
      pos_ += 2;
    } else if (pos_ < s_.size() && s_[pos_] == 'g') {
      ++pos_;
    } else {
      fail("expected an atom or an arrow");
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an atom index");
    return TypeExpr::atom(static_cast<AtomId>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
  }

  TypeMultiset multiset() {
    expect('[');
    std::vector<TypeExpr> elems;
    if (eat(']')) return TypeMultiset(std::move(elems));
    do {
      elems.push_back(type());
    } while (eat(','));
    expect(']');
    return TypeMultiset(std::move(elems));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

TypeExpr parse_type(std::string_view text) { return TypeParser(text).whole_type(); }
TypeMultiset parse_multiset(std::string_view text) { return TypeParser(text).whole_multiset(); }

void collect_atoms(const TypeExpr& t, std::set<AtomId>& out) {
  if (t.is_atom()) {
    out.insert(t.atom_id());
    return;
  }
  collect_atoms(t.arg(), out);
  collect_atoms(t.result(), out);
}

void collect_atoms(const TypeMultiset& m, std::set<AtomId>& out) {
  for (const auto& e : m) collect_atoms(e, out);
}

AtomId max_atom(const TypeExpr& t) {
  std::set<AtomId> s;
  collect_atoms(t, s);
  return s.empty() ? 0 : *s.rbegin();
}

// ---------------------------------------------------------------- contexts

Context Context::single(const std::string& x, TypeMultiset m) {
  Context c;
  c.set(x, std::move(m));
  return c;
}

const TypeMultiset& Context::at(const std::string& x) const {
  static const TypeMultiset empty;
  auto it = map_.find(x);
  return it == map_.end() ? empty : it->second;
}

Context Context::without(const std::string& x) const {
  Context c = *this;
  c.map_.erase(x);
  return c;
}

Context Context::operator+(const Context& other) const {
  Context c = *this;
  for (const auto& [x, m] : other.map_) {
    auto it = c.map_.find(x);
    if (it == c.map_.end()) c.map_.emplace(x, m);
    else it->second = it->second + m;
  }
  return c;
}

void Context::set(const std::string& x, TypeMultiset m) {
  if (m.empty()) map_.erase(x);
  else map_[x] = std::move(m);
}

bool operator==(const Context& a, const Context& b) { return a.map_ == b.map_; }

std::string to_string(const Context& c) {
  std::string s;
  for (const auto& [x, m] : c.entries()) {
    if (!s.empty()) s += ", ";
    s += x + ":" + to_string(m);
  }
  return s;
}

void collect_atoms(const Context& c, std::set<AtomId>& out) {
  for (const auto& [x, m] : c.entries()) collect_atoms(m, out);
}

TypeExpr curry(const Context& c, const TypeExpr& t) {
  TypeExpr r = t;
  const auto& e = c.entries();
  for (auto it = e.rbegin(); it != e.rend(); ++it) r = TypeExpr::arrow(it->second, r);
  return r;
}

// ---------------------------------------------------------------- exactness

bool is_exact(const TypeExpr& t) {
  if (t.is_atom()) return true;
  for (const auto& e : t.arg())
    if (!is_coexact(e)) return false;
  return is_exact(t.result());
}

bool is_coexact(const TypeExpr& t) {
  if (t.is_atom()) return true;
  if (t.arg().empty()) return false;
  for (const auto& e : t.arg())
    if (!is_exact(e)) return false;
  return is_coexact(t.result());
}

bool is_exact(const Context& c) {
  for (const auto& [x, m] : c.entries())
    for (const auto& e : m)
      if (!is_coexact(e)) return false;
  return true;
}

namespace {

bool one_shape(const TypeExpr& t, bool positive) {
  if (t.is_atom()) return true;
  // Elements of the multiset have the opposite polarity of the arrow.
  if (positive == false && t.arg().count() != 1) return false;
  for (const auto& e : t.arg())
    if (!one_shape(e, !positive)) return false;
  return one_shape(t.result(), positive);
}

}  // namespace

bool has_one_typing_shape(const Context& c, const TypeExpr& t) {
  return one_shape(curry(c, t), true);
}

// ---------------------------------------------------------------- substitutions

TypeExpr Substitution::apply(const TypeExpr& t) const {
  if (map_.empty()) return t;
  if (t.is_atom()) {
    auto it = map_.find(t.atom_id());
    return it == map_.end() ? t : it->second;
  }
  return TypeExpr::arrow(apply(t.arg()), apply(t.result()));
}

TypeMultiset Substitution::apply(const TypeMultiset& m) const {
  if (map_.empty()) return m;
  std::vector<TypeExpr> v;
  v.reserve(m.count());
  for (const auto& e : m) v.push_back(apply(e));
  return TypeMultiset(std::move(v));
}

Context Substitution::apply(const Context& c) const {
  if (map_.empty()) return c;
  Context out;
  for (const auto& [x, m] : c.entries()) out.set(x, apply(m));
  return out;
}

bool operator==(const Substitution& a, const Substitution& b) { return a.map_ == b.map_; }

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [a, t] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += "\xCE\xB3" + std::to_string(a) + " := " + to_string(t);
  }
  return out + "}";
}

TypeExpr canonical_atoms(const TypeExpr& t, AtomId first, std::map<AtomId, AtomId>* renaming) {
  std::map<AtomId, AtomId> local;
  std::map<AtomId, AtomId>& ren = renaming ? *renaming : local;
  AtomId next = first;
  for (const auto& [k, v] : ren) next = std::max<AtomId>(next, v + 1);
  std::function<void(const TypeExpr&)> visit = [&](const TypeExpr& u) {
    if (u.is_atom()) {
      if (!ren.count(u.atom_id())) ren[u.atom_id()] = next++;
      return;
    }
    for (const auto& e : u.arg()) visit(e);
    visit(u.result());
  };
  visit(t);
  Substitution s;
  for (const auto& [k, v] : ren) s.bind(k, TypeExpr::atom(v));
  return s.apply(t);
}

// ---------------------------------------------------------------- matching

namespace {

// Backtracking correspondence between a pattern and a target. In renaming mode the
// atom map must be a bijection that fixes `fixed`; otherwise pattern atoms may map
// to arbitrary types.
struct Matcher {
  bool renaming;
  const std::set<AtomId>* fixed;

  struct Task {
    bool multiset;
    TypeExpr p, t;
    std::vector<TypeExpr> ps, ts;
  };

  bool solve(std::vector<Task> tasks, std::map<AtomId, TypeExpr>& fwd,
             std::map<AtomId, AtomId>& bwd) const {
    while (!tasks.empty()) {
      Task task = std::move(tasks.back());
      tasks.pop_back();
      if (!task.multiset) {
        const TypeExpr& p = task.p;
        const TypeExpr& t = task.t;
        if (p.is_atom()) {
          AtomId a = p.atom_id();
          auto it = fwd.find(a);
          if (it != fwd.end()) {
            if (it->second != t) return false;
            continue;
          }
          if (renaming) {
            if (!t.is_atom()) return false;
            AtomId b = t.atom_id();
            if (bwd.count(b)) return false;
            if (fixed && (fixed->count(a) || fixed->count(b)) && a != b) return false;
            bwd[b] = a;
          }
          fwd[a] = t;
          continue;
        }
        if (t.is_atom() || p.arg().count() != t.arg().count()) return false;
        if (renaming && p.shape_hash() != t.shape_hash()) return false;
        tasks.push_back(Task{false, p.result(), t.result(), {}, {}});
        if (!p.arg().empty())
          tasks.push_back(Task{true, {}, {}, p.arg().elements(), t.arg().elements()});
        continue;
      }
      if (task.ps.empty()) continue;
      TypeExpr head = task.ps.back();
      std::vector<TypeExpr> prest(task.ps.begin(), task.ps.end() - 1);
      std::vector<TypeExpr> tried;
      for (std::size_t j = 0; j < task.ts.size(); ++j) {
        const TypeExpr& cand = task.ts[j];
        if (renaming && cand.shape_hash() != head.shape_hash()) continue;
        if (std::find(tried.begin(), tried.end(), cand) != tried.end()) continue;
        tried.push_back(cand);
        std::vector<TypeExpr> trest = task.ts;
        trest.erase(trest.begin() + static_cast<std::ptrdiff_t>(j));
        auto f2 = fwd;
        auto b2 = bwd;
        std::vector<Task> next = tasks;
        next.push_back(Task{true, {}, {}, prest, trest});
        next.push_back(Task{false, head, cand, {}, {}});
        if (solve(std::move(next), f2, b2)) {
          fwd = std::move(f2);
          bwd = std::move(b2);
          return true;
        }
      }
      return false;
    }
    return true;
  }
};

}  // namespace

bool equivalent_up_to_renaming(const TypeExpr& a, const TypeExpr& b, const std::set<AtomId>& fixed) {
  if (a.shape_hash() != b.shape_hash() || a.size() != b.size() || a.aux() != b.aux()) return false;
  if (a == b) return true;
  Matcher m{true, &fixed};
  std::map<AtomId, TypeExpr> fwd;
  std::map<AtomId, AtomId> bwd;
  return m.solve({Matcher::Task{false, a, b, {}, {}}}, fwd, bwd);
}

bool match(const TypeExpr& pattern, const TypeExpr& target, Substitution& s) {
  Matcher m{false, nullptr};
  std::map<AtomId, TypeExpr> fwd = s.bindings();
  std::map<AtomId, AtomId> bwd;
  if (!m.solve({Matcher::Task{false, pattern, target, {}, {}}}, fwd, bwd)) return false;
  Substitution out;
  for (auto& [a, t] : fwd) out.bind(a, t);
  s = std::move(out);
  return true;
}

}  // namespace klab
