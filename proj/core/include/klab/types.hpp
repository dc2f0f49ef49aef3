#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace klab {

using AtomId = std::uint32_t;

class TypeMultiset;

// Non-idempotent intersection types: atoms and arrows (multiset, type).
class TypeExpr {
 public:
  TypeExpr() = default;
  static TypeExpr atom(AtomId id);
  static TypeExpr arrow(TypeMultiset arg, TypeExpr result);

  bool is_atom() const;
  bool is_arrow() const { return !is_atom(); }
  AtomId atom_id() const;
  const TypeMultiset& arg() const;
  const TypeExpr& result() const;

  std::size_t size() const;  // |t|
  std::size_t aux() const;   // the dual size of negative occurrences
  std::size_t hash() const;
  // Hash that ignores atom names.
  std::size_t shape_hash() const;

  explicit operator bool() const { return node_ != nullptr; }

 private:
  struct Node;
  explicit TypeExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend int compare(const TypeExpr& a, const TypeExpr& b);
};

// Finite multiset of types, kept in canonical sorted order.
class TypeMultiset {
 public:
  TypeMultiset() = default;
  TypeMultiset(std::vector<TypeExpr> elems);  // NOLINT(google-explicit-constructor)
  TypeMultiset(std::initializer_list<TypeExpr> elems)
      : TypeMultiset(std::vector<TypeExpr>(elems)) {}

  std::size_t count() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const TypeExpr& operator[](std::size_t i) const { return elems_[i]; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }
  const std::vector<TypeExpr>& elements() const { return elems_; }

  std::size_t size() const;  // sum of element sizes
  std::size_t aux() const;   // sum of element aux sizes

  TypeMultiset operator+(const TypeMultiset& other) const;

 private:
  std::vector<TypeExpr> elems_;
};

int compare(const TypeExpr& a, const TypeExpr& b);
int compare(const TypeMultiset& a, const TypeMultiset& b);
inline bool operator==(const TypeExpr& a, const TypeExpr& b) { return compare(a, b) == 0; }
inline bool operator!=(const TypeExpr& a, const TypeExpr& b) { return compare(a, b) != 0; }
inline bool operator<(const TypeExpr& a, const TypeExpr& b) { return compare(a, b) < 0; }
inline bool operator==(const TypeMultiset& a, const TypeMultiset& b) { return compare(a, b) == 0; }
inline bool operator!=(const TypeMultiset& a, const TypeMultiset& b) { return compare(a, b) != 0; }
inline bool operator<(const TypeMultiset& a, const TypeMultiset& b) { return compare(a, b) < 0; }

class TypeParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Atoms print as γ<k>; `g<k>` is accepted on input.
std::string to_string(const TypeExpr& t);
std::string to_string(const TypeMultiset& m);
TypeExpr parse_type(std::string_view text);
TypeMultiset parse_multiset(std::string_view text);

void collect_atoms(const TypeExpr& t, std::set<AtomId>& out);
void collect_atoms(const TypeMultiset& m, std::set<AtomId>& out);
AtomId max_atom(const TypeExpr& t);  // 0 if none

// Typing context: variable -> non-empty multiset.
class Context {
 public:
  Context() = default;
  static Context single(const std::string& x, TypeMultiset m);

  const TypeMultiset& at(const std::string& x) const;
  bool contains(const std::string& x) const { return map_.count(x) != 0; }
  Context without(const std::string& x) const;
  Context operator+(const Context& other) const;
  bool empty() const { return map_.empty(); }
  const std::map<std::string, TypeMultiset>& entries() const { return map_; }
  void set(const std::string& x, TypeMultiset m);

  friend bool operator==(const Context& a, const Context& b);
  friend bool operator!=(const Context& a, const Context& b) { return !(a == b); }

 private:
  std::map<std::string, TypeMultiset> map_;
};

std::string to_string(const Context& c);
void collect_atoms(const Context& c, std::set<AtomId>& out);

// The curried type a1 ... am t, with the context variables in name order.
TypeExpr curry(const Context& c, const TypeExpr& t);

// Exact types have no positive occurrence of the empty multiset.
bool is_exact(const TypeExpr& t);
bool is_coexact(const TypeExpr& t);
bool is_exact(const Context& c);  // every element coexact

// True when every multiset whose elements occur positively in the curried typing
// is a singleton.
bool has_one_typing_shape(const Context& c, const TypeExpr& t);

// Homomorphic atom substitution; unmapped atoms are left unchanged.
class Substitution {
 public:
  Substitution() = default;
  void bind(AtomId a, TypeExpr t) { map_[a] = std::move(t); }
  bool binds(AtomId a) const { return map_.count(a) != 0; }
  const std::map<AtomId, TypeExpr>& bindings() const { return map_; }

  TypeExpr apply(const TypeExpr& t) const;
  TypeMultiset apply(const TypeMultiset& m) const;
  Context apply(const Context& c) const;

  friend bool operator==(const Substitution& a, const Substitution& b);

 private:
  std::map<AtomId, TypeExpr> map_;
};

std::string to_string(const Substitution& s);

// Renames atoms in order of first occurrence, starting at `first`.
// The renaming is written to `renaming` when given.
TypeExpr canonical_atoms(const TypeExpr& t, AtomId first = 0,
                         std::map<AtomId, AtomId>* renaming = nullptr);

// Is there a bijective renaming of atoms, fixing those in `fixed`, taking a to b?
bool equivalent_up_to_renaming(const TypeExpr& a, const TypeExpr& b,
                               const std::set<AtomId>& fixed = {});

// One-way matching: extends `s` so that s(pattern) == target.
bool match(const TypeExpr& pattern, const TypeExpr& target, Substitution& s);

}  // namespace klab
