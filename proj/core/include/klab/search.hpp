#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "klab/derivation.hpp"
#include "klab/term.hpp"

namespace klab {

// Shape of a derivation: the term's shape with a multiplicity at each
// application and one child skeleton per argument copy. Its node count is the
// size of every derivation with this shape.
class Skeleton {
 public:
  Skeleton() = default;
  static Skeleton leaf();
  static Skeleton abs(Skeleton body);
  static Skeleton app(Skeleton fun, std::vector<Skeleton> args);

  Term::Kind kind() const;
  const Skeleton& body() const;
  const Skeleton& fun() const;
  const std::vector<Skeleton>& args() const;
  std::size_t multiplicity() const { return args().size(); }
  std::size_t size() const;

  friend bool operator==(const Skeleton& a, const Skeleton& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Skeleton& s);
Skeleton skeleton_of(const Derivation& d);
bool fits(const Skeleton& s, const Term& t);

// Skeletons of t of size at most bound, in nondecreasing size. Argument copies
// are unordered, so permutations are produced once. Stops when visit returns false.
void enumerate_skeletons(const Term& t, std::size_t bound,
                         const std::function<bool(const Skeleton&)>& visit);

// Most general derivations with the given skeleton, one per typing up to renaming.
// Several exist when an argument multiset can be matched in incomparable ways.
std::vector<Derivation> infer_skeleton_derivations(const Term& t, const Skeleton& s);
std::optional<Derivation> infer_skeleton_typing(const Term& t, const Skeleton& s,
                                                bool exact_only = false);

struct TypedSkeleton {
  std::size_t size;
  Typing typing;  // most general, atoms numbered from 0
  Skeleton skeleton;
};

// Most general typings of every skeleton of t, grouped by size and deduplicated up
// to renaming. Results for subterms are memoized across calls.
class TypingEnumerator {
 public:
  explicit TypingEnumerator(const Term& t);
  ~TypingEnumerator();
  TypingEnumerator(const TypingEnumerator&) = delete;
  TypingEnumerator& operator=(const TypingEnumerator&) = delete;

  const std::vector<TypedSkeleton>& at_size(std::size_t size);
  std::size_t explored() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<TypedSkeleton> enumerate_typings(const Term& t, std::size_t max_size);

enum class SearchStatus { found, exhausted_bound };

struct SearchResult {
  SearchStatus status = SearchStatus::exhausted_bound;
  std::size_t min_size = 0;
  std::optional<Derivation> witness;
  std::size_t explored = 0;
};

SearchResult min_derivation_size(const Term& t, std::size_t size_bound, bool exact_only);

// A derivation of exactly the given typing, of size at most bound, if any.
std::optional<Derivation> derive_typing(const Term& t, const Typing& target, std::size_t bound);

}  // namespace klab
