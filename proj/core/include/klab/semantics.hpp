#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "klab/derivation.hpp"
#include "klab/term.hpp"
#include "klab/types.hpp"

namespace klab {

using PointSet = std::set<TypeExpr>;

// Bounded interpretation of a term. Points are taken up to renaming of atoms
// and stored with atoms numbered in order of first occurrence. For open terms a
// point is the curried type a1 ... am α over the free variables in name order.
struct SemSet {
  Term term;
  std::vector<std::string> vars;
  std::size_t bound = 0;
  bool complete = true;  // every point of size <= bound is present
  PointSet points;
};

struct InterpretOptions {
  std::size_t fuel = 10000;           // for normalizing the term first
  std::size_t derivation_cap = 0;     // used when the term does not normalize; 0 means bound
};

SemSet interpret(const Term& t, std::size_t bound, const InterpretOptions& opts = {});

// Types of t under concrete point sets for its free variables. Atoms of ρ are
// constants; atoms of a result that ρ does not constrain are fresh and stand for
// any type. Derivations are searched up to `derivation_cap` nodes.
using SemEnv = std::map<std::string, PointSet>;
PointSet interpret_in_env(const Term& t, const SemEnv& rho, std::size_t derivation_cap);

// { α | (a,α) ∈ d1 and every element of a is in d2 }, atoms taken literally.
PointSet semantic_apply(const PointSet& d1, const PointSet& d2);

// 2|a| + |α| + 2 for a point (a, α).
std::size_t step_bound(const TypeExpr& point);

// Types of most general derivations of a closed normal term, whose size equals
// the derivation's size, in nondecreasing size up to max_size.
std::vector<TypeExpr> ground_points(const Term& t, std::size_t max_size);

// Ground points of one closed normal term, computed on demand and kept, so that
// a term can be paired with many others.
class GroundPoints {
 public:
  explicit GroundPoints(const Term& t);
  ~GroundPoints();
  GroundPoints(const GroundPoints&) = delete;
  GroundPoints& operator=(const GroundPoints&) = delete;

  const Term& term() const { return term_; }
  const std::vector<TypeExpr>& at(std::size_t size);  // points of exactly this size

 private:
  struct Impl;
  Term term_;
  std::unique_ptr<Impl> impl_;
};

enum class PredictMode { head, beta };

struct UnifPair {
  TypeExpr fun_point;   // (a, α) from the function
  TypeMultiset arg_points;  // a' from the argument, atoms disjoint from fun_point
  Substitution unifier;
  std::size_t cost = 0;  // |(a,α)| + |a'| + 1
  TypeExpr instance() const { return unifier.apply(fun_point); }
};

// All unifiable pairs of ground points of cost at most max_cost, cheapest first.
std::vector<UnifPair> unifiable_pairs(const Term& v, const Term& u, PredictMode mode, std::size_t max_cost);
std::vector<UnifPair> unifiable_pairs(GroundPoints& v, GroundPoints& u, PredictMode mode, std::size_t max_cost);

struct Prediction {
  std::size_t steps = 0;
  UnifPair witness;
  std::size_t bound_used = 0;
};

// The least cost over unifiable pairs, searched in increasing cost up to bound.
// bound_used is the first of 8, 16, 32, ... (capped at bound) covering the answer.
std::optional<Prediction> predict_steps(const Term& v, const Term& u, PredictMode mode, std::size_t bound);
std::optional<Prediction> predict_steps(GroundPoints& v, GroundPoints& u, PredictMode mode, std::size_t bound);

enum class Normalizability { yes_head, yes_normal, unknown_within_bound };
const char* to_string(Normalizability n);
Normalizability check_app_normalizability(const Term& v, const Term& u, std::size_t bound);

std::string to_json(const Prediction& p);

// Throws std::invalid_argument unless t is closed and normal.
void require_closed_normal(const Term& t, const char* what);

}  // namespace klab
