#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "klab/types.hpp"

namespace klab {

// Most general unifiers of two types. Multisets unify up to a bijection of their
// elements, so several incomparable unifiers may exist; one is returned per
// successful bijection, without exact duplicates.
std::vector<Substitution> unify_all(const TypeExpr& a, const TypeExpr& b,
                                    std::size_t limit = std::numeric_limits<std::size_t>::max());
std::optional<Substitution> unify_types(const TypeExpr& a, const TypeExpr& b);
std::vector<Substitution> unify_multisets(const TypeMultiset& a, const TypeMultiset& b,
                                          std::size_t limit = std::numeric_limits<std::size_t>::max());

// Unifiers extending `base` (whose bindings are kept idempotent).
std::vector<Substitution> unify_multisets_from(const Substitution& base, const TypeMultiset& a,
                                               const TypeMultiset& b, std::size_t limit);

}  // namespace klab
