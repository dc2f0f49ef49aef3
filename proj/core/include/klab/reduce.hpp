#pragma once

#include <cstddef>
#include <optional>

#include "klab/term.hpp"

namespace klab {

enum class ReductionStatus { normalized, fuel_exhausted };

struct ReductionOutcome {
  Term term;
  std::size_t steps = 0;
  ReductionStatus status = ReductionStatus::normalized;
};

// One step of head reduction, or nothing if t is head normal.
std::optional<Term> head_step(const Term& t);
// One step of leftmost-outermost reduction, or nothing if t is normal.
std::optional<Term> leftmost_step(const Term& t);

ReductionOutcome head_reduce(const Term& t, std::size_t fuel);
ReductionOutcome leftmost_reduce(const Term& t, std::size_t fuel);

// True if head reduction from t revisits a term up to renaming within `fuel` steps.
bool head_reduction_cycles(const Term& t, std::size_t fuel);

}  // namespace klab
