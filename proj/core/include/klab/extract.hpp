#pragma once

#include <cstddef>
#include <optional>

#include "klab/derivation.hpp"
#include "klab/term.hpp"

namespace klab {

struct Extraction {
  Term term;  // the input after enforcing the variable convention
  Derivation derivation;
  std::size_t steps = 0;  // machine steps replayed
  std::size_t size() const { return derivation.size(); }
};

// Replays the head machine on t and builds, backwards through the run, a
// derivation whose size is the number of steps. Absent if fuel runs out.
std::optional<Extraction> extract_derivation_head(const Term& t, std::size_t fuel);
// Same for the beta machine; the root typing is a 1-typing of the normal form.
std::optional<Extraction> extract_derivation_beta(const Term& t, std::size_t fuel);

}  // namespace klab
