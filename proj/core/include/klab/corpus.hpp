#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "klab/term.hpp"

namespace klab {

// Every closed term with at most max_size nodes, one per alpha class, in
// nondecreasing size. Binders are named by depth: x, y, z, w, u, v, then x6, x7, ...
std::vector<Term> closed_terms(std::size_t max_size);

// The closed normal terms among closed_terms(max_size).
std::vector<Term> closed_normal_terms(std::size_t max_size);

Term church(unsigned n);
Term identity();   // \x.x
Term one();        // \x.\y.x
Term zero();       // \x.\y.y
Term omega();      // (\x.(x)x)\x.(x)x
Term non_uniform();  // \x.(x) one ((x) one zero)

std::vector<std::pair<std::string, Term>> named_terms();

}  // namespace klab
