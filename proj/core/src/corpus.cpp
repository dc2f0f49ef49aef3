#include "klab/corpus.hpp"

#include <functional>

namespace klab {

namespace {

std::string binder(std::size_t depth) {
  static const char* names[] = {"x", "y", "z", "w", "u", "v"};
  if (depth < 6) return names[depth];
  return "x" + std::to_string(depth);
}

void generate(std::size_t size, std::size_t depth, const std::function<void(const Term&)>& emit) {
  if (size == 1) {
    for (std::size_t i = 0; i < depth; ++i) emit(Term::var(binder(i)));
    return;
  }
  generate(size - 1, depth + 1, [&](const Term& body) { emit(Term::abs(binder(depth), body)); });
  for (std::size_t fs = 1; fs + 1 < size; ++fs) {
    std::size_t as = size - 1 - fs;
    generate(fs, depth, [&](const Term& f) {
      generate(as, depth, [&](const Term& a) { emit(Term::app(f, a)); });
    });
  }
}

}  // namespace

std::vector<Term> closed_terms(std::size_t max_size) {
  std::vector<Term> out;
  for (std::size_t s = 1; s <= max_size; ++s) generate(s, 0, [&](const Term& t) { out.push_back(t); });
  return out;
}

std::vector<Term> closed_normal_terms(std::size_t max_size) {
  std::vector<Term> out;
  for (auto& t : closed_terms(max_size))
    if (is_normal(t)) out.push_back(t);
  return out;
}

Term church(unsigned n) {
  Term body = Term::var("x");
  for (unsigned i = 0; i < n; ++i) body = Term::app(Term::var("f"), body);
  return Term::abs("f", Term::abs("x", body));
}

Term identity() { return parse_term("\\x.x"); }
Term one() { return parse_term("\\x.\\y.x"); }
Term zero() { return parse_term("\\x.\\y.y"); }
Term omega() { return parse_term("(\\x.(x)x)\\x.(x)x"); }
Term non_uniform() { return parse_term("\\x.((x)\\a.\\b.a)((x)\\a.\\b.a)\\a.\\b.b"); }

std::vector<std::pair<std::string, Term>> named_terms() {
  std::vector<std::pair<std::string, Term>> out = {
      {"I", identity()}, {"K", one()}, {"one", one()}, {"zero", zero()}, {"omega", omega()},
      {"non-uniform", non_uniform()}};
  for (unsigned n = 0; n <= 6; ++n) out.emplace_back("church" + std::to_string(n), church(n));
  return out;
}

}  // namespace klab
