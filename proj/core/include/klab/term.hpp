#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace klab {

// Immutable lambda-term with named variables. Copies share structure.
class Term {
 public:
  enum class Kind { Var, Abs, App };

  Term() = default;  // empty handle, only valid as an assignment target

  static Term var(std::string name);
  static Term abs(std::string binder, Term body);
  static Term app(Term fun, Term arg);

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_abs() const { return kind() == Kind::Abs; }
  bool is_app() const { return kind() == Kind::App; }

  // Variable name for Var, binder for Abs.
  const std::string& name() const;
  const Term& body() const;
  const Term& fun() const;
  const Term& arg() const;

  // Node count: variables, abstractions and applications each count one.
  std::size_t size() const;
  std::size_t hash() const;
  const std::vector<std::string>& free_vars() const;  // sorted
  bool has_free(const std::string& x) const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Grammar: `\x. t` or `λx. t`; application `(v)u1 u2 ...` where a trailing
// abstraction or parenthesised application extends as far right as possible.
Term parse_term(std::string_view text);
std::string pretty(const Term& t);

// All names occurring in t, free or bound.
std::set<std::string> all_names(const Term& t);
bool alpha_equivalent(const Term& a, const Term& b);
// Canonical string with de Bruijn indices for bound variables.
std::string alpha_key(const Term& t);

// Returns `base` followed by the smallest positive integer suffix not in `avoid`.
std::string fresh_name(const std::string& hint, const std::set<std::string>& avoid);

bool respects_variable_convention(const Term& t);
// Renames binders so each is bound once and no binder clashes with a free name.
Term ensure_variable_convention(const Term& t);

Term substitute(const Term& t, const std::string& x, const Term& u);

bool is_head_normal(const Term& t);
bool is_normal(const Term& t);

}  // namespace klab
