#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "klab/term.hpp"
#include "klab/types.hpp"

namespace klab {

struct Typing {
  Context context;
  TypeExpr type;
};

bool operator==(const Typing& a, const Typing& b);
std::string to_string(const Typing& t);

// A System R derivation tree. Nodes store their conclusion; the smart
// constructors compute it, `make` stores whatever it is given.
class Derivation {
 public:
  enum class Rule { axiom, abstraction, application };

  Derivation() = default;
  static Derivation axiom(const std::string& x, TypeExpr type);
  static Derivation abstraction(const std::string& binder, Derivation premise);
  // The argument term is needed when there are no argument premises.
  static Derivation application(Derivation fun, std::vector<Derivation> args, Term arg_term);
  static Derivation make(Rule rule, Term subject, Context context, TypeExpr type,
                         std::vector<Derivation> premises);

  Rule rule() const;
  const Term& subject() const;
  const Context& context() const;
  const TypeExpr& type() const;
  Typing typing() const { return Typing{context(), type()}; }
  const std::vector<Derivation>& premises() const;
  std::size_t size() const;

  explicit operator bool() const { return node_ != nullptr; }

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

class DerivationError : public std::runtime_error {
 public:
  DerivationError(const std::string& what, std::string path)
      : std::runtime_error(what + " at " + (path.empty() ? "root" : path)), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Validates every node; returns the root typing or throws DerivationError.
Typing check_derivation(const Derivation& d);
bool is_valid(const Derivation& d);

Derivation apply_substitution(const Substitution& s, const Derivation& d);

// Same skeleton up to permutation of argument premises.
bool equivalent(const Derivation& a, const Derivation& b);

std::string to_text(const Derivation& d);  // indented tree
std::string to_json(const Derivation& d);

// Principal typing of a normal term: fresh atoms everywhere.
Derivation principal_derivation(const Term& normal_term);
Typing principal_typing(const Term& normal_term);

// 1-typings of a normal term are the atom-to-atom instances of its principal
// typing. Enumerated up to renaming, only when the principal typing's curried
// size is at most size_bound; the callback returns false to stop.
void one_typings(const Term& normal_term, std::size_t size_bound,
                 const std::function<bool(const Typing&)>& visit);
std::vector<Typing> one_typings(const Term& normal_term, std::size_t size_bound);

// Is `target` the image of `pattern` under some substitution?
bool is_instance(const Typing& pattern, const Typing& target, Substitution* witness = nullptr);
bool equivalent_up_to_renaming(const Typing& a, const Typing& b);

}  // namespace klab
