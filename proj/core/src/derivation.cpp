#include "klab/derivation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

namespace klab {

bool operator==(const Typing& a, const Typing& b) {
  return a.context == b.context && a.type == b.type;
}

std::string to_string(const Typing& t) {
  if (t.context.empty()) return "\xE2\x8A\xA2 " + to_string(t.type);
  return to_string(t.context) + " \xE2\x8A\xA2 " + to_string(t.type);
}

struct Derivation::Node {
  Rule rule;
  Term subject;
  Context context;
  TypeExpr type;
  std::vector<Derivation> premises;
  std::size_t size;
};

Derivation Derivation::make(Rule rule, Term subject, Context context, TypeExpr type,
                            std::vector<Derivation> premises) {
  std::size_t size = 1;
  for (const auto& p : premises) size += p.size();
  Derivation d;
  d.node_ = std::make_shared<Node>(
      Node{rule, std::move(subject), std::move(context), std::move(type), std::move(premises), size});
  return d;
}

Derivation Derivation::axiom(const std::string& x, TypeExpr type) {
  Context c = Context::single(x, TypeMultiset{type});
  return make(Rule::axiom, Term::var(x), std::move(c), std::move(type), {});
}

Derivation Derivation::abstraction(const std::string& binder, Derivation premise) {
  TypeExpr t = TypeExpr::arrow(premise.context().at(binder), premise.type());
  Context c = premise.context().without(binder);
  Term subject = Term::abs(binder, premise.subject());
  return make(Rule::abstraction, std::move(subject), std::move(c), std::move(t), {std::move(premise)});
}

Derivation Derivation::application(Derivation fun, std::vector<Derivation> args, Term arg_term) {
  if (!fun.type().is_arrow())
    throw DerivationError("application of a derivation whose type is an atom", "");
  Context c = fun.context();
  for (const auto& a : args) c = c + a.context();
  TypeExpr t = fun.type().result();
  Term subject = Term::app(fun.subject(), std::move(arg_term));
  std::vector<Derivation> premises;
  premises.reserve(args.size() + 1);
  premises.push_back(std::move(fun));
  for (auto& a : args) premises.push_back(std::move(a));
  return make(Rule::application, std::move(subject), std::move(c), std::move(t), std::move(premises));
}

Derivation::Rule Derivation::rule() const { return node_->rule; }
const Term& Derivation::subject() const { return node_->subject; }
const Context& Derivation::context() const { return node_->context; }
const TypeExpr& Derivation::type() const { return node_->type; }
const std::vector<Derivation>& Derivation::premises() const { return node_->premises; }
std::size_t Derivation::size() const { return node_->size; }

// ---------------------------------------------------------------- checking

namespace {

void check_node(const Derivation& d, const std::string& path) {
  auto fail = [&](const std::string& msg) { throw DerivationError(msg, path); };
  auto child = [&](std::size_t i) { return path + "/" + std::to_string(i); };
  const auto& ps = d.premises();
  switch (d.rule()) {
    case Derivation::Rule::axiom: {
      if (!d.subject().is_var()) fail("axiom subject is not a variable");
      if (!ps.empty()) fail("axiom with premises");
      if (d.context() != Context::single(d.subject().name(), TypeMultiset{d.type()}))
        fail("axiom context is not x:[type]");
      return;
    }
    case Derivation::Rule::abstraction: {
      if (!d.subject().is_abs()) fail("abstraction subject is not an abstraction");
      if (ps.size() != 1) fail("abstraction needs exactly one premise");
      check_node(ps[0], child(0));
      const std::string& x = d.subject().name();
      if (ps[0].subject() != d.subject().body()) fail("premise subject is not the body");
      if (d.type() != TypeExpr::arrow(ps[0].context().at(x), ps[0].type()))
        fail("abstraction type does not match the premise");
      if (d.context() != ps[0].context().without(x)) fail("abstraction context mismatch");
      return;
    }
    case Derivation::Rule::application: {
      if (!d.subject().is_app()) fail("application subject is not an application");
      if (ps.empty()) fail("application without a function premise");
      for (std::size_t i = 0; i < ps.size(); ++i) check_node(ps[i], child(i));
      if (ps[0].subject() != d.subject().fun()) fail("function premise subject mismatch");
      if (!ps[0].type().is_arrow()) fail("function premise type is not an arrow");
      std::vector<TypeExpr> arg_types;
      Context c = ps[0].context();
      for (std::size_t i = 1; i < ps.size(); ++i) {
        if (ps[i].subject() != d.subject().arg()) fail("argument premise subject mismatch");
        arg_types.push_back(ps[i].type());
        c = c + ps[i].context();
      }
      if (TypeMultiset(arg_types) != ps[0].type().arg())
        fail("argument types do not match the function's multiset");
      if (d.type() != ps[0].type().result()) fail("application type mismatch");
      if (d.context() != c) fail("application context is not the sum of premise contexts");
      return;
    }
  }
}

}  // namespace

Typing check_derivation(const Derivation& d) {
  check_node(d, "");
  return d.typing();
}

bool is_valid(const Derivation& d) {
  try {
    check_node(d, "");
    return true;
  } catch (const DerivationError&) {
    return false;
  }
}

Derivation apply_substitution(const Substitution& s, const Derivation& d) {
  std::vector<Derivation> ps;
  ps.reserve(d.premises().size());
  for (const auto& p : d.premises()) ps.push_back(apply_substitution(s, p));
  return Derivation::make(d.rule(), d.subject(), s.apply(d.context()), s.apply(d.type()), std::move(ps));
}

bool equivalent(const Derivation& a, const Derivation& b) {
  if (a.rule() != b.rule() || a.subject() != b.subject()) return false;
  if (a.premises().size() != b.premises().size()) return false;
  switch (a.rule()) {
    case Derivation::Rule::axiom:
      return true;
    case Derivation::Rule::abstraction:
      return equivalent(a.premises()[0], b.premises()[0]);
    case Derivation::Rule::application: {
      if (!equivalent(a.premises()[0], b.premises()[0])) return false;
      std::size_t n = a.premises().size() - 1;
      std::vector<bool> used(n, false);
      std::function<bool(std::size_t)> go = [&](std::size_t i) {
        if (i == n) return true;
        for (std::size_t j = 0; j < n; ++j) {
          if (used[j] || a.premises()[i + 1].size() != b.premises()[j + 1].size()) continue;
          if (!equivalent(a.premises()[i + 1], b.premises()[j + 1])) continue;
          used[j] = true;
          if (go(i + 1)) return true;
          used[j] = false;
        }
        return false;
      };
      return go(0);
    }
  }
  return false;
}

// ---------------------------------------------------------------- output

namespace {

const char* rule_label(Derivation::Rule r) {
  switch (r) {
    case Derivation::Rule::axiom: return "ax";
    case Derivation::Rule::abstraction: return "abs";
    case Derivation::Rule::application: return "app";
  }
  return "?";
}

void text_rec(const Derivation& d, std::size_t depth, std::string& out) {
  out += std::string(2 * depth, ' ') + rule_label(d.rule()) + "  " + to_string(d.context()) +
         " \xE2\x8A\xA2 " + pretty(d.subject()) + " : " + to_string(d.type()) + "\n";
  for (const auto& p : d.premises()) text_rec(p, depth + 1, out);
}

nlohmann::json json_rec(const Derivation& d) {
  nlohmann::json j;
  j["rule"] = rule_label(d.rule());
  j["subject"] = pretty(d.subject());
  nlohmann::json ctx = nlohmann::json::object();
  for (const auto& [x, m] : d.context().entries()) ctx[x] = to_string(m);
  j["context"] = ctx;
  j["type"] = to_string(d.type());
  j["premises"] = nlohmann::json::array();
  for (const auto& p : d.premises()) j["premises"].push_back(json_rec(p));
  return j;
}

}  // namespace

std::string to_text(const Derivation& d) {
  std::string out;
  text_rec(d, 0, out);
  return out;
}

std::string to_json(const Derivation& d) { return json_rec(d).dump(); }

// ---------------------------------------------------------------- principal typings

namespace {

Derivation principal_rec(const Term& t, AtomId& next) {
  if (t.is_abs()) return Derivation::abstraction(t.name(), principal_rec(t.body(), next));
  std::vector<Term> args;
  Term head = t;
  while (head.is_app()) {
    args.push_back(head.arg());
    head = head.fun();
  }
  if (!head.is_var()) throw std::invalid_argument("principal typing needs a normal term");
  std::reverse(args.begin(), args.end());
  std::vector<Derivation> arg_ds;
  for (const auto& a : args) arg_ds.push_back(principal_rec(a, next));
  TypeExpr ty = TypeExpr::atom(next++);
  for (std::size_t i = args.size(); i-- > 0;) ty = TypeExpr::arrow(TypeMultiset{arg_ds[i].type()}, ty);
  Derivation d = Derivation::axiom(head.name(), ty);
  for (std::size_t i = 0; i < args.size(); ++i) d = Derivation::application(d, {arg_ds[i]}, args[i]);
  return d;
}

}  // namespace

Derivation principal_derivation(const Term& normal_term) {
  if (!is_normal(normal_term)) throw std::invalid_argument("principal typing needs a normal term");
  AtomId next = 0;
  return principal_rec(normal_term, next);
}

Typing principal_typing(const Term& normal_term) { return principal_derivation(normal_term).typing(); }

bool is_instance(const Typing& pattern, const Typing& target, Substitution* witness) {
  const auto& pe = pattern.context.entries();
  const auto& te = target.context.entries();
  if (pe.size() != te.size()) return false;
  for (auto a = pe.begin(), b = te.begin(); a != pe.end(); ++a, ++b)
    if (a->first != b->first || a->second.count() != b->second.count()) return false;
  Substitution s;
  if (!match(curry(pattern.context, pattern.type), curry(target.context, target.type), s)) return false;
  if (witness) *witness = s;
  return true;
}

bool equivalent_up_to_renaming(const Typing& a, const Typing& b) {
  const auto& ae = a.context.entries();
  const auto& be = b.context.entries();
  if (ae.size() != be.size()) return false;
  for (auto x = ae.begin(), y = be.begin(); x != ae.end(); ++x, ++y)
    if (x->first != y->first) return false;
  return equivalent_up_to_renaming(curry(a.context, a.type), curry(b.context, b.type));
}

void one_typings(const Term& normal_term, std::size_t size_bound,
                 const std::function<bool(const Typing&)>& visit) {
  Typing p = principal_typing(normal_term);
  if (curry(p.context, p.type).size() > size_bound) return;
  std::set<AtomId> atoms;
  collect_atoms(p.context, atoms);
  collect_atoms(p.type, atoms);
  std::vector<AtomId> order(atoms.begin(), atoms.end());
  // Restricted growth strings enumerate the set partitions of the atoms.
  std::vector<AtomId> block(order.size(), 0);
  std::function<bool(std::size_t, AtomId)> go = [&](std::size_t i, AtomId blocks) {
    if (i == order.size()) {
      Substitution s;
      for (std::size_t k = 0; k < order.size(); ++k) s.bind(order[k], TypeExpr::atom(block[k]));
      return visit(Typing{s.apply(p.context), s.apply(p.type)});
    }
    for (AtomId b = 0; b <= blocks; ++b) {
      block[i] = b;
      if (!go(i + 1, b == blocks ? blocks + 1 : blocks)) return false;
    }
    return true;
  };
  go(0, 0);
}

std::vector<Typing> one_typings(const Term& normal_term, std::size_t size_bound) {
  std::vector<Typing> out;
  one_typings(normal_term, size_bound, [&](const Typing& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

}  // namespace klab
