#include "klab/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>

namespace klab {

struct Term::Node {
  Kind kind;
  std::string name;
  Term a;
  Term b;
  std::size_t size = 1;
  std::size_t hash = 0;
  std::vector<std::string> fv;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace


Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->hash = mix(1, std::hash<std::string>{}(name));
  n->fv = {name};
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::abs(std::string binder, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Abs;
  n->size = 1 + body.size();
  n->hash = mix(mix(2, std::hash<std::string>{}(binder)), body.hash());
  for (const auto& v : body.free_vars())
    if (v != binder) n->fv.push_back(v);
  n->name = std::move(binder);
  n->a = std::move(body);
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->size = 1 + fun.size() + arg.size();
  n->hash = mix(mix(3, fun.hash()), arg.hash());
  std::set_union(fun.free_vars().begin(), fun.free_vars().end(), arg.free_vars().begin(),
                 arg.free_vars().end(), std::back_inserter(n->fv));
  n->a = std::move(fun);
  n->b = std::move(arg);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Term& Term::body() const { return node_->a; }
const Term& Term::fun() const { return node_->a; }
const Term& Term::arg() const { return node_->b; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::hash() const { return node_->hash; }
const std::vector<std::string>& Term::free_vars() const { return node_->fv; }

bool Term::has_free(const std::string& x) const {
  return std::binary_search(node_->fv.begin(), node_->fv.end(), x);
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Term::Kind::Var:
      return a.name() == b.name();
    case Term::Kind::Abs:
      return a.name() == b.name() && a.body() == b.body();
    case Term::Kind::App:
      return a.fun() == b.fun() && a.arg() == b.arg();
  }
  return false;
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Term parse() {
    Term t = term();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::string where =
        pos_ >= s_.size() ? "end of input" : "position " + std::to_string(pos_);
    throw ParseError("syntax error at " + where + ": " + msg, pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool at_lambda() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '\\') return true;
    return s_.substr(pos_, 2) == "\xCE\xBB";
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  bool at_ident() {
    skip();
    return pos_ < s_.size() && ident_char(s_[pos_]);
  }

  bool at(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  std::string ident() {
    if (!at_ident()) fail("expected a variable name");
    std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    if (!at(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Term lambda() {
    pos_ += s_[pos_] == '\\' ? 1 : 2;
    std::string x = ident();
    expect('.');
    return Term::abs(std::move(x), term());
  }

  Term term() {
    if (at_lambda()) return lambda();
    if (at('(')) {
      ++pos_;
      Term head = term();
      expect(')');
      return args(std::move(head));
    }
    if (at_ident()) return Term::var(ident());
    fail("expected a term");
  }

  Term args(Term head) {
    for (;;) {
      if (at_ident()) {
        head = Term::app(std::move(head), Term::var(ident()));
      } else if (at_lambda() || at('(')) {
        return Term::app(std::move(head), term());
      } else {
        return head;
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string head_part(const Term& t);

void append_arg(std::string& out, const Term& a) {
  if (a.is_var()) {
    if (!out.empty() && out.back() != ')') out += ' ';
    out += a.name();
  } else {
    out += pretty(a);
  }
}

std::string head_part(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return "(" + t.name() + ")";
    case Term::Kind::Abs:
      return "(" + pretty(t) + ")";
    case Term::Kind::App:
      if (t.arg().is_var()) {
        std::string s = head_part(t.fun());
        append_arg(s, t.arg());
        return s;
      }
      return "(" + pretty(t) + ")";
  }
  return {};
}

}  // namespace

Term parse_term(std::string_view text) { return Parser(text).parse(); }

std::string pretty(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name();
    case Term::Kind::Abs:
      return "\\" + t.name() + "." + pretty(t.body());
    case Term::Kind::App: {
      std::string s = head_part(t.fun());
      append_arg(s, t.arg());
      return s;
    }
  }
  return {};
}

// ---------------------------------------------------------------- names

std::set<std::string> all_names(const Term& t) {
  std::set<std::string> out;
  std::function<void(const Term&)> go = [&](const Term& u) {
    out.insert(u.name().empty() ? std::string() : u.name());
    if (u.is_abs()) go(u.body());
    if (u.is_app()) {
      go(u.fun());
      go(u.arg());
    }
  };
  go(t);
  out.erase(std::string());
  return out;
}

std::string fresh_name(const std::string& hint, const std::set<std::string>& avoid) {
  std::string base = hint;
  while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
  if (base.empty()) base = "x";
  for (std::size_t k = 1;; ++k) {
    std::string c = base + std::to_string(k);
    if (!avoid.count(c)) return c;
  }
}

namespace {

void alpha_key_rec(const Term& t, std::vector<std::string>& scope, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      for (std::size_t i = scope.size(); i-- > 0;) {
        if (scope[i] == t.name()) {
          out += '#';
          out += std::to_string(scope.size() - 1 - i);
          out += ' ';
          return;
        }
      }
      out += t.name();
      out += ' ';
      return;
    }
    case Term::Kind::Abs:
      out += "\\ ";
      scope.push_back(t.name());
      alpha_key_rec(t.body(), scope, out);
      scope.pop_back();
      return;
    case Term::Kind::App:
      out += "@ ";
      alpha_key_rec(t.fun(), scope, out);
      alpha_key_rec(t.arg(), scope, out);
      return;
  }
}

}  // namespace

std::string alpha_key(const Term& t) {
  std::vector<std::string> scope;
  std::string out;
  alpha_key_rec(t, scope, out);
  return out;
}

bool alpha_equivalent(const Term& a, const Term& b) {
  return a == b || (a.size() == b.size() && alpha_key(a) == alpha_key(b));
}

bool respects_variable_convention(const Term& t) {
  std::set<std::string> seen(t.free_vars().begin(), t.free_vars().end());
  bool ok = true;
  std::function<void(const Term&)> go = [&](const Term& u) {
    if (!ok) return;
    if (u.is_abs()) {
      if (!seen.insert(u.name()).second) ok = false;
      go(u.body());
    } else if (u.is_app()) {
      go(u.fun());
      go(u.arg());
    }
  };
  go(t);
  return ok;
}

Term ensure_variable_convention(const Term& t) {
  std::set<std::string> used(t.free_vars().begin(), t.free_vars().end());
  std::map<std::string, std::string> env;
  std::function<Term(const Term&)> go = [&](const Term& u) -> Term {
    switch (u.kind()) {
      case Term::Kind::Var: {
        auto it = env.find(u.name());
        return it == env.end() || it->second == u.name() ? u : Term::var(it->second);
      }
      case Term::Kind::Abs: {
        std::string x = u.name();
        std::string y = used.count(x) ? fresh_name(x, used) : x;
        used.insert(y);
        auto saved = env.find(x) == env.end() ? std::optional<std::string>() : env[x];
        env[x] = y;
        Term body = go(u.body());
        if (saved) env[x] = *saved; else env.erase(x);
        return y == x && body == u.body() ? u : Term::abs(y, body);
      }
      case Term::Kind::App: {
        Term f = go(u.fun());
        Term a = go(u.arg());
        return f == u.fun() && a == u.arg() ? u : Term::app(f, a);
      }
    }
    return u;
  };
  return go(t);
}

Term substitute(const Term& t, const std::string& x, const Term& u) {
  if (!t.has_free(x)) return t;
  switch (t.kind()) {
    case Term::Kind::Var:
      return u;
    case Term::Kind::App:
      return Term::app(substitute(t.fun(), x, u), substitute(t.arg(), x, u));
    case Term::Kind::Abs: {
      const std::string& y = t.name();
      if (!u.has_free(y)) return Term::abs(y, substitute(t.body(), x, u));
      std::set<std::string> avoid(u.free_vars().begin(), u.free_vars().end());
      avoid.insert(t.body().free_vars().begin(), t.body().free_vars().end());
      avoid.insert(x);
      std::string z = fresh_name(y, avoid);
      Term body = substitute(t.body(), y, Term::var(z));
      return Term::abs(z, substitute(body, x, u));
    }
  }
  return t;
}

bool is_head_normal(const Term& t) {
  const Term* u = &t;
  while (u->is_abs()) u = &u->body();
  while (u->is_app()) {
    if (u->fun().is_abs()) return false;
    u = &u->fun();
  }
  return true;
}

bool is_normal(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return true;
    case Term::Kind::Abs:
      return is_normal(t.body());
    case Term::Kind::App:
      return !t.fun().is_abs() && is_normal(t.fun()) && is_normal(t.arg());
  }
  return true;
}

}  // namespace klab
