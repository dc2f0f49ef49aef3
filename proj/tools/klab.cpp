// Command line front end for the lambda-calculus execution-time laboratory.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "klab/derivation.hpp"
#include "klab/machine.hpp"
#include "klab/search.hpp"
#include "klab/semantics.hpp"
#include "klab/term.hpp"
#include "klab/verify.hpp"

namespace {

using json = nlohmann::json;

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t default_fuel() {
  if (const char* s = std::getenv("KRIVINE_LAB_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0') return static_cast<std::size_t>(v);
    throw UsageError(std::string("KRIVINE_LAB_FUEL is not a number: ") + s);
  }
  return 100000;
}

// Inline text, or @path for a file holding one term.
std::string read_arg(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw UsageError("cannot read " + arg.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  return text;
}

klab::Term term_arg(const std::string& arg) {
  try {
    return klab::parse_term(read_arg(arg));
  } catch (const klab::ParseError& e) {
    throw UsageError(e.what());
  }
}

klab::Machine machine_arg(const std::string& m) { return m == "beta" ? klab::Machine::beta : klab::Machine::head; }

struct Options {
  std::string format = "text";
  std::string term, term2;
  std::string machine = "head";
  std::size_t fuel = 0;
  bool trace = false;
  std::string kind = "principal";
  std::size_t bound = 0;
  bool exact = false;
  std::size_t cap = 0;
  std::vector<std::string> suites;
  std::size_t corpus_size = 9;
  std::size_t pair_size = 7;
};

int cmd_parse(const Options& o) {
  klab::Term t = term_arg(o.term);
  if (o.format == "json") {
    json j{{"term", klab::pretty(t)}, {"size", t.size()}, {"free", t.free_vars()},
           {"head_normal", klab::is_head_normal(t)}, {"normal", klab::is_normal(t)}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << klab::pretty(t) << "\n";
  }
  return 0;
}

int cmd_run(const Options& o) {
  klab::Term t = term_arg(o.term);
  auto r = klab::run(t, machine_arg(o.machine), o.fuel, {o.trace, false});
  if (o.format == "json") {
    std::cout << klab::render_trace_json(r) << "\n";
  } else if (o.trace) {
    std::cout << klab::render_trace_text(r);
  } else {
    std::cout << "steps: " << r.steps << "\n";
    if (r.status == klab::RunStatus::finished)
      std::cout << "result: " << klab::pretty(r.final_term()) << "\n";
    else
      std::cout << "status: " << klab::status_name(r.status) << "\n";
  }
  return r.status == klab::RunStatus::finished ? 0 : kDomainError;
}

int cmd_steps(const Options& o) {
  klab::Term t = term_arg(o.term);
  auto r = klab::run(t, machine_arg(o.machine), o.fuel);
  if (r.status != klab::RunStatus::finished) {
    std::cerr << "fuel exhausted after " << r.steps << " steps\n";
    return kDomainError;
  }
  if (o.format == "json")
    std::cout << json{{"machine", o.machine}, {"steps", r.steps}}.dump() << "\n";
  else
    std::cout << r.steps << "\n";
  return 0;
}

json typing_json(const klab::Typing& t) {
  json ctx = json::object();
  for (const auto& [x, m] : t.context.entries()) ctx[x] = klab::to_string(m);
  return json{{"context", ctx}, {"type", klab::to_string(t.type)}};
}

int cmd_typing(const Options& o) {
  klab::Term t = term_arg(o.term);
  if (o.kind == "principal") {
    klab::Derivation d = klab::principal_derivation(t);
    if (o.format == "json") {
      json j = typing_json(d.typing());
      j["derivation"] = json::parse(klab::to_json(d));
      std::cout << j.dump() << "\n";
    } else {
      std::cout << klab::to_string(d.typing()) << "\n" << klab::to_text(d);
    }
    return 0;
  }
  std::size_t bound = o.bound ? o.bound : 16;
  auto all = klab::one_typings(t, bound);
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& ty : all) arr.push_back(typing_json(ty));
    std::cout << arr.dump() << "\n";
  } else {
    for (const auto& ty : all) std::cout << klab::to_string(ty) << "\n";
  }
  return 0;
}

int cmd_min_derivation(const Options& o) {
  klab::Term t = term_arg(o.term);
  std::size_t bound = o.bound ? o.bound : 20;
  auto r = klab::min_derivation_size(t, bound, o.exact);
  bool found = r.status == klab::SearchStatus::found;
  if (o.format == "json") {
    json j{{"status", found ? "found" : "exhausted_bound"}, {"explored", r.explored}, {"bound", bound}};
    if (found) {
      j["min_size"] = r.min_size;
      j["typing"] = typing_json(r.witness->typing());
      j["witness"] = json::parse(klab::to_json(*r.witness));
    }
    std::cout << j.dump() << "\n";
  } else if (found) {
    std::cout << "min size: " << r.min_size << "\n"
              << "typing: " << klab::to_string(r.witness->typing()) << "\n"
              << klab::to_text(*r.witness);
  } else {
    std::cout << "no derivation of size <= " << bound << "\n";
  }
  return found ? 0 : kDomainError;
}

int cmd_interpret(const Options& o) {
  klab::Term t = term_arg(o.term);
  klab::InterpretOptions io;
  io.fuel = o.fuel;
  io.derivation_cap = o.cap;
  auto s = klab::interpret(t, o.bound ? o.bound : 6, io);
  if (o.format == "json") {
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back(klab::to_string(p));
    std::cout << json{{"term", klab::pretty(t)}, {"vars", s.vars}, {"bound", s.bound},
                      {"complete", s.complete}, {"points", pts}}
                     .dump()
              << "\n";
  } else {
    for (const auto& p : s.points) std::cout << klab::to_string(p) << "\n";
    if (!s.complete) std::cout << "(incomplete: the term did not normalize)\n";
  }
  return 0;
}

int cmd_predict(const Options& o) {
  klab::Term v = term_arg(o.term);
  klab::Term u = term_arg(o.term2);
  auto mode = o.machine == "beta" ? klab::PredictMode::beta : klab::PredictMode::head;
  auto p = klab::predict_steps(v, u, mode, o.bound ? o.bound : 32);
  if (!p) {
    std::cerr << "no unifiable pair within the bound\n";
    return kDomainError;
  }
  if (o.format == "json") {
    std::cout << klab::to_json(*p) << "\n";
  } else {
    std::cout << "steps: " << p->steps << "\n"
              << "point: " << klab::to_string(p->witness.fun_point) << " (size " << p->witness.fun_point.size()
              << ")\n"
              << "arguments: " << klab::to_string(p->witness.arg_points) << " (size "
              << p->witness.arg_points.size() << ")\n"
              << "unifier: " << klab::to_string(p->witness.unifier) << "\n";
  }
  return 0;
}

int cmd_verify(const Options& o) {
  klab::VerifyOptions vo;
  vo.corpus_size = o.corpus_size;
  vo.pair_size = o.pair_size;
  if (o.fuel) vo.fuel = std::min<std::size_t>(o.fuel, vo.fuel);
  if (o.bound) vo.untyped_bound = o.bound;
  std::vector<std::string> names = o.suites.empty() ? klab::suite_names() : o.suites;
  for (const auto& n : names)
    if (!klab::is_suite(n)) throw UsageError("unknown suite: " + n);
  bool all = true;
  json arr = json::array();
  for (const auto& n : names) {
    auto r = klab::run_suite(n, vo);
    all = all && r.pass;
    if (o.format == "json") {
      arr.push_back(json{{"suite", r.name}, {"pass", r.pass}, {"checked", r.checked}, {"detail", r.detail},
                         {"seconds", r.seconds}});
    } else {
      std::printf("%-20s %s  %8.2fs  %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
      std::fflush(stdout);
    }
  }
  if (o.format == "json") std::cout << arr.dump() << "\n";
  return all ? 0 : kDomainError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krivine machines, System R derivations and relational semantics"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  auto fuel = [&](CLI::App* c) { c->add_option("--fuel", o.fuel, "Machine step budget (default from KRIVINE_LAB_FUEL or 100000)"); };
  auto term = [&](CLI::App* c, const char* name = "term") {
    c->add_option(name, name == std::string("term") ? o.term : o.term2, "Term text or @file")->required();
  };
  auto machine = [&](CLI::App* c) {
    c->add_option("--machine", o.machine, "Machine")->check(CLI::IsMember({"head", "beta"}))->capture_default_str();
  };
  auto format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };

  auto* parse = app.add_subcommand("parse", "Parse and print a term");
  term(parse);
  format(parse);

  auto* runc = app.add_subcommand("run", "Run a machine");
  term(runc);
  machine(runc);
  fuel(runc);
  format(runc);
  runc->add_flag("--trace", o.trace, "Print every step");

  auto* steps = app.add_subcommand("steps", "Count machine steps");
  term(steps);
  machine(steps);
  fuel(steps);
  format(steps);

  auto* typing = app.add_subcommand("typing", "Principal typing or 1-typings of a normal term");
  term(typing);
  typing->add_option("--kind", o.kind, "principal or one")->check(CLI::IsMember({"principal", "one"}));
  typing->add_option("--bound", o.bound, "Size bound for 1-typings");
  format(typing);

  auto* mind = app.add_subcommand("min-derivation", "Least derivation size");
  term(mind);
  mind->add_option("--bound", o.bound, "Derivation size bound");
  mind->add_flag("--exact", o.exact, "Only exact typings");
  format(mind);

  auto* interp = app.add_subcommand("interpret", "Bounded interpretation");
  term(interp);
  interp->add_option("--bound", o.bound, "Point size bound");
  interp->add_option("--cap", o.cap, "Derivation size cap when the term does not normalize");
  fuel(interp);
  format(interp);

  auto* predict = app.add_subcommand("predict", "Predict the steps of (v)u from the semantics");
  term(predict);
  term(predict, "arg");
  predict->add_option("--mode", o.machine, "Machine")->check(CLI::IsMember({"head", "beta"}));
  predict->add_option("--bound", o.bound, "Cost bound");
  format(predict);

  auto* verify = app.add_subcommand("verify", "Run the theorem verification suites");
  verify->add_option("suites", o.suites, "Suites to run (default all)");
  verify->add_option("--corpus-size", o.corpus_size, "Largest corpus term")->capture_default_str();
  verify->add_option("--pair-size", o.pair_size, "Largest paired normal term")->capture_default_str();
  verify->add_option("--bound", o.bound, "Search bound for divergent terms");
  fuel(verify);
  format(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (o.fuel == 0) o.fuel = default_fuel();
    if (*parse) return cmd_parse(o);
    if (*runc) return cmd_run(o);
    if (*steps) return cmd_steps(o);
    if (*typing) return cmd_typing(o);
    if (*mind) return cmd_min_derivation(o);
    if (*interp) return cmd_interpret(o);
    if (*predict) return cmd_predict(o);
    if (*verify) return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kUsageError;
}
