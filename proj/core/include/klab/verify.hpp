#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace klab {

struct VerifyOptions {
  std::size_t corpus_size = 9;   // closed terms up to this many nodes
  std::size_t pair_size = 7;     // closed normal terms paired for the semantic suites
  std::size_t fuel = 10000;
  std::size_t untyped_bound = 20;  // search bound for divergent terms
  std::size_t pair_cost = 12;      // unifiable pairs enumerated up to this cost
  std::size_t predict_bound = 32;
};

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::size_t checked = 0;  // instances examined
  std::string detail;       // first counterexample, or a summary
  double seconds = 0;
};

// Suite names in criterion order.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

SuiteResult run_suite(const std::string& name, const VerifyOptions& opts = {});
std::vector<SuiteResult> run_all_suites(const VerifyOptions& opts = {},
                                        const std::function<void(const SuiteResult&)>& on_done = {});

}  // namespace klab
