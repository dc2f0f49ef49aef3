// Runs every acceptance suite and prints one line per criterion.
#include <cstdio>
#include <cstdlib>

#include "klab/verify.hpp"

int main(int argc, char** argv) {
  klab::VerifyOptions opts;
  if (const char* s = std::getenv("KLAB_CORPUS_SIZE")) opts.corpus_size = std::strtoul(s, nullptr, 10);
  if (const char* s = std::getenv("KLAB_PAIR_SIZE")) opts.pair_size = std::strtoul(s, nullptr, 10);
  bool all = true;
  int index = 0;
  auto print = [&](const klab::SuiteResult& r) {
    std::printf("%s  %2d %-20s %8.2fs  %s\n", r.pass ? "PASS" : "FAIL", ++index, r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  };
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) print(klab::run_suite(argv[i], opts));
  } else {
    klab::run_all_suites(opts, print);
  }
  return all ? 0 : 1;
}
