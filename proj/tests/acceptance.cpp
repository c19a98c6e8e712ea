// Acceptance runner: one pass/fail line per criterion, nonzero exit on any
// failure.  Seed comes from argv[1] if given.

#include <cstdio>
#include <cstdlib>

#include "quadmap/selftest.hpp"

int main(int argc, char** argv) {
  const unsigned seed = argc > 1 ? static_cast<unsigned>(std::atoi(argv[1])) : 0;
  const auto results = quadmap::run_acceptance(seed);
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %-55s (%6.2fs)  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.seconds, r.detail.c_str());
    all = all && r.passed;
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASSED" : "FAILURES PRESENT");
  return all ? 0 : 1;
}
