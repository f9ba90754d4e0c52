// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <cstdio>

#include "emvkit/suite.hpp"

int main() {
  emvkit::SuiteOptions opt;
  opt.full = true;
  int failed = 0;
  double total = 0;
  emvkit::run_acceptance(opt, [&](const emvkit::CriterionResult& r) {
    std::printf("[%s] criterion %2d %-28s %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    failed += !r.pass;
    total += r.seconds;
  });
  std::printf("%d failing, %.1f s total (budget 60 s)\n", failed, total);
  return failed ? 1 : 0;
}
