#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "modeguide/acceptance.hpp"

int main(int argc, char** argv) {
  modeguide::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
    else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) opt.only.push_back(std::atoi(argv[++i]));
    else {
      std::fprintf(stderr, "usage: acceptance [--quick] [--only ID]...\n");
      return 2;
    }
  }
  int failed = 0;
  opt.on_result = [&](const modeguide::CriterionResult& r) {
    std::printf("%s %2d %s: %s (%.1f s)\n", r.status().c_str(), r.id, r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    if (!r.passed && !r.skipped) ++failed;
  };
  modeguide::run_acceptance(opt);
  std::printf("%s: %d failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
