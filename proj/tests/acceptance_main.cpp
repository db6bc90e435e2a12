// Acceptance gate: one line per criterion, nonzero exit if any fails.
//   acceptance                 all criteria
//   acceptance --criterion N   criterion N only

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "bwlc/verify.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      ids.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (ids.empty()) {
    for (int id = 1; id <= bwlc::AcceptanceSuite::kCount; ++id) ids.push_back(id);
  }

  bwlc::AcceptanceSuite suite;
  int failed = 0;
  for (int id : ids) {
    const auto r = suite.run(id);
    std::printf("[%s] criterion %2d: %s (%.2fs): %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    failed += !r.passed;
  }
  return failed ? 1 : 0;
}
