// Runs the verification suite and prints one line per criterion. The binary
// exits nonzero when any criterion fails, so ctest reports it directly.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "drzero/verification.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 12022901u;
  for (int i = 1; i + 1 < argc + 1; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) seed = std::strtoull(argv[i + 1], nullptr, 10);
  }

  const auto results = drzero::run_acceptance(seed);
  int failures = 0;
  std::printf("verification suite, seed %llu\n", static_cast<unsigned long long>(seed));
  for (const auto& r : results) {
    std::printf("[%s] criterion %2d %-28s (%.2fs) %s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.c_str());
    if (!r.passed) ++failures;
  }
  std::printf("%d/%d criteria passed\n", static_cast<int>(results.size()) - failures,
              static_cast<int>(results.size()));
  return failures == 0 ? 0 : 1;
}
