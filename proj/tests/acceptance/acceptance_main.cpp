#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include "greenlab_tools/acceptance.hpp"

// Usage: greenlab_acceptance [seed] [criterion ...]
int main(int argc, char** argv) {
  std::uint64_t seed = 0;
  std::vector<int> only;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  for (int i = 2; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  try {
    const auto results = greenlab::tools::run_acceptance(
        seed, only, [](const greenlab::tools::CriterionResult& r) {
          std::printf("%s\n", greenlab::tools::result_line(r).c_str());
          std::fflush(stdout);
        });
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 3;
  }
}
