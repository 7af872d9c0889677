#include <cstdio>

#include "ccrlab/selftest.hpp"

int main() {
  using namespace ccrlab::selftest;
  int failed = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    auto r = run_criterion(id);
    std::printf("%s\n", format_line(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%d/%d criteria passed\n", kCriterionCount - failed, kCriterionCount);
  return failed == 0 ? 0 : 1;
}
