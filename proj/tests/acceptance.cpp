// Acceptance suite: runs the fourteen verification criteria and prints one
// pass/fail line per criterion. With arguments, runs only the listed
// criterion numbers.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "asyscd/verify.hpp"

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int number = std::atoi(argv[i]);
    if (number < 1 || number > 14) {
      std::fprintf(stderr, "usage: %s [criterion numbers 1-14]\n", argv[0]);
      return 2;
    }
    selected.push_back(number);
  }
  if (selected.empty())
    for (int i = 1; i <= 14; ++i) selected.push_back(i);

  bool all_pass = true;
  for (int number : selected) {
    const asyscd::checks::CheckResult r = asyscd::checks::run_one(number);
    const char* tag = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
    std::printf("%s c%02d %s (%s) [%.2fs]\n", tag, number, r.name.c_str(), r.detail.c_str(),
                r.seconds);
    std::fflush(stdout);
    all_pass = all_pass && (r.pass || r.skipped);
  }
  return all_pass ? 0 : 1;
}
