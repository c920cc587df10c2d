// Runs the full verification suite and prints one verdict line per
// criterion; exits nonzero if any fails. --only A5,A7 restricts the run.
#include <cstdio>
#include <cstring>
#include <string>

#include "opinion/acceptance.hpp"

int main(int argc, char** argv) {
  opinion::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) {
      opt.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      std::string list = argv[++i];
      for (std::size_t pos = 0; pos < list.size();) {
        std::size_t comma = list.find(',', pos);
        if (comma == std::string::npos) comma = list.size();
        opt.only.push_back(list.substr(pos, comma - pos));
        pos = comma + 1;
      }
    } else {
      std::fprintf(stderr, "usage: %s [--seed U64] [--only A1,A2,...]\n",
                   argv[0]);
      return 2;
    }
  }
  int failures = 0;
  for (const opinion::AcceptanceCheck& c : opinion::run_acceptance_suite(opt)) {
    std::printf("%s %s (%s): %s [%.1fs]\n", c.id.c_str(),
                c.passed ? "PASS" : "FAIL", c.title.c_str(), c.detail.c_str(),
                c.seconds);
    std::fflush(stdout);
    failures += !c.passed;
  }
  return failures ? 1 : 0;
}
