// Acceptance suite: one PASS/FAIL line per criterion.
//   critwave_acceptance [name ...]
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "critwave/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only(argv + 1, argv + argc);
  critwave::AcceptanceOptions options;
  if (const char* dir = std::getenv("CRITWAVE_ARTIFACTS"); dir && *dir) options.artifact_dir = dir;
  try {
    bool all = true;
    for (const auto& r : critwave::run_acceptance(options, only)) {
      std::cout << critwave::format_result(r) << std::endl;
      all = all && r.pass;
    }
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}
