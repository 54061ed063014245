#include <cstdlib>
#include <iostream>
#include <string>

#include "fpp/acceptance.hpp"

int main(int argc, char** argv) {
  fpp::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) options.only.insert(std::stoi(argv[i]));
  int failed = 0;
  for (const auto& outcome : fpp::run_acceptance(options)) {
    std::cout << fpp::format_outcome(outcome) << std::endl;
    failed += !outcome.passed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
