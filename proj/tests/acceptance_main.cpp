#include <iostream>

#include "decopt/acceptance.hpp"

int main() {
  const int failures = decopt::run_acceptance(std::cout);
  std::cout << (failures == 0 ? "ALL CRITERIA PASS\n"
                              : std::to_string(failures) + " CRITERIA FAIL\n");
  return failures == 0 ? 0 : 1;
}
