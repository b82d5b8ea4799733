// Runs every acceptance criterion and prints one PASS/FAIL line each.
#include <iostream>

#include "rol/acceptance.hpp"

int main() {
  bool ok = true;
  rol::run_acceptance({}, [&](const rol::CriterionResult& r) {
    std::cout << r.line() << std::endl;
    ok = ok && r.passed;
  });
  return ok ? 0 : 1;
}
