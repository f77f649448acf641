#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace limitlab {

struct IdentityCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;  // pass when value > tolerance instead of value <= tolerance
  bool pass = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool passed = false;
  double seconds = 0.0;
};

// Algebraic invariants of the tensor algebra, Landau-de Gennes operators, coefficient
// bridge and expansion machinery, each against an independent brute-force evaluation.
IdentityReport run_identity_suite(std::uint64_t seed);
nlohmann::json to_json(const IdentityReport& r);

}  // namespace limitlab
