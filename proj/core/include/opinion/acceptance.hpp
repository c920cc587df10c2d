#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace opinion {

struct AcceptanceCheck {
  std::string id;     // "A1" .. "A9"
  std::string title;  // what the criterion verifies
  bool passed = false;
  std::string detail;  // the numbers behind the verdict
  double seconds = 0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  std::vector<std::string> only;  // run just these ids; empty runs all
};

// The full verification suite: exact energy identities, path formula
// agreement, isoperimetric enumeration, brute-force oracle + spectral gap,
// Arrhenius slope, exponential law, gate attribution, recurrence budget,
// and restricted gate disconnection. Each check is self-contained and
// deterministic given the seed.
std::vector<AcceptanceCheck> run_acceptance_suite(
    const AcceptanceOptions& opt = {});

}  // namespace opinion
