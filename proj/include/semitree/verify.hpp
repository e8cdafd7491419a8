#pragma once

#include <string>
#include <vector>

#include "semitree/types.hpp"

namespace semitree {

// One internal consistency check: residual measured over a seeded grid, passing
// when it stays at or below tol.
struct CheckResult {
    std::string name;
    double residual = 0;
    double tol = 0;
    bool pass = false;
};

struct VerifyOptions {
    // Multiplies B by (1 + perturb) inside the identity checks. Nonzero values
    // must make the suite fail; the CLI exposes this as a sensitivity probe.
    double perturb = 0;
    std::uint64_t seed = 0x5eed5eedULL;
    int gammas_per_pair = 60; // grid density for the identity checks
};

// Runs the cross-module suite (algebraic identities, evaluator agreement,
// combinatorial census, spectrum geometry, oracle spot checks).
std::vector<CheckResult> run_verification(const VerifyOptions& opt = {});

} // namespace semitree
