#pragma once

#include <string>
#include <vector>

namespace efl {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Fast invariant suite behind the `check` CLI subcommand: reference energies,
// the diagonalization oracle, symbolic commutators, gradient-engine
// agreement, the matchgate/covariance equivalence and the measurement-budget
// anchors.
std::vector<CheckResult> run_selfcheck();

}  // namespace efl
