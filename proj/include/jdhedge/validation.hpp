#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jdhedge {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the validation battery (closed forms vs Monte Carlo and quadrature
// oracles, recursion identities, degeneracies, structural tree properties),
// printing one PASS/FAIL line per criterion. golden_dir, when non-empty,
// additionally byte-compares the pinned seed-42 outputs against the committed
// golden files there.
std::vector<CriterionResult> run_validation(std::ostream& out,
                                            const std::string& golden_dir = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace jdhedge
