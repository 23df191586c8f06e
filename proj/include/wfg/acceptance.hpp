#pragma once

#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace wfg {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::set<int> only;  // empty: all criteria
};

// Runs the acceptance criteria, printing one PASS/FAIL line per criterion as it finishes.
std::vector<CriterionResult> run_acceptance(std::ostream& out, const AcceptanceOptions& opt = {});

}  // namespace wfg
