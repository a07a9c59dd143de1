#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace rstre {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    nlohmann::json details;
};

// Check ids for a verification level: fast = identity/oracle/property checks,
// full = everything including the scaling sweeps and big-n Monte Carlo.
std::vector<int> verify_checks_for_level(const std::string& level);

// Runs one acceptance check (1..10).
CheckResult run_acceptance_check(int id);

// Runs a set of checks and assembles the JSON report; pass iff all pass.
nlohmann::json run_verify_suite(const std::vector<int>& ids, bool* all_pass);

}  // namespace rstre
