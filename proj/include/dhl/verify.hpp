#pragma once

#include <string>
#include <vector>

#include "dhl/params.hpp"

namespace dhl::verify {

enum class Level { fast, full };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double wall_ms = 0.0;
};

// The acceptance battery; `fast` trims Monte Carlo sample counts and the
// largest exact-summation case, `full` runs everything at the checked-in
// sizes. Results come back in criterion order.
std::vector<CriterionResult> run_acceptance(Level level, unsigned workers = 0);

// Exposed so the cross-module second-moment consistency can be probed with
// a perturbed constant (a wrong limit must fail).
bool second_moment_matches_hs(const LatticeParams& params, double candidate_limit_sq, double tol);

std::string format_result(const CriterionResult& r);

}  // namespace dhl::verify
