#pragma once

#include <string>
#include <vector>

namespace polyelast {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// The acceptance criteria, each against a closed form or an independent oracle.
CheckResult check_counterexample_energy();
CheckResult check_pressure_closed_form();
CheckResult check_buckling_identity();
CheckResult check_identity_ground_truth();
CheckResult check_bvp_invariants();
CheckResult check_delayed_structure();
CheckResult check_fourier_estimates();
CheckResult check_convexity_oracle();
CheckResult check_threshold_arithmetic();
CheckResult check_gradient_correctness();

std::vector<CheckResult> run_acceptance_suite();

// "PASS [id] name (seconds) : detail"
std::string format_check_line(const CheckResult& r);

}  // namespace polyelast
