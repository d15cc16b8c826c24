#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace siirv {

// Hidden constants of the asymptotic statements, surfaced as configuration.
struct Constants {
    double c_tail = 4.0;   // tail radius multiplier
    double c_part = 64.0;  // partition function bound multiplier
    double c_rcrit = 8.0;  // additive term of the critical radius
    double c_h = 8.0;      // sample count multiplier in hypothesis selection
    std::array<double, 4> c_n{1.0, 1.0, 1.0, 1.0};  // n1..n4 of the critical order
    double c_siiurv = 1.0;   // critical order for unimodal sums
    double c_massage = 6.0;  // kappa = ceil(1 + c_massage / eps) for negative binomial covers
    std::uint64_t candidate_budget = 50000;
    std::uint64_t grid_cap = 10000000;
    std::uint64_t materialize_cap = 100000;
    int mode_scan_extra = 64;  // Delta = 8 * ceil(L) + mode_scan_extra

    // Overrides fields present in a JSON object; unknown keys are a ConfigError.
    static Constants from_json_text(const std::string& text);
    static Constants from_json_text(const std::string& text, const Constants& base);
    std::string to_json_text() const;
};

// Reads SIIRV_LAB_CONSTANTS (a path to a JSON file) if set.
Constants constants_from_env();

}  // namespace siirv
